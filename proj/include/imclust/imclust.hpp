#pragma once

// Umbrella header pulling in the whole library.

#include "imclust/csv.hpp"
#include "imclust/dataset.hpp"
#include "imclust/errors.hpp"
#include "imclust/evaluation.hpp"
#include "imclust/feature_store.hpp"
#include "imclust/features.hpp"
#include "imclust/image.hpp"
#include "imclust/image_io.hpp"
#include "imclust/io.hpp"
#include "imclust/kmeans.hpp"
#include "imclust/moments.hpp"
#include "imclust/pipeline.hpp"
#include "imclust/ppm.hpp"
#include "imclust/version.hpp"
