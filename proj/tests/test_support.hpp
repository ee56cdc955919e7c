#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "imclust/image.hpp"
#include "imclust/kmeans.hpp"
#include "imclust/ppm.hpp"

namespace testsup {

// Self-deleting scratch directory.
class TempDir {
public:
    TempDir() {
        std::string tmpl =
            (std::filesystem::temp_directory_path() / "imclust_test_XXXXXX").string();
        if (!mkdtemp(tmpl.data()))
            throw std::runtime_error("mkdtemp failed");
        path_ = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline imclust::RgbImage constant_image(int height, int width, imclust::Rgb color) {
    imclust::RgbImage image;
    image.height = height;
    image.width = width;
    image.pixels.assign(static_cast<std::size_t>(height) * width, color);
    return image;
}

inline imclust::RgbImage random_image(std::mt19937_64& gen, int max_side = 16) {
    using imclust::detail::uniform_below;
    imclust::RgbImage image;
    image.height = 1 + static_cast<int>(uniform_below(gen, static_cast<std::uint64_t>(max_side)));
    image.width = 1 + static_cast<int>(uniform_below(gen, static_cast<std::uint64_t>(max_side)));
    const std::size_t n = static_cast<std::size_t>(image.height) * image.width;
    image.pixels.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        image.pixels.push_back(imclust::Rgb{
            static_cast<std::uint8_t>(uniform_below(gen, 256)),
            static_cast<std::uint8_t>(uniform_below(gen, 256)),
            static_cast<std::uint8_t>(uniform_below(gen, 256))});
    return image;
}

inline imclust::RgbImage permuted_pixels(const imclust::RgbImage& image, std::mt19937_64& gen) {
    imclust::RgbImage copy = image;
    for (std::size_t i = copy.pixels.size(); i > 1; --i)
        std::swap(copy.pixels[i - 1],
                  copy.pixels[imclust::detail::uniform_below(gen, i)]);
    return copy;
}

// Writes a per-class-subdirectory corpus of constant-color PPM images.
// Returns the class colors keyed by class name.
inline std::vector<std::pair<std::string, imclust::Rgb>> write_constant_corpus(
    const std::filesystem::path& root, int num_classes, int images_per_class,
    int height = 8, int width = 12) {
    std::vector<std::pair<std::string, imclust::Rgb>> classes;
    for (int c = 0; c < num_classes; ++c) {
        const std::string name = "class_" + std::string(1, static_cast<char>('a' + c));
        const imclust::Rgb color{static_cast<std::uint8_t>(25 * c + 5),
                                 static_cast<std::uint8_t>(255 - 23 * c),
                                 static_cast<std::uint8_t>(60 + 17 * c)};
        classes.emplace_back(name, color);
        std::filesystem::create_directories(root / name);
        for (int i = 0; i < images_per_class; ++i) {
            const std::string file = "img" + std::to_string(i) + ".ppm";
            imclust::write_ppm_p6(constant_image(height, width, color), root / name / file);
        }
    }
    return classes;
}

}  // namespace testsup
