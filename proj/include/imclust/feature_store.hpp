#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "imclust/csv.hpp"
#include "imclust/errors.hpp"
#include "imclust/features.hpp"
#include "imclust/io.hpp"

// On-disk feature base. Schema: header `image_id,label,method,f1..fN`
// (N = 9 or 18), one row per image, doubles in shortest round-trip form.

namespace imclust {

struct FeatureTable {
    FeatureMethod method = FeatureMethod::moments;
    std::size_t dimension = 9;
    std::vector<FeatureVector> rows;

    bool operator==(const FeatureTable&) const = default;
};

inline void validate(const FeatureTable& table) {
    if (table.dimension != feature_dimension(table.method))
        throw internal_error("feature table dimension does not match its method");
    std::set<std::string_view> ids;
    for (const FeatureVector& row : table.rows) {
        if (row.method != table.method)
            throw internal_error("feature row " + row.image_id + " has mismatched method");
        if (row.values.size() != table.dimension)
            throw internal_error("feature row " + row.image_id + " has " +
                                 std::to_string(row.values.size()) + " values, expected " +
                                 std::to_string(table.dimension));
        if (!ids.insert(row.image_id).second)
            throw internal_error("duplicate image_id in feature table: " + row.image_id);
    }
}

inline std::string features_csv(const FeatureTable& table) {
    validate(table);
    std::string out = "image_id,label,method";
    for (std::size_t i = 1; i <= table.dimension; ++i)
        out += ",f" + std::to_string(i);
    out += "\n";
    for (const FeatureVector& row : table.rows) {
        out += csv::escape(row.image_id) + "," + csv::escape(row.label.value_or("")) + "," +
               std::string(to_string(row.method));
        for (double v : row.values)
            out += "," + csv::format_double(v);
        out += "\n";
    }
    return out;
}

inline FeatureTable parse_features_csv(std::string_view text) {
    const auto records = csv::split_records(text);
    if (records.empty())
        throw input_error("features: empty file");

    const auto& header = records[0].fields;
    if (header.size() < 4 || header[0] != "image_id" || header[1] != "label" ||
        header[2] != "method")
        throw input_error("features: line 1: expected header 'image_id,label,method,f1..fN'");
    const std::size_t dimension = header.size() - 3;
    if (dimension != 9 && dimension != 18)
        throw input_error("features: line 1: expected 9 or 18 feature columns, got " +
                          std::to_string(dimension));
    for (std::size_t i = 0; i < dimension; ++i)
        if (header[3 + i] != "f" + std::to_string(i + 1))
            throw input_error("features: line 1: bad feature column name '" + header[3 + i] +
                              "'");

    FeatureTable table;
    table.dimension = dimension;
    table.method = dimension == 9 ? FeatureMethod::moments : FeatureMethod::btc;
    std::set<std::string> ids;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const std::size_t line_no = records[r].line_no;
        const auto& fields = records[r].fields;
        if (fields.size() != 3 + dimension)
            throw input_error("features: line " + std::to_string(line_no) + ": expected " +
                              std::to_string(3 + dimension) + " fields, got " +
                              std::to_string(fields.size()));
        FeatureVector row;
        row.image_id = fields[0];
        if (row.image_id.empty())
            throw input_error("features: line " + std::to_string(line_no) + ": empty image_id");
        if (!fields[1].empty())
            row.label = fields[1];
        row.method = parse_feature_method(fields[2]);
        if (row.method != table.method)
            throw input_error("features: line " + std::to_string(line_no) + ": method '" +
                              fields[2] + "' does not match the " +
                              std::to_string(dimension) + "-column header");
        row.values.reserve(dimension);
        for (std::size_t i = 0; i < dimension; ++i)
            row.values.push_back(csv::parse_double(fields[3 + i], line_no));
        if (!ids.insert(row.image_id).second)
            throw input_error("features: line " + std::to_string(line_no) +
                              ": duplicate image_id " + row.image_id);
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline void write_features(const FeatureTable& table, const std::filesystem::path& path) {
    write_text_atomic(path, features_csv(table));
}

inline FeatureTable read_features(const std::filesystem::path& path) {
    try {
        return parse_features_csv(read_file_bytes(path));
    } catch (const input_error& e) {
        throw input_error(path.string() + ": " + e.what());
    }
}

}  // namespace imclust
