#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "imclust/csv.hpp"
#include "imclust/errors.hpp"

namespace imclust {

struct LabeledAssignment {
    std::string image_id;
    std::string true_class;
    int cluster = 0;

    bool operator==(const LabeledAssignment&) const = default;
};

struct ClassScore {
    double recall = 0.0;     // percentage in [0, 100]
    double precision = 0.0;  // percentage in [0, 100]
    std::size_t retrieved = 0;
    std::size_t relevant_retrieved = 0;
    bool empty_retrieval = false;  // no cluster mapped to this class

    bool operator==(const ClassScore&) const = default;
};

struct EvaluationReport {
    std::map<int, std::string> cluster_to_class;
    std::map<std::string, ClassScore> per_class;
    double macro_recall = 0.0;
    double macro_precision = 0.0;

    bool operator==(const EvaluationReport&) const = default;
};

// Labels each cluster with the majority true class of its members; ties go
// to the lexicographically smallest class name. Several clusters may map
// to one class, leaving other classes with no cluster at all.
inline std::map<int, std::string> map_clusters(const std::vector<LabeledAssignment>& assignments) {
    if (assignments.empty())
        throw input_error("map_clusters: no assignments");
    std::map<int, std::map<std::string, std::size_t>> tallies;
    for (const auto& a : assignments) {
        if (a.cluster < 0)
            throw input_error("map_clusters: negative cluster index for image " + a.image_id);
        ++tallies[a.cluster][a.true_class];
    }
    std::map<int, std::string> mapping;
    for (const auto& [cluster, counts] : tallies) {
        const std::string* best = nullptr;
        std::size_t best_count = 0;
        for (const auto& [name, count] : counts) {
            if (count > best_count) {  // strict: first (smallest) name wins ties
                best_count = count;
                best = &name;
            }
        }
        mapping.emplace(cluster, *best);
    }
    return mapping;
}

inline EvaluationReport score(const std::vector<LabeledAssignment>& assignments,
                              const std::map<int, std::string>& mapping) {
    if (assignments.empty())
        throw input_error("score: no assignments");

    std::map<std::string, std::size_t> population;
    std::map<std::string, std::size_t> retrieved;
    std::map<std::string, std::size_t> relevant;
    std::set<std::string> classes;
    for (const auto& [cluster, name] : mapping)
        classes.insert(name);

    for (const auto& a : assignments) {
        const auto it = mapping.find(a.cluster);
        if (it == mapping.end())
            throw input_error("score: cluster " + std::to_string(a.cluster) +
                              " (image " + a.image_id + ") missing from cluster mapping");
        classes.insert(a.true_class);
        ++population[a.true_class];
        ++retrieved[it->second];
        if (it->second == a.true_class)
            ++relevant[a.true_class];
    }

    EvaluationReport report;
    report.cluster_to_class = mapping;
    for (const std::string& name : classes) {
        ClassScore s;
        s.retrieved = retrieved.count(name) ? retrieved.at(name) : 0;
        s.relevant_retrieved = relevant.count(name) ? relevant.at(name) : 0;
        const std::size_t pop = population.count(name) ? population.at(name) : 0;
        s.recall = pop > 0 ? 100.0 * static_cast<double>(s.relevant_retrieved) /
                                 static_cast<double>(pop)
                           : 0.0;
        if (s.retrieved > 0) {
            s.precision = 100.0 * static_cast<double>(s.relevant_retrieved) /
                          static_cast<double>(s.retrieved);
        } else {
            s.precision = 0.0;
            s.empty_retrieval = true;
        }
        report.per_class.emplace(name, s);
        report.macro_recall += s.recall;
        report.macro_precision += s.precision;
    }
    report.macro_recall /= static_cast<double>(report.per_class.size());
    report.macro_precision /= static_cast<double>(report.per_class.size());
    return report;
}

// --- serialization ---------------------------------------------------------

inline std::string report_csv(const EvaluationReport& report) {
    std::string out = "class,recall,precision,retrieved,relevant_retrieved\n";
    for (const auto& [name, s] : report.per_class) {
        out += csv::escape(name) + "," + csv::format_percent(s.recall) + "," +
               csv::format_percent(s.precision) + "," + std::to_string(s.retrieved) + "," +
               std::to_string(s.relevant_retrieved) + "\n";
    }
    return out;
}

inline std::string report_table(const EvaluationReport& report) {
    std::size_t name_width = std::string("Classes").size();
    for (const auto& [name, s] : report.per_class)
        name_width = std::max(name_width, name.size());

    const auto pad = [](std::string text, std::size_t width) {
        if (text.size() < width)
            text.append(width - text.size(), ' ');
        return text;
    };

    std::string out = pad("Classes", name_width) + "  " + pad("Recall", 8) + "  Precision\n";
    bool any_empty = false;
    for (const auto& [name, s] : report.per_class) {
        std::string precision = csv::format_percent(s.precision);
        if (s.empty_retrieval) {
            precision += "*";
            any_empty = true;
        }
        out += pad(name, name_width) + "  " + pad(csv::format_percent(s.recall), 8) + "  " +
               precision + "\n";
    }
    out += pad("Macro average", name_width) + "  " +
           pad(csv::format_percent(report.macro_recall), 8) + "  " +
           csv::format_percent(report.macro_precision) + "\n";
    if (any_empty)
        out += "* no cluster mapped to this class\n";
    return out;
}

inline std::string assignments_csv(const std::vector<LabeledAssignment>& assignments) {
    std::string out = "image_id,label,cluster\n";
    for (const auto& a : assignments)
        out += csv::escape(a.image_id) + "," + csv::escape(a.true_class) + "," +
               std::to_string(a.cluster) + "\n";
    return out;
}

// Parses assignments.csv. Rows with an empty label are accepted only when
// allow_unlabeled is set; evaluation always refuses them.
inline std::vector<LabeledAssignment> parse_assignments_csv(std::string_view text,
                                                            bool allow_unlabeled = false) {
    const auto records = csv::split_records(text);
    if (records.empty())
        throw input_error("assignments: empty file");
    if (records[0].fields != std::vector<std::string>{"image_id", "label", "cluster"})
        throw input_error("assignments: line 1: expected header 'image_id,label,cluster'");
    std::vector<LabeledAssignment> out;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::string line = std::to_string(rec.line_no);
        if (rec.fields.size() != 3)
            throw input_error("assignments: line " + line + ": expected 3 fields, got " +
                              std::to_string(rec.fields.size()));
        LabeledAssignment a;
        a.image_id = rec.fields[0];
        a.true_class = rec.fields[1];
        a.cluster = static_cast<int>(csv::parse_long(rec.fields[2], rec.line_no));
        if (a.image_id.empty())
            throw input_error("assignments: line " + line + ": empty image_id");
        if (a.true_class.empty() && !allow_unlabeled)
            throw input_error("assignments: line " + line + ": image " + a.image_id +
                              " has no class label; evaluation needs labeled data");
        if (a.cluster < 0)
            throw input_error("assignments: line " + line + ": negative cluster index");
        if (!seen.insert(a.image_id).second)
            throw input_error("assignments: line " + line + ": duplicate image_id " +
                              a.image_id);
        out.push_back(std::move(a));
    }
    if (out.empty())
        throw input_error("assignments: no data rows");
    return out;
}

}  // namespace imclust
