#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "imclust/evaluation.hpp"

#include "oracles.hpp"

using namespace imclust;

namespace {

std::vector<LabeledAssignment> make_rows(
    const std::vector<std::pair<std::string, int>>& class_and_cluster) {
    std::vector<LabeledAssignment> rows;
    int n = 0;
    for (const auto& [cls, cluster] : class_and_cluster)
        rows.push_back({"img" + std::to_string(n++), cls, cluster});
    return rows;
}

std::vector<LabeledAssignment> random_corpus(std::mt19937_64& gen, int num_classes,
                                             int num_clusters, int rows) {
    std::uniform_int_distribution<int> cls(0, num_classes - 1);
    std::uniform_int_distribution<int> clu(0, num_clusters - 1);
    std::vector<LabeledAssignment> out;
    for (int i = 0; i < rows; ++i)
        out.push_back({"img" + std::to_string(i),
                       "class_" + std::string(1, static_cast<char>('a' + cls(gen))), clu(gen)});
    return out;
}

}  // namespace

TEST_CASE("map_clusters picks the majority class") {
    const auto rows = make_rows({{"Buses", 0}, {"Buses", 0}, {"Flowers", 0}});
    const auto mapping = map_clusters(rows);
    REQUIRE(mapping.at(0) == "Buses");
}

TEST_CASE("map_clusters breaks ties lexicographically") {
    const auto rows = make_rows({{"Flowers", 1}, {"Buses", 1}});
    REQUIRE(map_clusters(rows).at(1) == "Buses");
}

TEST_CASE("several clusters may map to one class") {
    const auto rows = make_rows(
        {{"Dinosaurs", 0}, {"Dinosaurs", 0}, {"Dinosaurs", 1}, {"Dinosaurs", 1}, {"Buses", 1}});
    const auto mapping = map_clusters(rows);
    REQUIRE(mapping.at(0) == "Dinosaurs");
    REQUIRE(mapping.at(1) == "Dinosaurs");
}

TEST_CASE("perfect single-class clustering scores 100/100") {
    const auto rows = make_rows({{"A", 0}, {"A", 0}, {"A", 0}, {"A", 0}});
    const auto report = score(rows, map_clusters(rows));
    REQUIRE(report.per_class.at("A").recall == 100.0);
    REQUIRE(report.per_class.at("A").precision == 100.0);
    REQUIRE(report.macro_recall == 100.0);
    REQUIRE(report.macro_precision == 100.0);
}

TEST_CASE("two-class worked example") {
    // cluster 0 = {A, A, B} -> A, cluster 1 = {B} -> B
    const auto rows = make_rows({{"A", 0}, {"A", 0}, {"B", 0}, {"B", 1}});
    const auto mapping = map_clusters(rows);
    REQUIRE(mapping.at(0) == "A");
    REQUIRE(mapping.at(1) == "B");

    const auto report = score(rows, mapping);
    const ClassScore& a = report.per_class.at("A");
    const ClassScore& b = report.per_class.at("B");
    REQUIRE(a.recall == 100.0);
    REQUIRE(a.precision == Catch::Approx(200.0 / 3.0).margin(1e-12));
    REQUIRE(a.retrieved == 3);
    REQUIRE(a.relevant_retrieved == 2);
    REQUIRE(b.recall == 50.0);
    REQUIRE(b.precision == 100.0);
    REQUIRE(b.retrieved == 1);
    REQUIRE(b.relevant_retrieved == 1);
    REQUIRE(csv::format_percent(a.precision) == "66.67");
    REQUIRE(report.macro_recall == 75.0);
    REQUIRE(report.macro_precision ==
            Catch::Approx((200.0 / 3.0 + 100.0) / 2.0).margin(1e-12));
}

TEST_CASE("a class that owns no cluster is flagged") {
    // both clusters vote A; B keeps its population but retrieves nothing
    const auto rows = make_rows({{"A", 0}, {"A", 1}, {"A", 1}, {"B", 0}});
    const auto report = score(rows, map_clusters(rows));
    const ClassScore& b = report.per_class.at("B");
    REQUIRE(b.recall == 0.0);
    REQUIRE(b.precision == 0.0);
    REQUIRE(b.retrieved == 0);
    REQUIRE(b.empty_retrieval);
    REQUIRE_THAT(report_table(report), Catch::Matchers::ContainsSubstring("0.00*"));
    REQUIRE_THAT(report_table(report),
                 Catch::Matchers::ContainsSubstring("* no cluster mapped"));
}

TEST_CASE("hundred-image anchor counts format as 99.00 and 97.06") {
    std::vector<LabeledAssignment> rows;
    int n = 0;
    const auto add = [&](const std::string& cls, int cluster, int copies) {
        for (int i = 0; i < copies; ++i)
            rows.push_back({"img" + std::to_string(n++), cls, cluster});
    };
    add("Dinosaurs", 0, 99);  // cluster 0 retrieves 102 images, 99 relevant
    add("Elephants", 0, 3);
    add("Dinosaurs", 1, 1);
    add("Elephants", 1, 97);

    const auto mapping = map_clusters(rows);
    REQUIRE(mapping.at(0) == "Dinosaurs");
    REQUIRE(mapping.at(1) == "Elephants");

    const auto report = score(rows, mapping);
    const ClassScore& d = report.per_class.at("Dinosaurs");
    REQUIRE(d.retrieved == 102);
    REQUIRE(d.relevant_retrieved == 99);
    REQUIRE(csv::format_percent(d.recall) == "99.00");
    REQUIRE(csv::format_percent(d.precision) == "97.06");
    REQUIRE_THAT(report_csv(report),
                 Catch::Matchers::ContainsSubstring("Dinosaurs,99.00,97.06,102,99"));
}

TEST_CASE("score refuses clusters missing from the mapping") {
    const auto rows = make_rows({{"A", 0}, {"A", 3}});
    const std::map<int, std::string> mapping = {{0, "A"}};
    REQUIRE_THROWS_MATCHES(score(rows, mapping), input_error,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("cluster 3")));
}

TEST_CASE("score and map_clusters refuse empty input") {
    REQUIRE_THROWS_AS(map_clusters({}), input_error);
    REQUIRE_THROWS_AS(score({}, {}), input_error);
}

TEST_CASE("retrieved counts partition the corpus") {
    std::mt19937_64 gen(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rows = random_corpus(gen, 2 + trial % 4, 1 + trial % 5, 5 + trial % 40);
        const auto report = score(rows, map_clusters(rows));
        std::size_t total = 0;
        for (const auto& [name, s] : report.per_class)
            total += s.retrieved;
        REQUIRE(total == rows.size());
    }
}

TEST_CASE("score matches a brute-force recount") {
    std::mt19937_64 gen(42);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rows = random_corpus(gen, 2 + trial % 4, 1 + trial % 5, 5 + trial % 40);
        const auto mapping = map_clusters(rows);
        const auto report = score(rows, mapping);
        const auto counts = oracle::recount(rows, mapping);
        for (const auto& [name, s] : report.per_class) {
            const auto it = counts.find(name);
            const std::size_t pop = it == counts.end() ? 0 : it->second.population;
            const std::size_t retrieved = it == counts.end() ? 0 : it->second.retrieved;
            const std::size_t relevant = it == counts.end() ? 0 : it->second.relevant;
            REQUIRE(s.retrieved == retrieved);
            REQUIRE(s.relevant_retrieved == relevant);
            const double recall =
                pop > 0 ? 100.0 * static_cast<double>(relevant) / static_cast<double>(pop) : 0.0;
            const double precision =
                retrieved > 0
                    ? 100.0 * static_cast<double>(relevant) / static_cast<double>(retrieved)
                    : 0.0;
            REQUIRE(s.recall == recall);
            REQUIRE(s.precision == precision);
        }
    }
}

TEST_CASE("cluster relabeling and row order leave the report unchanged") {
    std::mt19937_64 gen(43);
    for (int trial = 0; trial < 200; ++trial) {
        const int num_clusters = 2 + trial % 5;
        auto rows = random_corpus(gen, 2 + trial % 3, num_clusters, 10 + trial % 30);
        const auto base = score(rows, map_clusters(rows));

        std::vector<int> perm(static_cast<std::size_t>(num_clusters));
        for (int c = 0; c < num_clusters; ++c)
            perm[static_cast<std::size_t>(c)] = c;
        std::shuffle(perm.begin(), perm.end(), gen);
        for (auto& row : rows)
            row.cluster = perm[static_cast<std::size_t>(row.cluster)];
        std::shuffle(rows.begin(), rows.end(), gen);

        const auto relabeled = score(rows, map_clusters(rows));
        REQUIRE(relabeled.per_class == base.per_class);
        REQUIRE(relabeled.macro_recall == base.macro_recall);
        REQUIRE(relabeled.macro_precision == base.macro_precision);
    }
}

TEST_CASE("pure clusters covering every class score all-100") {
    std::mt19937_64 gen(44);
    for (int trial = 0; trial < 50; ++trial) {
        const int num_classes = 2 + trial % 5;
        std::vector<LabeledAssignment> rows;
        int n = 0;
        for (int c = 0; c < num_classes; ++c) {
            const int copies = 1 + static_cast<int>(gen() % 7);
            for (int i = 0; i < copies; ++i)
                rows.push_back({"img" + std::to_string(n++),
                                "class_" + std::string(1, static_cast<char>('a' + c)), c});
        }
        std::shuffle(rows.begin(), rows.end(), gen);
        const auto report = score(rows, map_clusters(rows));
        for (const auto& [name, s] : report.per_class) {
            REQUIRE(s.recall == 100.0);
            REQUIRE(s.precision == 100.0);
        }
    }
}

TEST_CASE("report_csv has the documented schema") {
    const auto rows = make_rows({{"A", 0}, {"B, with comma", 1}});
    const auto report = score(rows, map_clusters(rows));
    const std::string text = report_csv(report);
    REQUIRE_THAT(text, Catch::Matchers::StartsWith(
                           "class,recall,precision,retrieved,relevant_retrieved\n"));
    REQUIRE_THAT(text, Catch::Matchers::ContainsSubstring("\"B, with comma\""));
    REQUIRE_THAT(text, Catch::Matchers::ContainsSubstring("A,100.00,100.00,1,1\n"));
}

TEST_CASE("report_table lists every class and the macro row") {
    const auto rows = make_rows({{"Beaches", 0}, {"Buses", 1}});
    const std::string table = report_table(score(rows, map_clusters(rows)));
    REQUIRE_THAT(table, Catch::Matchers::StartsWith("Classes"));
    REQUIRE_THAT(table, Catch::Matchers::ContainsSubstring("Beaches"));
    REQUIRE_THAT(table, Catch::Matchers::ContainsSubstring("Buses"));
    REQUIRE_THAT(table, Catch::Matchers::ContainsSubstring("Macro average"));
    REQUIRE_THAT(table, !Catch::Matchers::ContainsSubstring("*"));
}

TEST_CASE("assignments round-trip through CSV") {
    std::mt19937_64 gen(45);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rows = random_corpus(gen, 3, 4, 20);
        REQUIRE(parse_assignments_csv(assignments_csv(rows)) == rows);
    }
}

TEST_CASE("assignments CSV quoting survives awkward names") {
    const std::vector<LabeledAssignment> rows = {
        {"a,b.ppm", "cls\"quoted\"", 0},
        {"plain.ppm", "line\nbreak", 1},
    };
    REQUIRE(parse_assignments_csv(assignments_csv(rows)) == rows);
}

TEST_CASE("assignments parser reports precise errors") {
    REQUIRE_THROWS_MATCHES(parse_assignments_csv(""), input_error,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("empty")));
    REQUIRE_THROWS_MATCHES(parse_assignments_csv("id,label,cluster\n"), input_error,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("header")));
    REQUIRE_THROWS_MATCHES(parse_assignments_csv("image_id,label,cluster\na,b\n"), input_error,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("line 2")));
    REQUIRE_THROWS_MATCHES(
        parse_assignments_csv("image_id,label,cluster\na,b,0\na,b,1\n"), input_error,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("duplicate")));
    REQUIRE_THROWS_AS(parse_assignments_csv("image_id,label,cluster\na,b,x\n"), input_error);
    REQUIRE_THROWS_AS(parse_assignments_csv("image_id,label,cluster\na,b,-1\n"), input_error);
    REQUIRE_THROWS_AS(parse_assignments_csv("image_id,label,cluster\n"), input_error);
}

TEST_CASE("unlabeled rows need explicit permission") {
    const std::string text = "image_id,label,cluster\na.ppm,,0\n";
    REQUIRE_THROWS_MATCHES(parse_assignments_csv(text), input_error,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("no class label")));
    const auto rows = parse_assignments_csv(text, true);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].true_class.empty());
}
