#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "dsclust/labeling.hpp"

using dsclust::Cluster;
using dsclust::Clustering;
using dsclust::LabelAssignment;
using dsclust::LabelMethod;

namespace {

Clustering make_clustering(const std::vector<std::vector<Eigen::Index>>& groups,
                           Eigen::Index n_items,
                           const std::vector<std::vector<double>>& weights = {}) {
    Clustering c;
    c.n_items = n_items;
    for (size_t g = 0; g < groups.size(); ++g) {
        Cluster cl;
        cl.members = groups[g];
        if (weights.empty()) {
            cl.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(groups[g].size()),
                                                   1.0 / static_cast<double>(groups[g].size()));
        } else {
            cl.weights.resize(static_cast<Eigen::Index>(weights[g].size()));
            for (size_t i = 0; i < weights[g].size(); ++i)
                cl.weights[static_cast<Eigen::Index>(i)] = weights[g][i];
        }
        cl.extraction_rank = static_cast<int>(g);
        c.clusters.push_back(std::move(cl));
    }
    return c;
}

long long assignment_total(const Eigen::MatrixXi& counts, const std::vector<int>& cols) {
    long long total = 0;
    for (size_t i = 0; i < cols.size(); ++i)
        if (cols[i] >= 0) total += counts(static_cast<Eigen::Index>(i), cols[i]);
    return total;
}

// every injective row->column map, by brute force over padded permutations
void best_assignments(const Eigen::MatrixXi& counts, long long& best_total,
                      std::vector<std::vector<int>>& optimal) {
    const int r = static_cast<int>(counts.rows());
    const int c = static_cast<int>(counts.cols());
    const int s = std::max(r, c);
    std::vector<int> perm(static_cast<size_t>(s));
    std::iota(perm.begin(), perm.end(), 0);
    best_total = -1;
    optimal.clear();
    do {
        long long total = 0;
        std::vector<int> cols(static_cast<size_t>(r), -1);
        for (int i = 0; i < r; ++i) {
            if (perm[static_cast<size_t>(i)] < c) {
                cols[static_cast<size_t>(i)] = perm[static_cast<size_t>(i)];
                total += counts(i, perm[static_cast<size_t>(i)]);
            }
        }
        if (total > best_total) {
            best_total = total;
            optimal.clear();
        }
        if (total == best_total &&
            std::find(optimal.begin(), optimal.end(), cols) == optimal.end())
            optimal.push_back(cols);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

TEST_CASE("sorted_unique_labels sorts and dedupes") {
    CHECK(dsclust::sorted_unique_labels({"b", "a", "b", "c", "a"}) ==
          std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("label_counts tallies cluster-label co-occurrence") {
    const Clustering c = make_clustering({{0, 1, 2}, {3, 4}}, 5);
    const std::vector<std::string> truth = {"x", "x", "y", "y", "y"};
    const Eigen::MatrixXi counts = dsclust::label_counts(c, truth, {"x", "y"});
    CHECK(counts(0, 0) == 2);
    CHECK(counts(0, 1) == 1);
    CHECK(counts(1, 0) == 0);
    CHECK(counts(1, 1) == 2);
}

TEST_CASE("matched totals equal the exhaustive optimum") {
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<int> dim(1, 5);
    std::uniform_int_distribution<int> value(0, 6);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXi counts(dim(rng), dim(rng));
        for (Eigen::Index i = 0; i < counts.rows(); ++i)
            for (Eigen::Index j = 0; j < counts.cols(); ++j) counts(i, j) = value(rng);
        long long best_total = 0;
        std::vector<std::vector<int>> optimal;
        best_assignments(counts, best_total, optimal);
        const std::vector<int> got = dsclust::max_count_assignment(counts);
        CHECK(assignment_total(counts, got) == best_total);
    }
}

TEST_CASE("ties break to the lexicographically smallest optimal assignment") {
    std::mt19937_64 rng(456);
    std::uniform_int_distribution<int> dim(1, 5);
    std::uniform_int_distribution<int> value(0, 2);  // narrow range forces ties
    for (int trial = 0; trial < 150; ++trial) {
        Eigen::MatrixXi counts(dim(rng), dim(rng));
        for (Eigen::Index i = 0; i < counts.rows(); ++i)
            for (Eigen::Index j = 0; j < counts.cols(); ++j) counts(i, j) = value(rng);
        long long best_total = 0;
        std::vector<std::vector<int>> optimal;
        best_assignments(counts, best_total, optimal);
        // -1 (no label) orders after any real column
        const auto key = [](const std::vector<int>& cols) {
            std::vector<int> k = cols;
            for (int& v : k)
                if (v < 0) v = std::numeric_limits<int>::max();
            return k;
        };
        std::vector<int> want = optimal.front();
        for (const auto& cand : optimal)
            if (key(cand) < key(want)) want = cand;
        const std::vector<int> got = dsclust::max_count_assignment(counts);
        CHECK(got == want);
    }
}

TEST_CASE("hand-picked tie cases") {
    SUBCASE("all-equal matrix keeps the identity") {
        Eigen::MatrixXi counts(2, 2);
        counts << 1, 1, 1, 1;
        CHECK(dsclust::max_count_assignment(counts) == std::vector<int>{0, 1});
    }
    SUBCASE("greedy first pick must be rejected") {
        Eigen::MatrixXi counts(2, 2);
        counts << 5, 5, 5, 0;
        CHECK(dsclust::max_count_assignment(counts) == std::vector<int>{1, 0});
    }
    SUBCASE("more clusters than labels leaves later rows unlabeled") {
        Eigen::MatrixXi counts(2, 1);
        counts << 3, 3;
        CHECK(dsclust::max_count_assignment(counts) == std::vector<int>{0, -1});
    }
    SUBCASE("more labels than clusters") {
        Eigen::MatrixXi counts(1, 3);
        counts << 0, 7, 7;
        CHECK(dsclust::max_count_assignment(counts) == std::vector<int>{1});
    }
    SUBCASE("zero matrix still assigns distinct labels") {
        Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(2, 2);
        CHECK(dsclust::max_count_assignment(counts) == std::vector<int>{0, 1});
    }
}

TEST_CASE("label_hungarian maps ranks to label strings") {
    const Clustering c = make_clustering({{0, 1}, {2, 3}, {4}}, 5);
    const std::vector<std::string> truth = {"b", "b", "a", "a", "b"};
    const LabelAssignment got = dsclust::label_hungarian(c, truth);
    CHECK(got.method == LabelMethod::hungarian);
    REQUIRE(got.labels.size() == 3);
    CHECK(*got.labels[0] == "b");
    CHECK(*got.labels[1] == "a");
    CHECK_FALSE(got.labels[2].has_value());
}

TEST_CASE("label_max takes the heaviest member's label") {
    const Clustering c = make_clustering({{0, 1, 2}, {3, 4}}, 5,
                                         {{0.2, 0.5, 0.3}, {0.5, 0.5}});
    const std::vector<std::string> truth = {"a", "b", "a", "c", "a"};
    const LabelAssignment got = dsclust::label_max(c, truth);
    CHECK(got.method == LabelMethod::max);
    CHECK(*got.labels[0] == "b");  // item 1 carries the peak weight
    CHECK(*got.labels[1] == "c");  // tie between items 3 and 4 goes to item 3
}

TEST_CASE("label_max leaves later claims of a taken label unassigned") {
    const Clustering c = make_clustering({{0, 1}, {2, 3}}, 4);
    const std::vector<std::string> truth = {"a", "a", "a", "a"};
    const LabelAssignment got = dsclust::label_max(c, truth);
    CHECK(*got.labels[0] == "a");
    CHECK_FALSE(got.labels[1].has_value());
}

TEST_CASE("size mismatches are rejected") {
    const Clustering c = make_clustering({{0, 1}}, 2);
    CHECK_THROWS_AS(dsclust::label_max(c, {"a"}), std::invalid_argument);
    CHECK_THROWS_AS(dsclust::label_hungarian(c, {"a", "b", "c"}), std::invalid_argument);
}
