#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "dsclust/affinity.hpp"
#include "dsclust/embeddings.hpp"
#include "dsclust/sweep.hpp"

using dsclust::LabelMethod;
using dsclust::SweepAxes;
using dsclust::SweepRow;

namespace {

SweepAxes tiny_axes() {
    SweepAxes axes;
    axes.thetas = {0.0, 0.2};
    axes.epsilons = {1e-6, 1e-4, 1e-2};
    return axes;
}

std::vector<SweepRow> run(const dsclust::EmbeddingSet& set, const SweepAxes& axes,
                          unsigned threads = 0) {
    return dsclust::run_sweep(set, axes, 7, LabelMethod::hungarian, 10000, threads);
}

}  // namespace

TEST_CASE("sweep reuses one affinity matrix for the whole grid") {
    const auto set = dsclust::synth_embeddings(3, 4, 16, 0.0, 2);
    const std::uint64_t before = dsclust::affinity_build_count().load();
    run(set, tiny_axes());
    CHECK(dsclust::affinity_build_count().load() == before + 1);
}

TEST_CASE("rows come out theta-major in axis order") {
    const auto set = dsclust::synth_embeddings(3, 4, 16, 0.0, 2);
    const SweepAxes axes = tiny_axes();
    const auto rows = run(set, axes);
    REQUIRE(rows.size() == 6);
    size_t r = 0;
    for (double theta : axes.thetas)
        for (double eps : axes.epsilons) {
            CHECK(rows[r].theta == theta);
            CHECK(rows[r].epsilon == eps);
            ++r;
        }
}

TEST_CASE("clean data gives the same perfect row everywhere") {
    const auto set = dsclust::synth_embeddings(4, 3, 16, 0.0, 6);
    for (const SweepRow& row : run(set, tiny_axes())) {
        CHECK(row.mr == 0.0);
        CHECK(row.ari == 1.0);
        CHECK(row.acp == 1.0);
        CHECK(row.n_clusters == 4);
    }
}

TEST_CASE("thread count does not change results") {
    const auto set = dsclust::synth_embeddings(3, 4, 16, 0.05, 9);
    const auto one = run(set, tiny_axes(), 1);
    const auto four = run(set, tiny_axes(), 4);
    REQUIRE(one.size() == four.size());
    for (size_t i = 0; i < one.size(); ++i) {
        CHECK(one[i].theta == four[i].theta);
        CHECK(one[i].epsilon == four[i].epsilon);
        CHECK(one[i].mr == four[i].mr);
        CHECK(one[i].ari == four[i].ari);
        CHECK(one[i].acp == four[i].acp);
        CHECK(one[i].n_clusters == four[i].n_clusters);
    }
}

TEST_CASE("default grid shape") {
    const SweepAxes axes = dsclust::default_sweep_axes();
    CHECK(axes.thetas.size() == 17);
    CHECK(axes.epsilons.size() == 10);
    CHECK_NOTHROW(axes.validate());
}

TEST_CASE("sweep needs ground-truth labels") {
    auto set = dsclust::synth_embeddings(2, 3, 8, 0.0, 1);
    set.labels.clear();
    CHECK_THROWS_AS(run(set, tiny_axes()), std::invalid_argument);
}

TEST_CASE("axis validation") {
    SweepAxes axes = tiny_axes();
    axes.thetas.clear();
    CHECK_THROWS_AS(axes.validate(), std::invalid_argument);
    axes = tiny_axes();
    axes.thetas.push_back(1.0);
    CHECK_THROWS_AS(axes.validate(), std::invalid_argument);
    axes = tiny_axes();
    axes.epsilons.push_back(0.0);
    CHECK_THROWS_AS(axes.validate(), std::invalid_argument);
    axes = tiny_axes();
    axes.epsilons.push_back(-1e-6);
    CHECK_THROWS_AS(axes.validate(), std::invalid_argument);
}

TEST_CASE("csv writer layout") {
    std::vector<SweepRow> rows;
    rows.push_back({0.1, 1e-6, 0.0, 1.0, 1.0, 4});
    rows.push_back({0.5, 1e-4, 0.25, 0.5, 0.75, 3});
    std::ostringstream out;
    dsclust::write_sweep_csv(rows, out);
    CHECK(out.str() ==
          "theta,epsilon,mr,ari,acp,n_clusters\n"
          "0.1,1e-06,0,1,1,4\n"
          "0.5,1e-04,0.25,0.5,0.75,3\n");
}
