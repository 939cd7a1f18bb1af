#include <doctest.h>

#include <cmath>

#include "dsclust/affinity.hpp"

using dsclust::AffinityMatrix;

namespace {

Eigen::MatrixXd axis_quad() {
    // four unit vectors on the 2d axes; all nearest-pair distances are 1,
    // opposite pairs sit at distance 2
    Eigen::MatrixXd f(4, 2);
    f << 1, 0, 0, 1, -1, 0, 0, -1;
    return f;
}

}  // namespace

TEST_CASE("cosine distance basics") {
    Eigen::Vector2d a(1, 0), b(0, 1), c(-1, 0), d(2, 0);
    CHECK(dsclust::cosine_distance(a, b) == doctest::Approx(1.0));
    CHECK(dsclust::cosine_distance(a, c) == doctest::Approx(2.0));
    CHECK(dsclust::cosine_distance(a, d) == 0.0);  // clamped at the bottom
    CHECK(dsclust::cosine_distance(a, a) == 0.0);
    CHECK_THROWS_AS(dsclust::cosine_distance(a, Eigen::Vector2d::Zero().eval()),
                    std::invalid_argument);
}

TEST_CASE("local scales average the knn nearest distances") {
    const Eigen::MatrixXd f = axis_quad();
    SUBCASE("knn 2 sees the two unit neighbours") {
        const Eigen::VectorXd s = dsclust::local_scales(f, 2);
        for (Eigen::Index i = 0; i < 4; ++i) CHECK(s[i] == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("knn 3 pulls in the opposite point") {
        const Eigen::VectorXd s = dsclust::local_scales(f, 3);
        for (Eigen::Index i = 0; i < 4; ++i)
            CHECK(s[i] == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    }
    SUBCASE("knn larger than n-1 uses everyone") {
        const Eigen::VectorXd s3 = dsclust::local_scales(f, 3);
        const Eigen::VectorXd s9 = dsclust::local_scales(f, 9);
        CHECK((s3 - s9).norm() == 0.0);
    }
}

TEST_CASE("duplicate points floor the scale and split the graph") {
    Eigen::MatrixXd f(4, 2);
    f << 1, 0, 1, 0, 1, 0, 0, 1;  // three copies plus one orthogonal point
    const Eigen::VectorXd s = dsclust::local_scales(f, 2);
    CHECK(s[0] == 1e-12);
    CHECK(s[3] == doctest::Approx(1.0).epsilon(1e-14));

    const AffinityMatrix a = dsclust::build_affinity(f, 2);
    CHECK(a.values()(0, 1) == 1.0);  // exp(0) between exact duplicates
    CHECK(a.values()(0, 2) == 1.0);
    CHECK(a.values()(0, 3) == 0.0);  // exp of a huge negative exponent underflows
    CHECK(a.values()(0, 0) == 0.0);
}

TEST_CASE("affinity kernel on the axis quad") {
    const AffinityMatrix a = dsclust::build_affinity(axis_quad(), 2);
    // scales are exactly 1, so the kernel is exp(-distance)
    CHECK(a.values()(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(a.values()(0, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(a.values()(1, 3) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(a.values()(i, i) == 0.0);
    CHECK(a.values() == a.values().transpose().eval());
}

TEST_CASE("affinity is invariant to per-row positive scaling") {
    Eigen::MatrixXd f(5, 3);
    f << 1, 0.2, -0.4, 0.3, 1, 0.1, -0.2, 0.5, 1, 0.7, 0.7, 0, 0.1, -0.9, 0.3;
    Eigen::MatrixXd g = f;
    const double mult[5] = {2.0, 0.5, 13.0, 1e-6, 3.14};
    for (Eigen::Index i = 0; i < 5; ++i) g.row(i) *= mult[i];
    const AffinityMatrix a = dsclust::build_affinity(f, 3);
    const AffinityMatrix b = dsclust::build_affinity(g, 3);
    CHECK((a.values() - b.values()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("affinity is permutation-equivariant") {
    Eigen::MatrixXd f(5, 3);
    f << 1, 0.2, -0.4, 0.3, 1, 0.1, -0.2, 0.5, 1, 0.7, 0.7, 0, 0.1, -0.9, 0.3;
    const std::vector<Eigen::Index> perm = {3, 0, 4, 1, 2};
    Eigen::MatrixXd g(5, 3);
    for (Eigen::Index i = 0; i < 5; ++i) g.row(i) = f.row(perm[static_cast<size_t>(i)]);
    const AffinityMatrix a = dsclust::build_affinity(f, 2);
    const AffinityMatrix b = dsclust::build_affinity(g, 2);
    for (Eigen::Index i = 0; i < 5; ++i)
        for (Eigen::Index j = 0; j < 5; ++j)
            CHECK(b.values()(i, j) ==
                  a.values()(perm[static_cast<size_t>(i)], perm[static_cast<size_t>(j)]));
}

TEST_CASE("checking constructor validates shape and content") {
    Eigen::MatrixXd ok(2, 2);
    ok << 0, 0.5, 0.5, 0;
    CHECK_NOTHROW(AffinityMatrix{ok});

    Eigen::MatrixXd diag = ok;
    diag(0, 0) = 0.1;
    CHECK_THROWS_AS(AffinityMatrix{diag}, std::invalid_argument);

    Eigen::MatrixXd asym = ok;
    asym(0, 1) = 0.6;
    CHECK_THROWS_AS(AffinityMatrix{asym}, std::invalid_argument);

    Eigen::MatrixXd neg = ok;
    neg(0, 1) = neg(1, 0) = -0.1;
    CHECK_THROWS_AS(AffinityMatrix{neg}, std::invalid_argument);

    Eigen::MatrixXd rect(2, 3);
    rect.setZero();
    CHECK_THROWS_AS(AffinityMatrix{rect}, std::invalid_argument);
}

TEST_CASE("build counter increments per build") {
    const std::uint64_t before = dsclust::affinity_build_count().load();
    dsclust::build_affinity(axis_quad(), 2);
    dsclust::build_affinity(axis_quad(), 3);
    CHECK(dsclust::affinity_build_count().load() == before + 2);
}

TEST_CASE("build rejects zero-norm rows naming the row") {
    Eigen::MatrixXd f(3, 2);
    f << 1, 0, 0, 0, 0, 1;
    CHECK_THROWS_WITH_AS(dsclust::build_affinity(f, 1), doctest::Contains("1"),
                         std::invalid_argument);
}

TEST_CASE("degenerate sizes") {
    Eigen::MatrixXd one(1, 2);
    one << 1, 0;
    const AffinityMatrix a = dsclust::build_affinity(one, 1);  // lone point, no edges
    CHECK(a.size() == 1);
    CHECK(a.values()(0, 0) == 0.0);
    CHECK_THROWS_AS(dsclust::build_affinity(axis_quad(), 0), std::invalid_argument);
}
