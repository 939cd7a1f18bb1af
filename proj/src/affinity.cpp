#include "dsclust/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace dsclust {

AffinityMatrix::AffinityMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols())
        throw std::invalid_argument("AffinityMatrix: matrix must be square");
    if (values_.rows() < 1) throw std::invalid_argument("AffinityMatrix: empty matrix");
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
        if (values_(i, i) != 0.0)
            throw std::invalid_argument("AffinityMatrix: diagonal must be zero");
        for (Eigen::Index j = i + 1; j < values_.cols(); ++j) {
            if (values_(i, j) != values_(j, i))
                throw std::invalid_argument("AffinityMatrix: matrix must be symmetric");
            if (values_(i, j) < 0.0 || !std::isfinite(values_(i, j)))
                throw std::invalid_argument("AffinityMatrix: entries must be finite and non-negative");
        }
    }
}

namespace {

Eigen::MatrixXd pairwise_cosine(const Eigen::Ref<const Eigen::MatrixXd>& features) {
    const Eigen::Index n = features.rows();
    Eigen::VectorXd norms = features.rowwise().norm();
    for (Eigen::Index i = 0; i < n; ++i)
        if (norms[i] == 0.0)
            throw std::invalid_argument("affinity: zero-norm feature row " + std::to_string(i));
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double v = 1.0 - features.row(i).dot(features.row(j)) / (norms[i] * norms[j]);
            v = std::clamp(v, 0.0, 2.0);
            d(i, j) = v;
            d(j, i) = v;
        }
    }
    return d;
}

Eigen::VectorXd scales_from_distances(const Eigen::MatrixXd& d, Eigen::Index knn) {
    const Eigen::Index n = d.rows();
    Eigen::VectorXd sigma(n);
    std::vector<double> other;
    other.reserve(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        other.clear();
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) other.push_back(d(i, j));
        const Eigen::Index k = std::min<Eigen::Index>(knn, static_cast<Eigen::Index>(other.size()));
        double mean = 0.0;
        if (k > 0) {
            // equal values at the k-th boundary leave the mean unchanged, so a
            // plain value sort realizes the lower-index tie rule
            std::partial_sort(other.begin(), other.begin() + k, other.end());
            for (Eigen::Index t = 0; t < k; ++t) mean += other[static_cast<size_t>(t)];
            mean /= static_cast<double>(k);
        }
        sigma[i] = std::max(mean, 1e-12);
    }
    return sigma;
}

}  // namespace

Eigen::VectorXd local_scales(const Eigen::Ref<const Eigen::MatrixXd>& features,
                             Eigen::Index knn) {
    if (knn < 1) throw std::invalid_argument("local_scales: knn must be >= 1");
    if (features.rows() < 1) throw std::invalid_argument("local_scales: empty feature set");
    return scales_from_distances(pairwise_cosine(features), knn);
}

AffinityMatrix build_affinity(const Eigen::Ref<const Eigen::MatrixXd>& features,
                              Eigen::Index knn) {
    if (knn < 1) throw std::invalid_argument("build_affinity: knn must be >= 1");
    if (features.rows() < 1) throw std::invalid_argument("build_affinity: empty feature set");
    const Eigen::Index n = features.rows();
    Eigen::MatrixXd d = pairwise_cosine(features);
    Eigen::VectorXd sigma = scales_from_distances(d, knn);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = std::exp(-d(i, j) / (sigma[i] * sigma[j]));
            w(i, j) = v;
            w(j, i) = v;
        }
    }
    affinity_build_count().fetch_add(1, std::memory_order_relaxed);
    return AffinityMatrix(std::move(w));
}

std::atomic<std::uint64_t>& affinity_build_count() {
    static std::atomic<std::uint64_t> count{0};
    return count;
}

}  // namespace dsclust
