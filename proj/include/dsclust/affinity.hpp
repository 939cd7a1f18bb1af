#ifndef DSCLUST_AFFINITY_HPP
#define DSCLUST_AFFINITY_HPP

#include <Eigen/Dense>

#include <atomic>
#include <cstdint>
#include <stdexcept>

namespace dsclust {

// 1 - <u,v>/(|u||v|), clamped to [0,2]. Throws on zero-norm input.
template <typename D1, typename D2>
double cosine_distance(const Eigen::MatrixBase<D1>& u, const Eigen::MatrixBase<D2>& v) {
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0)
        throw std::invalid_argument("cosine_distance: zero-norm vector");
    const double d = 1.0 - u.dot(v) / (nu * nv);
    if (d < 0.0) return 0.0;
    if (d > 2.0) return 2.0;
    return d;
}

// Symmetric pairwise affinity matrix with zero diagonal. Valid by
// construction from build_affinity; the checking constructor covers
// caller-supplied matrices.
class AffinityMatrix {
public:
    // requires: square, symmetric, non-negative, zero diagonal
    explicit AffinityMatrix(Eigen::MatrixXd values);

    const Eigen::MatrixXd& values() const { return values_; }
    Eigen::Index size() const { return values_.rows(); }

private:
    Eigen::MatrixXd values_;
};

// Per-item local scale: mean cosine distance to the knn nearest other items
// (all of them when fewer than knn exist), floored at 1e-12.
Eigen::VectorXd local_scales(const Eigen::Ref<const Eigen::MatrixXd>& features,
                             Eigen::Index knn);

// w_ij = exp(-d(f_i,f_j) / (sigma_i * sigma_j)), zero diagonal.
AffinityMatrix build_affinity(const Eigen::Ref<const Eigen::MatrixXd>& features,
                              Eigen::Index knn = 7);

// Number of build_affinity calls in this process (performance probes).
std::atomic<std::uint64_t>& affinity_build_count();

}  // namespace dsclust

#endif
