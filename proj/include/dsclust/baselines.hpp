#ifndef DSCLUST_BASELINES_HPP
#define DSCLUST_BASELINES_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "dsclust/affinity.hpp"
#include "dsclust/dominant_sets.hpp"

namespace dsclust {

struct KMeansConfig {
    int k = 1;
    int max_iterations = 100;
    int n_restarts = 10;
    std::uint64_t seed = 0;

    void validate(Eigen::Index n_items) const;
};

// Spherical k-means on unit-normalized rows: cosine distance throughout,
// k-means++-style seeding, empty clusters re-seeded from the point farthest
// from its centroid. Best of n_restarts by total cosine similarity (ties to
// the lower restart index); restart r uses mt19937_64(seed + r). Clusters are
// ranked by descending size (ties toward the smaller first member index) and
// carry uniform weights. If objective_trace is given it receives the
// objective after every update of the winning restart.
Clustering kmeans_cosine(const Eigen::Ref<const Eigen::MatrixXd>& features,
                         const KMeansConfig& config,
                         std::vector<double>* objective_trace = nullptr);

struct SymmetricEigenResult {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns aligned with eigenvalues
    int sweeps = 0;
};

// Cyclic Jacobi rotations on a symmetric matrix. Converged when the
// off-diagonal Frobenius norm drops to off_tol; throws std::runtime_error if
// max_sweeps is exhausted first.
SymmetricEigenResult jacobi_eigensolver(const Eigen::Ref<const Eigen::MatrixXd>& m,
                                        double off_tol = 1e-10,
                                        int max_sweeps = 100);

// L = I - D^{-1/2} A D^{-1/2}; rows with zero degree get L_ii = 1 and zero
// off-diagonals.
Eigen::MatrixXd normalized_laplacian(const AffinityMatrix& a);

// Position of the largest gap in the ascending Laplacian spectrum: argmax
// over 1 <= k < n of lambda_{k+1} - lambda_k, ties toward the smaller k.
int eigengap_estimate(const AffinityMatrix& a);

}  // namespace dsclust

#endif
