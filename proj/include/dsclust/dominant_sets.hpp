#ifndef DSCLUST_DOMINANT_SETS_HPP
#define DSCLUST_DOMINANT_SETS_HPP

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <vector>

#include "dsclust/affinity.hpp"

namespace dsclust {

struct SolverConfig {
    double theta = 0.1;        // support cutoff, fraction of the max weight; in [0,1)
    double epsilon = 1e-6;     // L2 step-norm convergence threshold; > 0
    int max_iterations = 10000;

    void validate() const;
};

struct CharacteristicVector {
    Eigen::VectorXd weights;  // on the simplex: non-negative, sums to 1
    int iterations = 0;
    bool converged = false;
};

// Signals a subgraph whose quadratic form is zero at the barycenter, i.e. no
// edges at all; callers fall back to singletons.
struct DisconnectedSubgraph : std::runtime_error {
    DisconnectedSubgraph() : std::runtime_error("disconnected subgraph: x'Ax = 0 at the barycenter") {}
};

// Called after every multiplicative update with the new state and its payoff x'Ax.
using IterationObserver = std::function<void(const Eigen::VectorXd&, double)>;

// Evolves x(t+1)_i = x(t)_i (Ax(t))_i / x(t)'Ax(t) from the barycenter until
// the L2 step norm is <= epsilon or max_iterations is hit. a must be
// symmetric, non-negative, zero-diagonal, size >= 2.
//
// A step-norm stop is only accepted once the point is verified to be a strict
// local maximizer of x'Ax on the simplex. Failed verification perturbs the
// state deterministically and resumes: mass moves toward a zero-weight node
// whose payoff row beats x'Ax (to the payoff-optimal point of that segment),
// and a support-face direction that is not strictly capped is walked to the
// face boundary, so flat optimal faces resolve to an extreme point. Neither
// perturbation lowers x'Ax. Components that are decaying and already below
// epsilon*max(x) are flushed to exact zero (numerically extinct at the
// requested precision).
CharacteristicVector replicator_dynamics(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                         const SolverConfig& config,
                                         const IterationObserver& observer = {});

// Indices with weight strictly greater than theta * max(weights).
std::vector<Eigen::Index> extract_support(const Eigen::Ref<const Eigen::VectorXd>& weights,
                                          double theta);

struct Cluster {
    std::vector<Eigen::Index> members;  // original item indices, ascending
    Eigen::VectorXd weights;            // aligned with members, renormalized to sum 1
    int extraction_rank = 0;
    bool converged = true;
    int iterations = 0;
};

struct Clustering {
    std::vector<Cluster> clusters;  // ordered by extraction_rank
    Eigen::Index n_items = 0;
};

// Peeling loop: extract a dominant set, remove it, repeat until every item is
// assigned. A fully disconnected residual becomes singletons in index order;
// a non-convergent run keeps the last iterate (converged=false on that
// cluster) and a warning goes to stderr.
Clustering peel_clusters(const AffinityMatrix& a, const SolverConfig& config);

}  // namespace dsclust

#endif
