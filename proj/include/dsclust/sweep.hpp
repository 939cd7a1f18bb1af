#ifndef DSCLUST_SWEEP_HPP
#define DSCLUST_SWEEP_HPP

#include <iosfwd>
#include <vector>

#include "dsclust/embeddings.hpp"
#include "dsclust/labeling.hpp"

namespace dsclust {

struct SweepAxes {
    std::vector<double> thetas;
    std::vector<double> epsilons;

    void validate() const;
};

// theta from 0 to 0.9995 (17 log-ish spaced points), epsilon decades 1e-11..1e-2.
SweepAxes default_sweep_axes();

struct SweepRow {
    double theta = 0.0;
    double epsilon = 0.0;
    double mr = 0.0;
    double ari = 0.0;
    double acp = 0.0;
    int n_clusters = 0;
};

// Full grid over a labeled set: the affinity matrix is built once and shared;
// cells run the peeling pipeline plus metrics, concurrently across a thread
// pool (threads = 0 picks the hardware count). Rows come back row-major:
// theta outer, epsilon inner, regardless of execution order.
std::vector<SweepRow> run_sweep(const EmbeddingSet& set, const SweepAxes& axes,
                                Eigen::Index knn, LabelMethod method,
                                int max_iterations, unsigned threads = 0);

// Header "theta,epsilon,mr,ari,acp,n_clusters", one row per cell.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace dsclust

#endif
