#ifndef DSCLUST_METRICS_HPP
#define DSCLUST_METRICS_HPP

#include <map>
#include <string>
#include <vector>

#include "dsclust/dominant_sets.hpp"
#include "dsclust/labeling.hpp"

namespace dsclust {

// Fraction of items whose cluster's assigned label differs from their true
// label; members of unassigned clusters all count as errors. Errors are
// attributed to the item's true label.
struct MisclassificationResult {
    double mr = 0.0;
    std::map<std::string, int> per_speaker_errors;  // every true label, zero included
};

MisclassificationResult misclassification_rate(const Clustering& clustering,
                                               const std::vector<std::string>& truth,
                                               const LabelAssignment& assignment);

// (1/N) sum_i p_i n_i with p_i = sum_j n_ij^2 / n_i^2; label-agnostic purity.
double average_cluster_purity(const Clustering& clustering,
                              const std::vector<std::string>& truth);

// Adjusted Rand index, pair-counting form with expected-index correction; 0
// when the correction denominator vanishes (both partitions trivial).
// Partitions are dense non-negative cluster ids of equal length.
double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b);

// Same, between a clustering (items labelled by extraction rank) and the true
// partition induced by the label strings.
double adjusted_rand_index(const Clustering& clustering,
                           const std::vector<std::string>& truth);

struct EvaluationReport {
    double mr = 0.0;
    double ari = 0.0;
    double acp = 0.0;
    int n_clusters = 0;
    LabelAssignment assignment;
    std::map<std::string, int> per_speaker_errors;
};

EvaluationReport evaluate_clustering(const Clustering& clustering,
                                     const std::vector<std::string>& truth,
                                     LabelMethod method);

}  // namespace dsclust

#endif
