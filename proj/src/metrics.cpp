#include "dsclust/metrics.hpp"

#include <stdexcept>

namespace dsclust {

MisclassificationResult misclassification_rate(const Clustering& clustering,
                                               const std::vector<std::string>& truth,
                                               const LabelAssignment& assignment) {
    if (static_cast<Eigen::Index>(truth.size()) != clustering.n_items)
        throw std::invalid_argument("misclassification_rate: truth size does not match item count");
    if (assignment.labels.size() != clustering.clusters.size())
        throw std::invalid_argument("misclassification_rate: assignment size does not match cluster count");
    MisclassificationResult out;
    for (const std::string& label : sorted_unique_labels(truth)) out.per_speaker_errors[label] = 0;
    long long errors = 0;
    for (const Cluster& c : clustering.clusters) {
        const std::optional<std::string>& assigned =
            assignment.labels[static_cast<size_t>(c.extraction_rank)];
        for (Eigen::Index m : c.members) {
            const std::string& t = truth[static_cast<size_t>(m)];
            // members of unassigned clusters all count as errors
            if (!assigned.has_value() || *assigned != t) {
                out.per_speaker_errors[t]++;
                errors++;
            }
        }
    }
    out.mr = static_cast<double>(errors) / static_cast<double>(clustering.n_items);
    return out;
}

double average_cluster_purity(const Clustering& clustering, const std::vector<std::string>& truth) {
    const std::vector<std::string> labels = sorted_unique_labels(truth);
    const Eigen::MatrixXi counts = label_counts(clustering, truth, labels);
    double total = 0.0;
    for (Eigen::Index i = 0; i < counts.rows(); ++i) {
        long long sq = 0;
        long long size = 0;
        for (Eigen::Index j = 0; j < counts.cols(); ++j) {
            const long long n = counts(i, j);
            sq += n * n;
            size += n;
        }
        total += static_cast<double>(sq) / static_cast<double>(size);
    }
    return total / static_cast<double>(clustering.n_items);
}

namespace {

long long choose2(long long n) { return n * (n - 1) / 2; }

}  // namespace

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("adjusted_rand_index: partitions have different lengths");
    if (a.empty()) throw std::invalid_argument("adjusted_rand_index: empty partitions");
    int ka = 0, kb = 0;
    for (int x : a) {
        if (x < 0) throw std::invalid_argument("adjusted_rand_index: negative cluster id");
        ka = std::max(ka, x + 1);
    }
    for (int x : b) {
        if (x < 0) throw std::invalid_argument("adjusted_rand_index: negative cluster id");
        kb = std::max(kb, x + 1);
    }
    Eigen::MatrixXi table = Eigen::MatrixXi::Zero(ka, kb);
    for (size_t i = 0; i < a.size(); ++i) table(a[i], b[i])++;

    long long sij = 0, sa = 0, sb = 0;
    for (Eigen::Index i = 0; i < table.rows(); ++i)
        for (Eigen::Index j = 0; j < table.cols(); ++j) sij += choose2(table(i, j));
    for (Eigen::Index i = 0; i < table.rows(); ++i) sa += choose2(table.row(i).sum());
    for (Eigen::Index j = 0; j < table.cols(); ++j) sb += choose2(table.col(j).sum());
    const long long pairs = choose2(static_cast<long long>(a.size()));

    // index minus expected over maximum minus expected, rescaled by 2*pairs so
    // both sides are integer-valued products; one division keeps exact cases
    // (identical partitions, small hand instances) bit-exact
    const double sij_d = static_cast<double>(sij);
    const double sa_d = static_cast<double>(sa);
    const double sb_d = static_cast<double>(sb);
    const double pairs_d = static_cast<double>(pairs);
    const double num = 2.0 * (pairs_d * sij_d - sa_d * sb_d);
    const double den = pairs_d * (sa_d + sb_d) - 2.0 * sa_d * sb_d;
    if (den == 0.0) return 0.0;
    return num / den;
}

namespace {

std::vector<int> cluster_ids(const Clustering& clustering) {
    std::vector<int> ids(static_cast<size_t>(clustering.n_items), -1);
    for (const Cluster& c : clustering.clusters)
        for (Eigen::Index m : c.members)
            ids[static_cast<size_t>(m)] = static_cast<int>(c.extraction_rank);
    return ids;
}

std::vector<int> truth_ids(const std::vector<std::string>& truth) {
    const std::vector<std::string> labels = sorted_unique_labels(truth);
    std::vector<int> ids(truth.size());
    for (size_t i = 0; i < truth.size(); ++i) {
        const auto it = std::lower_bound(labels.begin(), labels.end(), truth[i]);
        ids[i] = static_cast<int>(it - labels.begin());
    }
    return ids;
}

}  // namespace

double adjusted_rand_index(const Clustering& clustering, const std::vector<std::string>& truth) {
    if (static_cast<Eigen::Index>(truth.size()) != clustering.n_items)
        throw std::invalid_argument("adjusted_rand_index: truth size does not match item count");
    return adjusted_rand_index(cluster_ids(clustering), truth_ids(truth));
}

EvaluationReport evaluate_clustering(const Clustering& clustering,
                                     const std::vector<std::string>& truth, LabelMethod method) {
    if (static_cast<Eigen::Index>(truth.size()) != clustering.n_items)
        throw std::invalid_argument("evaluate_clustering: truth size does not match item count");
    EvaluationReport report;
    report.assignment =
        method == LabelMethod::max ? label_max(clustering, truth) : label_hungarian(clustering, truth);
    MisclassificationResult mis = misclassification_rate(clustering, truth, report.assignment);
    report.mr = mis.mr;
    report.per_speaker_errors = std::move(mis.per_speaker_errors);
    report.acp = average_cluster_purity(clustering, truth);
    report.ari = adjusted_rand_index(clustering, truth);
    report.n_clusters = static_cast<int>(clustering.clusters.size());
    return report;
}

}  // namespace dsclust
