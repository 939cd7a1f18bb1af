#ifndef DSCLUST_LABELING_HPP
#define DSCLUST_LABELING_HPP

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "dsclust/dominant_sets.hpp"

namespace dsclust {

enum class LabelMethod { max, hungarian };

struct LabelAssignment {
    LabelMethod method = LabelMethod::hungarian;
    // One entry per cluster, indexed by extraction rank; nullopt = unassigned.
    std::vector<std::optional<std::string>> labels;
};

// Each cluster takes the true label of its maximum-weight member (ties toward
// the lower item index), in extraction-rank order; a label claimed by an
// earlier cluster leaves the later cluster unassigned.
LabelAssignment label_max(const Clustering& clustering,
                          const std::vector<std::string>& truth);

// One-to-one cluster-to-label matching maximizing the total count of
// correctly labeled items. Clusters beyond the label count (or vice versa)
// match dummies: such clusters are unassigned, such labels unused.
LabelAssignment label_hungarian(const Clustering& clustering,
                                const std::vector<std::string>& truth);

// Core assignment solve on a counts matrix (rows = clusters, cols = labels):
// returns one column per row, or -1 for rows matched to a padding column.
// Among all assignments maximizing the total count, returns the
// lexicographically smallest sequence of column indices over rows in order.
std::vector<int> max_count_assignment(const Eigen::Ref<const Eigen::MatrixXi>& counts);

// Distinct labels in sorted order; the column order used by the assignment.
std::vector<std::string> sorted_unique_labels(const std::vector<std::string>& truth);

// counts(i,j) = members of cluster i carrying the j-th sorted label.
Eigen::MatrixXi label_counts(const Clustering& clustering,
                             const std::vector<std::string>& truth,
                             const std::vector<std::string>& sorted_labels);

}  // namespace dsclust

#endif
