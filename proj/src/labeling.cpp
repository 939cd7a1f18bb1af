#include "dsclust/labeling.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace dsclust {

std::vector<std::string> sorted_unique_labels(const std::vector<std::string>& truth) {
    std::set<std::string> s(truth.begin(), truth.end());
    return {s.begin(), s.end()};
}

Eigen::MatrixXi label_counts(const Clustering& clustering,
                             const std::vector<std::string>& truth,
                             const std::vector<std::string>& sorted_labels) {
    if (static_cast<Eigen::Index>(truth.size()) != clustering.n_items)
        throw std::invalid_argument("label_counts: truth size does not match item count");
    Eigen::MatrixXi counts = Eigen::MatrixXi::Zero(
        static_cast<Eigen::Index>(clustering.clusters.size()),
        static_cast<Eigen::Index>(sorted_labels.size()));
    for (const Cluster& c : clustering.clusters) {
        for (Eigen::Index m : c.members) {
            const auto it = std::lower_bound(sorted_labels.begin(), sorted_labels.end(),
                                             truth[static_cast<size_t>(m)]);
            counts(c.extraction_rank, static_cast<Eigen::Index>(it - sorted_labels.begin()))++;
        }
    }
    return counts;
}

LabelAssignment label_max(const Clustering& clustering, const std::vector<std::string>& truth) {
    if (static_cast<Eigen::Index>(truth.size()) != clustering.n_items)
        throw std::invalid_argument("label_max: truth size does not match item count");
    LabelAssignment out;
    out.method = LabelMethod::max;
    out.labels.resize(clustering.clusters.size());
    std::set<std::string> claimed;
    for (const Cluster& c : clustering.clusters) {
        // members are in ascending item order, so > keeps the lower index on ties
        Eigen::Index best = c.members.front();
        double best_w = c.weights[0];
        for (size_t p = 1; p < c.members.size(); ++p) {
            if (c.weights[static_cast<Eigen::Index>(p)] > best_w) {
                best_w = c.weights[static_cast<Eigen::Index>(p)];
                best = c.members[p];
            }
        }
        const std::string& label = truth[static_cast<size_t>(best)];
        if (claimed.insert(label).second)
            out.labels[static_cast<size_t>(c.extraction_rank)] = label;
    }
    return out;
}

namespace {

// Minimum-cost square assignment via potentials and shortest augmenting
// paths. Returns the column matched to each row; potentials come out exact
// (integer arithmetic), so zero reduced cost identifies every edge usable by
// some optimal assignment.
struct AssignmentSolve {
    std::vector<int> row_to_col;
    std::vector<long long> u, v;  // potentials, 0-indexed
};

AssignmentSolve solve_min_assignment(const std::vector<std::vector<long long>>& cost) {
    const int s = static_cast<int>(cost.size());
    const long long inf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> u(s + 1, 0), v(s + 1, 0);
    std::vector<int> p(s + 1, 0), way(s + 1, 0);
    for (int i = 1; i <= s; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long long> minv(s + 1, inf);
        std::vector<char> used(s + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            long long delta = inf;
            for (int j = 1; j <= s; ++j) {
                if (used[j]) continue;
                const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= s; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    AssignmentSolve out;
    out.row_to_col.assign(s, -1);
    for (int j = 1; j <= s; ++j)
        if (p[j] > 0) out.row_to_col[p[j] - 1] = j - 1;
    out.u.assign(u.begin() + 1, u.end());
    out.v.assign(v.begin() + 1, v.end());
    return out;
}

// Kuhn augmentation over the admissible graph, skipping frozen columns.
bool try_augment(int row, const std::vector<std::vector<int>>& adj,
                 const std::vector<char>& frozen_col, std::vector<char>& visited,
                 std::vector<int>& col_to_row, std::vector<int>& row_to_col) {
    for (int j : adj[static_cast<size_t>(row)]) {
        if (frozen_col[static_cast<size_t>(j)] || visited[static_cast<size_t>(j)]) continue;
        visited[static_cast<size_t>(j)] = 1;
        if (col_to_row[static_cast<size_t>(j)] < 0 ||
            try_augment(col_to_row[static_cast<size_t>(j)], adj, frozen_col, visited, col_to_row,
                        row_to_col)) {
            col_to_row[static_cast<size_t>(j)] = row;
            row_to_col[static_cast<size_t>(row)] = j;
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<int> max_count_assignment(const Eigen::Ref<const Eigen::MatrixXi>& counts) {
    const int r = static_cast<int>(counts.rows());
    const int c = static_cast<int>(counts.cols());
    if (r == 0 || c == 0) throw std::invalid_argument("max_count_assignment: empty counts");
    const int s = std::max(r, c);
    const long long maxc = static_cast<long long>(counts.maxCoeff());

    // maximize counts == minimize maxc - counts; padding rows/columns carry
    // count 0, i.e. cost maxc
    std::vector<std::vector<long long>> cost(static_cast<size_t>(s),
                                             std::vector<long long>(static_cast<size_t>(s), maxc));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            cost[static_cast<size_t>(i)][static_cast<size_t>(j)] = maxc - counts(i, j);

    AssignmentSolve sol = solve_min_assignment(cost);

    // admissible = zero reduced cost; exactly the edges optimal assignments
    // can use. Column preference: real labels ascending, then padding, so the
    // fix-up below yields the lexicographically smallest optimal assignment.
    std::vector<std::vector<int>> adj(static_cast<size_t>(s));
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < c; ++j)
            if (cost[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
                sol.u[static_cast<size_t>(i)] + sol.v[static_cast<size_t>(j)])
                adj[static_cast<size_t>(i)].push_back(j);
        for (int j = c; j < s; ++j)
            if (cost[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
                sol.u[static_cast<size_t>(i)] + sol.v[static_cast<size_t>(j)])
                adj[static_cast<size_t>(i)].push_back(j);
    }

    std::vector<int> row_to_col = sol.row_to_col;
    std::vector<int> col_to_row(static_cast<size_t>(s), -1);
    for (int i = 0; i < s; ++i) col_to_row[static_cast<size_t>(row_to_col[static_cast<size_t>(i)])] = i;
    std::vector<char> frozen_col(static_cast<size_t>(s), 0);

    for (int i = 0; i < s; ++i) {
        for (int j : adj[static_cast<size_t>(i)]) {
            if (frozen_col[static_cast<size_t>(j)]) continue;
            if (row_to_col[static_cast<size_t>(i)] == j) {
                frozen_col[static_cast<size_t>(j)] = 1;
                break;
            }
            // reroute the current owner of j elsewhere while i takes j
            std::vector<int> rtc = row_to_col;
            std::vector<int> ctr = col_to_row;
            const int owner = ctr[static_cast<size_t>(j)];
            const int old_col = rtc[static_cast<size_t>(i)];
            ctr[static_cast<size_t>(old_col)] = -1;
            rtc[static_cast<size_t>(i)] = j;
            ctr[static_cast<size_t>(j)] = i;
            bool ok = true;
            if (owner >= 0 && owner != i) {
                std::vector<char> visited(static_cast<size_t>(s), 0);
                visited[static_cast<size_t>(j)] = 1;
                ok = try_augment(owner, adj, frozen_col, visited, ctr, rtc);
            }
            if (ok) {
                row_to_col = std::move(rtc);
                col_to_row = std::move(ctr);
                frozen_col[static_cast<size_t>(j)] = 1;
                break;
            }
        }
    }

    std::vector<int> out(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) {
        const int j = row_to_col[static_cast<size_t>(i)];
        out[static_cast<size_t>(i)] = j < c ? j : -1;
    }
    return out;
}

LabelAssignment label_hungarian(const Clustering& clustering,
                                const std::vector<std::string>& truth) {
    const std::vector<std::string> labels = sorted_unique_labels(truth);
    const Eigen::MatrixXi counts = label_counts(clustering, truth, labels);
    const std::vector<int> cols = max_count_assignment(counts);
    LabelAssignment out;
    out.method = LabelMethod::hungarian;
    out.labels.resize(clustering.clusters.size());
    for (size_t i = 0; i < cols.size(); ++i)
        if (cols[i] >= 0) out.labels[i] = labels[static_cast<size_t>(cols[i])];
    return out;
}

}  // namespace dsclust
