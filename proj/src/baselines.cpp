#include "dsclust/baselines.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace dsclust {

void KMeansConfig::validate(Eigen::Index n_items) const {
    if (k < 1) throw std::invalid_argument("kmeans: k must be at least 1");
    if (static_cast<Eigen::Index>(k) > n_items)
        throw std::invalid_argument("kmeans: k exceeds the number of items");
    if (max_iterations < 1) throw std::invalid_argument("kmeans: max_iterations must be at least 1");
    if (n_restarts < 1) throw std::invalid_argument("kmeans: n_restarts must be at least 1");
}

namespace {

struct RestartResult {
    std::vector<int> assign;
    double objective = -std::numeric_limits<double>::infinity();
    bool converged = false;
    int iterations = 0;
    std::vector<double> trace;
};

// argmax of dot(x_i, centroid_j); ties toward the lower centroid index
int nearest_centroid(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids, Eigen::Index i) {
    int best = 0;
    double best_sim = x.row(i).dot(centroids.row(0));
    for (Eigen::Index j = 1; j < centroids.rows(); ++j) {
        const double sim = x.row(i).dot(centroids.row(j));
        if (sim > best_sim) {
            best_sim = sim;
            best = static_cast<int>(j);
        }
    }
    return best;
}

Eigen::MatrixXd seed_centroids(const Eigen::MatrixXd& x, int k, std::mt19937_64& rng) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd centroids(k, x.cols());
    std::vector<char> chosen(static_cast<size_t>(n), 0);

    std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
    Eigen::Index pick = first(rng);
    centroids.row(0) = x.row(pick);
    chosen[static_cast<size_t>(pick)] = 1;

    // squared cosine distance to the nearest already-chosen centroid
    Eigen::VectorXd best_sim = (x * centroids.row(0).transpose()).col(0);
    for (int t = 1; t < k; ++t) {
        Eigen::VectorXd w(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = 1.0 - best_sim[i];
            w[i] = d * d;
        }
        const double total = w.sum();
        Eigen::Index next = -1;
        if (total > 0.0) {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            const double target = unif(rng) * total;
            double cum = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                cum += w[i];
                if (cum > target) {
                    next = i;
                    break;
                }
            }
            if (next < 0) next = n - 1;  // guard against accumulated rounding
        } else {
            // all remaining mass is zero (duplicates of chosen points): take
            // the first index not yet used
            for (Eigen::Index i = 0; i < n; ++i)
                if (!chosen[static_cast<size_t>(i)]) {
                    next = i;
                    break;
                }
            if (next < 0) next = 0;
        }
        centroids.row(t) = x.row(next);
        chosen[static_cast<size_t>(next)] = 1;
        for (Eigen::Index i = 0; i < n; ++i)
            best_sim[i] = std::max(best_sim[i], x.row(i).dot(centroids.row(t)));
    }
    return centroids;
}

// point with the lowest similarity to its own centroid; ties toward the
// lower index. Skips points that are alone in their cluster.
Eigen::Index farthest_point(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centroids,
                            const std::vector<int>& assign, const std::vector<int>& sizes) {
    Eigen::Index worst = -1;
    double worst_sim = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (sizes[static_cast<size_t>(assign[static_cast<size_t>(i)])] <= 1) continue;
        const double sim = x.row(i).dot(centroids.row(assign[static_cast<size_t>(i)]));
        if (sim < worst_sim) {
            worst_sim = sim;
            worst = i;
        }
    }
    return worst;
}

RestartResult run_restart(const Eigen::MatrixXd& x, const KMeansConfig& config,
                          std::mt19937_64 rng) {
    const Eigen::Index n = x.rows();
    const int k = config.k;
    RestartResult res;
    Eigen::MatrixXd centroids = seed_centroids(x, k, rng);
    std::vector<int> assign(static_cast<size_t>(n), 0);
    std::vector<int> prev;

    for (int it = 0; it < config.max_iterations; ++it) {
        res.iterations = it + 1;
        for (Eigen::Index i = 0; i < n; ++i)
            assign[static_cast<size_t>(i)] = nearest_centroid(x, centroids, i);

        std::vector<int> sizes(static_cast<size_t>(k), 0);
        for (int a : assign) sizes[static_cast<size_t>(a)]++;

        // empty clusters steal the point farthest from its current centroid
        for (int j = 0; j < k; ++j) {
            if (sizes[static_cast<size_t>(j)] > 0) continue;
            const Eigen::Index p = farthest_point(x, centroids, assign, sizes);
            if (p < 0) break;  // nothing left to split
            sizes[static_cast<size_t>(assign[static_cast<size_t>(p)])]--;
            assign[static_cast<size_t>(p)] = j;
            sizes[static_cast<size_t>(j)] = 1;
            centroids.row(j) = x.row(p);
        }

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
        for (Eigen::Index i = 0; i < n; ++i)
            sums.row(assign[static_cast<size_t>(i)]) += x.row(i);
        for (int j = 0; j < k; ++j) {
            const double norm = sums.row(j).norm();
            if (norm > 0.0) centroids.row(j) = sums.row(j) / norm;
            // zero-sum cluster keeps its previous centroid
        }

        double objective = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            objective += x.row(i).dot(centroids.row(assign[static_cast<size_t>(i)]));
        res.trace.push_back(objective);
        res.objective = objective;

        if (assign == prev) {
            res.converged = true;
            break;
        }
        prev = assign;
    }
    res.assign = std::move(assign);
    return res;
}

}  // namespace

Clustering kmeans_cosine(const Eigen::Ref<const Eigen::MatrixXd>& features,
                         const KMeansConfig& config, std::vector<double>* objective_trace) {
    config.validate(features.rows());
    const Eigen::Index n = features.rows();
    Eigen::MatrixXd x(n, features.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        const double norm = features.row(i).norm();
        if (!(norm > 0.0))
            throw std::invalid_argument("kmeans: row " + std::to_string(i) + " has zero norm");
        x.row(i) = features.row(i) / norm;
    }

    RestartResult best;
    bool have = false;
    for (int r = 0; r < config.n_restarts; ++r) {
        RestartResult res = run_restart(x, config, std::mt19937_64(config.seed + static_cast<std::uint64_t>(r)));
        if (!have || res.objective > best.objective) {
            best = std::move(res);
            have = true;
        }
    }
    if (objective_trace) *objective_trace = best.trace;

    // ranks: descending size, ties toward the smaller first member index
    std::vector<std::vector<Eigen::Index>> members(static_cast<size_t>(config.k));
    for (Eigen::Index i = 0; i < n; ++i)
        members[static_cast<size_t>(best.assign[static_cast<size_t>(i)])].push_back(i);
    std::vector<int> order;
    for (int j = 0; j < config.k; ++j)
        if (!members[static_cast<size_t>(j)].empty()) order.push_back(j);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& ma = members[static_cast<size_t>(a)];
        const auto& mb = members[static_cast<size_t>(b)];
        if (ma.size() != mb.size()) return ma.size() > mb.size();
        return ma.front() < mb.front();
    });

    Clustering out;
    out.n_items = n;
    for (size_t rank = 0; rank < order.size(); ++rank) {
        Cluster c;
        c.members = members[static_cast<size_t>(order[rank])];
        c.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(c.members.size()),
                                              1.0 / static_cast<double>(c.members.size()));
        c.extraction_rank = static_cast<int>(rank);
        c.converged = best.converged;
        c.iterations = best.iterations;
        out.clusters.push_back(std::move(c));
    }
    return out;
}

SymmetricEigenResult jacobi_eigensolver(const Eigen::Ref<const Eigen::MatrixXd>& input,
                                        double off_tol, int max_sweeps) {
    const Eigen::Index n = input.rows();
    if (n == 0 || input.cols() != n)
        throw std::invalid_argument("jacobi_eigensolver: matrix must be square and non-empty");
    if (!input.isApprox(input.transpose(), 0.0))
        throw std::invalid_argument("jacobi_eigensolver: matrix must be symmetric");

    Eigen::MatrixXd m = input;
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

    const auto off_norm = [&]() {
        double s = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) s += m(p, q) * m(p, q);
        return std::sqrt(2.0 * s);
    };

    SymmetricEigenResult res;
    bool done = n == 1 || off_norm() <= off_tol;
    for (int sweep = 0; sweep < max_sweeps && !done; ++sweep) {
        res.sweeps = sweep + 1;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (apq == 0.0) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                // smaller-angle root of t^2 + 2 t theta - 1 = 0
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const double app = m(p, p), aqq = m(q, q);
                m(p, p) = app - t * apq;
                m(q, q) = aqq + t * apq;
                m(p, q) = 0.0;
                m(q, p) = 0.0;
                for (Eigen::Index r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = m(r, p), arq = m(r, q);
                    m(r, p) = c * arp - s * arq;
                    m(p, r) = m(r, p);
                    m(r, q) = s * arp + c * arq;
                    m(q, r) = m(r, q);
                }
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = c * vrp - s * vrq;
                    v(r, q) = s * vrp + c * vrq;
                }
            }
        }
        done = off_norm() <= off_tol;
    }
    if (!done) throw std::runtime_error("jacobi_eigensolver: no convergence within sweep limit");

    std::vector<Eigen::Index> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return m(a, a) < m(b, b); });
    res.eigenvalues.resize(n);
    res.eigenvectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        res.eigenvalues[j] = m(idx[static_cast<size_t>(j)], idx[static_cast<size_t>(j)]);
        res.eigenvectors.col(j) = v.col(idx[static_cast<size_t>(j)]);
    }
    return res;
}

Eigen::MatrixXd normalized_laplacian(const AffinityMatrix& a) {
    const Eigen::Index n = a.size();
    const Eigen::MatrixXd& w = a.values();
    Eigen::VectorXd degree = w.rowwise().sum();
    Eigen::VectorXd inv_sqrt(n);
    for (Eigen::Index i = 0; i < n; ++i)
        inv_sqrt[i] = degree[i] > 0.0 ? 1.0 / std::sqrt(degree[i]) : 0.0;
    // filled one triangle at a time so the result is exactly symmetric
    Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double off = -(inv_sqrt[i] * w(i, j) * inv_sqrt[j]);
            l(i, j) = off;
            l(j, i) = off;
        }
    }
    return l;
}

int eigengap_estimate(const AffinityMatrix& a) {
    if (a.size() < 2)
        throw std::invalid_argument("eigengap_estimate: need at least two items");
    const SymmetricEigenResult eig = jacobi_eigensolver(normalized_laplacian(a));
    int best_k = 1;
    double best_gap = eig.eigenvalues[1] - eig.eigenvalues[0];
    for (Eigen::Index k = 2; k < eig.eigenvalues.size(); ++k) {
        const double gap = eig.eigenvalues[k] - eig.eigenvalues[k - 1];
        if (gap > best_gap) {
            best_gap = gap;
            best_k = static_cast<int>(k);
        }
    }
    return best_k;
}

}  // namespace dsclust
