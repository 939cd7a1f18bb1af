#include "dsclust/dominant_sets.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

namespace dsclust {

void SolverConfig::validate() const {
    if (!(theta >= 0.0 && theta < 1.0))
        throw std::invalid_argument("SolverConfig: theta must be in [0,1)");
    if (!(epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be > 0");
    if (max_iterations < 1)
        throw std::invalid_argument("SolverConfig: max_iterations must be >= 1");
}

namespace {

constexpr int kWarmup = 50;        // updates after a kick before stop checks resume
constexpr int kKickBudget = 16;

// Largest eigenvalue of the quadratic form restricted to the face spanned by
// support, on the sum-zero tangent subspace. Shifted power iteration with a
// fixed start vector; an early pass bails out when the value is clearly
// negative. Returns the Rayleigh estimate and writes the direction into v.
double top_tangent_curvature(const Eigen::MatrixXd& a, const std::vector<Eigen::Index>& support,
                             Eigen::VectorXd& v) {
    const Eigen::Index k = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd b(k, k);
    for (Eigen::Index p = 0; p < k; ++p)
        for (Eigen::Index q = 0; q < k; ++q)
            b(p, q) = a(support[static_cast<size_t>(p)], support[static_cast<size_t>(q)]);

    const double shift = b.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
    v.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) v[i] = std::sin(0.7 * static_cast<double>(i + 1) + 0.3);
    v.array() -= v.mean();
    double norm = v.norm();
    if (norm == 0.0) {
        v[0] = 1.0;
        v[k - 1] = -1.0;
        norm = v.norm();
    }
    v /= norm;

    double rayleigh = -shift;
    const double clear_tol = 1e-4 * shift;
    for (int pass = 0; pass < 2; ++pass) {
        const int iters = pass == 0 ? 32 : 224;
        for (int t = 0; t < iters; ++t) {
            Eigen::VectorXd w = b * v;
            w.array() -= w.mean();
            Eigen::VectorXd u = w + shift * v;
            const double un = u.norm();
            if (un == 0.0) return -shift;
            v = u / un;
        }
        Eigen::VectorXd w = b * v;
        w.array() -= w.mean();
        rayleigh = v.dot(w);
        if (pass == 0 && rayleigh < -clear_tol) break;
    }
    return rayleigh;
}

}  // namespace

CharacteristicVector replicator_dynamics(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                         const SolverConfig& config,
                                         const IterationObserver& observer) {
    config.validate();
    const Eigen::Index n = a.rows();
    if (n < 2 || a.cols() != n)
        throw std::invalid_argument("replicator_dynamics: need a square matrix of size >= 2");

    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    const double tol = 1e-8 * (a.cwiseAbs().maxCoeff() + 1.0);

    int it = 0;
    int kicks = 0;
    int walks = 0;
    int warmup = 0;
    bool converged = false;

    // Verifies x is a strict local maximizer; perturbs it and returns false
    // otherwise. Order: first-order escape to a profitable extinct node, then
    // second-order curvature kick, then face-walk off a payoff-neutral ridge.
    auto locally_maximal_or_perturb = [&]() -> bool {
        Eigen::VectorXd ax = a * x;
        const double payoff = x.dot(ax);
        std::vector<Eigen::Index> support;
        support.reserve(static_cast<size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i)
            if (x[i] > 0.0) support.push_back(i);

        Eigen::Index best_escape = -1;
        double best_gain = tol;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (x[i] == 0.0 && ax[i] - payoff > best_gain) {
                best_gain = ax[i] - payoff;
                best_escape = i;
            }
        }
        if (best_escape >= 0 && kicks < kKickBudget) {
            // step to the maximum of the payoff quadratic on the segment
            // toward the profitable node; x'Ax cannot drop, and on a 0/1
            // graph this lands exactly on the enlarged clique's barycenter
            const double q = ax[best_escape];
            const double kick = (q - payoff) / (2.0 * q - payoff);
            x *= (1.0 - kick);
            x[best_escape] += kick;
            ++kicks;
            warmup = kWarmup;
            return false;
        }
        if (support.size() < 2) return true;

        Eigen::VectorXd dir;
        const double curvature = top_tangent_curvature(a, support, dir);
        if (curvature >= -tol && walks < n) {
            // the face is not a strict cap along dir. Slide to the face
            // boundary: aligned with the payoff gradient the quadratic can
            // only gain, and the support strictly shrinks, so the result is
            // an extreme point of the optimal face rather than its interior.
            double r = 0.0;
            for (size_t p = 0; p < support.size(); ++p)
                r += dir[static_cast<Eigen::Index>(p)] * ax[support[p]];
            if (r < 0.0) dir = -dir;
            double step = std::numeric_limits<double>::infinity();
            for (size_t p = 0; p < support.size(); ++p) {
                const double d = dir[static_cast<Eigen::Index>(p)];
                if (d < 0.0) step = std::min(step, x[support[p]] / -d);
            }
            if (!std::isfinite(step) || step <= 0.0) return true;
            for (size_t p = 0; p < support.size(); ++p) {
                const double d = dir[static_cast<Eigen::Index>(p)];
                double nx = x[support[p]] + step * d;
                if (d < 0.0 && x[support[p]] / -d <= step) nx = 0.0;
                x[support[p]] = std::max(nx, 0.0);
            }
            const double sum = x.sum();
            if (sum > 0.0) x /= sum;
            ++walks;
            return false;
        }
        return true;
    };

    while (it < config.max_iterations) {
        Eigen::VectorXd ax = a * x;
        const double payoff = x.dot(ax);
        if (!std::isfinite(payoff))
            throw std::runtime_error("replicator_dynamics: non-finite payoff");
        if (payoff <= 0.0) {
            if (it == 0) throw DisconnectedSubgraph();
            // rest state with zero payoff (isolated vertex); escape or accept
            ++it;
            if (locally_maximal_or_perturb()) {
                converged = true;
                break;
            }
            continue;
        }

        Eigen::VectorXd next = x.cwiseProduct(ax) / payoff;
        // flush components that are numerically extinct at precision epsilon:
        // still decaying and already below epsilon * max weight
        const double peak = next.maxCoeff();
        bool flushed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (next[i] > 0.0 && next[i] < config.epsilon * peak && ax[i] < payoff) {
                next[i] = 0.0;
                flushed = true;
            }
        }
        if (flushed) {
            const double sum = next.sum();
            if (sum > 0.0) next /= sum;
        }

        const double step_norm = (x - next).norm();
        x = std::move(next);
        ++it;
        if (observer) observer(x, x.dot(a * x));

        if (warmup > 0) {
            --warmup;
            continue;
        }
        if (step_norm <= config.epsilon) {
            if (locally_maximal_or_perturb()) {
                converged = true;
                break;
            }
        }
    }

    CharacteristicVector result;
    result.weights = std::move(x);
    result.iterations = it;
    result.converged = converged;
    return result;
}

std::vector<Eigen::Index> extract_support(const Eigen::Ref<const Eigen::VectorXd>& weights,
                                          double theta) {
    if (!(theta >= 0.0 && theta < 1.0))
        throw std::invalid_argument("extract_support: theta must be in [0,1)");
    if (weights.size() == 0) throw std::invalid_argument("extract_support: empty vector");
    const double cutoff = theta * weights.maxCoeff();
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < weights.size(); ++i)
        if (weights[i] > cutoff) support.push_back(i);
    return support;
}

Clustering peel_clusters(const AffinityMatrix& a, const SolverConfig& config) {
    config.validate();
    const Eigen::Index n = a.size();
    Clustering out;
    out.n_items = n;

    std::vector<Eigen::Index> active(static_cast<size_t>(n));
    std::iota(active.begin(), active.end(), 0);
    int rank = 0;

    auto push_singleton = [&](Eigen::Index item) {
        Cluster c;
        c.members = {item};
        c.weights = Eigen::VectorXd::Ones(1);
        c.extraction_rank = rank++;
        c.converged = true;
        c.iterations = 0;
        out.clusters.push_back(std::move(c));
    };

    while (!active.empty()) {
        if (active.size() == 1) {
            push_singleton(active[0]);
            break;
        }
        const Eigen::Index k = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd sub(k, k);
        for (Eigen::Index p = 0; p < k; ++p)
            for (Eigen::Index q = 0; q < k; ++q)
                sub(p, q) = a.values()(active[static_cast<size_t>(p)], active[static_cast<size_t>(q)]);

        CharacteristicVector cv;
        try {
            cv = replicator_dynamics(sub, config);
        } catch (const DisconnectedSubgraph&) {
            for (Eigen::Index item : active) push_singleton(item);
            break;
        }
        if (!cv.converged)
            std::cerr << "warning: replicator dynamics hit the iteration cap ("
                      << config.max_iterations << "); using the last iterate\n";

        const std::vector<Eigen::Index> support = extract_support(cv.weights, config.theta);
        Cluster c;
        c.extraction_rank = rank++;
        c.converged = cv.converged;
        c.iterations = cv.iterations;
        c.members.reserve(support.size());
        c.weights.resize(static_cast<Eigen::Index>(support.size()));
        double total = 0.0;
        for (size_t p = 0; p < support.size(); ++p) total += cv.weights[support[p]];
        for (size_t p = 0; p < support.size(); ++p) {
            c.members.push_back(active[static_cast<size_t>(support[p])]);
            c.weights[static_cast<Eigen::Index>(p)] = cv.weights[support[p]] / total;
        }
        out.clusters.push_back(std::move(c));

        std::vector<Eigen::Index> rest;
        rest.reserve(active.size() - support.size());
        size_t s = 0;
        for (size_t p = 0; p < active.size(); ++p) {
            if (s < support.size() && static_cast<Eigen::Index>(p) == support[s]) {
                ++s;
            } else {
                rest.push_back(active[p]);
            }
        }
        active = std::move(rest);
    }
    return out;
}

}  // namespace dsclust
