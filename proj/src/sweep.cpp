#include "dsclust/sweep.hpp"

#include <atomic>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "dsclust/affinity.hpp"
#include "dsclust/metrics.hpp"
#include "dsclust/serialize.hpp"

namespace dsclust {

void SweepAxes::validate() const {
    if (thetas.empty()) throw std::invalid_argument("sweep: no theta values");
    if (epsilons.empty()) throw std::invalid_argument("sweep: no epsilon values");
    for (double t : thetas)
        if (!(t >= 0.0 && t < 1.0))
            throw std::invalid_argument("sweep: theta must lie in [0, 1)");
    for (double e : epsilons)
        if (!(e > 0.0)) throw std::invalid_argument("sweep: epsilon must be positive");
}

SweepAxes default_sweep_axes() {
    SweepAxes axes;
    axes.thetas = {0.0,  0.0005, 0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1,
                   0.15, 0.2,    0.3,   0.5,   0.7,   0.9,  0.99, 0.9995};
    axes.epsilons = {1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
    return axes;
}

std::vector<SweepRow> run_sweep(const EmbeddingSet& set, const SweepAxes& axes, Eigen::Index knn,
                                LabelMethod method, int max_iterations, unsigned threads) {
    axes.validate();
    if (!set.labeled()) throw std::invalid_argument("sweep: the input set carries no labels");
    const AffinityMatrix affinity = build_affinity(set.features, knn);

    const size_t n_theta = axes.thetas.size();
    const size_t n_eps = axes.epsilons.size();
    const size_t cells = n_theta * n_eps;
    std::vector<SweepRow> rows(cells);

    unsigned pool = threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    pool = static_cast<unsigned>(std::min<size_t>(pool, cells));

    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    const auto worker = [&]() {
        for (;;) {
            const size_t idx = next.fetch_add(1);
            if (idx >= cells) return;
            try {
                SolverConfig config;
                config.theta = axes.thetas[idx / n_eps];
                config.epsilon = axes.epsilons[idx % n_eps];
                config.max_iterations = max_iterations;
                const Clustering clustering = peel_clusters(affinity, config);
                const EvaluationReport report = evaluate_clustering(clustering, set.labels, method);
                rows[idx] = {config.theta, config.epsilon, report.mr,
                             report.ari,   report.acp,     report.n_clusters};
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(cells);  // stop handing out work
                return;
            }
        }
    };

    if (pool == 1) {
        worker();
    } else {
        std::vector<std::thread> workers;
        workers.reserve(pool);
        for (unsigned t = 0; t < pool; ++t) workers.emplace_back(worker);
        for (std::thread& t : workers) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "theta,epsilon,mr,ari,acp,n_clusters\n";
    for (const SweepRow& r : rows) {
        out << format_double(r.theta) << ',' << format_double(r.epsilon) << ','
            << format_double(r.mr) << ',' << format_double(r.ari) << ',' << format_double(r.acp)
            << ',' << r.n_clusters << '\n';
    }
}

}  // namespace dsclust
