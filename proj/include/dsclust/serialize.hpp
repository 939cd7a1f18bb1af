#ifndef DSCLUST_SERIALIZE_HPP
#define DSCLUST_SERIALIZE_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "dsclust/dominant_sets.hpp"
#include "dsclust/embeddings.hpp"
#include "dsclust/metrics.hpp"

namespace dsclust {

struct ClusteringParams {
    std::string algorithm = "ds";  // "ds" or "kmeans"
    std::optional<double> theta;
    std::optional<double> epsilon;
    std::optional<int> k;
    std::optional<std::uint64_t> seed;
};

// {"params": {...}, "clusters": [{"rank", "members", "weights", "converged",
// "iterations"}...]}; members ordered by descending weight, ties by id.
// Serialization is byte-deterministic for identical inputs.
std::string clustering_to_json(const Clustering& clustering, const EmbeddingSet& set,
                               const ClusteringParams& params);

struct LoadedClustering {
    Clustering clustering;
    std::string algorithm;
};

// Inverse of clustering_to_json against the same embedding set; ids must
// exactly cover the set (first orphan or missing id is named in the error).
LoadedClustering clustering_from_json(const std::string& text, const EmbeddingSet& set);

// CSV "id,cluster_id": arbitrary external partition of the set's ids.
// Clusters are ranked by first appearance; weights uniform.
LoadedClustering external_assignment_from_csv(std::istream& in, const EmbeddingSet& set);

std::string report_to_json(const EvaluationReport& report);

// One line: mr,ari,acp,n_clusters
std::string report_to_csv_line(const EvaluationReport& report);

// Full matrix dump: comment line "# n=<n>", then n comma-separated rows.
void write_affinity_csv(const AffinityMatrix& a, std::ostream& out);

// Shortest round-trip decimal form of a double (to_chars).
std::string format_double(double v);

// Write-then-rename so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace dsclust

#endif
