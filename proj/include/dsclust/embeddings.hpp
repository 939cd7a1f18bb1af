#ifndef DSCLUST_EMBEDDINGS_HPP
#define DSCLUST_EMBEDDINGS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsclust {

// Raised for malformed or inconsistent user input (files, flag values).
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A collection of embedding vectors, one row per item. labels is either
// empty (unlabeled set) or holds exactly one entry per row.
struct EmbeddingSet {
    std::vector<std::string> ids;
    std::vector<std::string> labels;
    Eigen::MatrixXd features;

    Eigen::Index size() const { return features.rows(); }
    Eigen::Index dim() const { return features.cols(); }
    bool labeled() const { return !labels.empty(); }
};

// CSV schema: header "id,label,f0,...,f{m-1}", one row per item, full float
// precision. Labels must be all-present or all-absent across rows.
EmbeddingSet load_embeddings(std::istream& in);
EmbeddingSet load_embeddings(const std::string& path);
void save_embeddings(const EmbeddingSet& set, std::ostream& out);
void save_embeddings(const EmbeddingSet& set, const std::string& path);

// Synthetic set: n_clusters unit-norm orthogonal centroids (canonical basis
// vectors), points_per_cluster noisy copies each, renormalized to unit norm.
// noise_scale=0 gives exact duplicates per cluster. Noise is drawn from
// mt19937_64 seeded as given.
EmbeddingSet synth_embeddings(int n_clusters, int points_per_cluster, int dim,
                              double noise_scale, std::uint64_t seed);

}  // namespace dsclust

#endif
