#include "dsclust/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace dsclust {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

double parse_field(const std::string& s, const std::string& id, Eigen::Index col) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw input_error("non-numeric value '" + s + "' in feature column f" +
                          std::to_string(col) + " of row '" + id + "'");
    return v;
}

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

EmbeddingSet load_embeddings(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw input_error("empty embedding CSV");
    auto header = split_csv_line(strip_cr(line));
    if (header.size() < 3 || header[0] != "id" || header[1] != "label")
        throw input_error("embedding CSV header must be 'id,label,f0,...'");
    const Eigen::Index dim = static_cast<Eigen::Index>(header.size()) - 2;

    std::vector<std::string> ids;
    std::vector<std::string> labels;
    std::vector<Eigen::VectorXd> rows;
    std::unordered_set<std::string> seen;
    bool any_label = false, any_unlabeled = false;

    while (std::getline(in, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        const std::string& id = fields.empty() ? line : fields[0];
        if (static_cast<Eigen::Index>(fields.size()) != dim + 2)
            throw input_error("dimension mismatch in row '" + id + "': expected " +
                              std::to_string(dim) + " features, got " +
                              std::to_string(fields.size() - 2));
        if (id.empty()) throw input_error("empty id in embedding CSV");
        if (!seen.insert(id).second) throw input_error("duplicate id '" + id + "'");
        (fields[1].empty() ? any_unlabeled : any_label) = true;

        Eigen::VectorXd v(dim);
        for (Eigen::Index j = 0; j < dim; ++j)
            v[j] = parse_field(fields[static_cast<size_t>(j) + 2], id, j);
        if (v.norm() == 0.0) throw input_error("zero-norm vector in row '" + id + "'");

        ids.push_back(id);
        labels.push_back(fields[1]);
        rows.push_back(std::move(v));
    }
    if (rows.empty()) throw input_error("embedding CSV has no data rows");
    if (any_label && any_unlabeled)
        throw input_error("mixed labeling: labels must be all-present or all-absent");

    EmbeddingSet set;
    set.ids = std::move(ids);
    if (any_label) set.labels = std::move(labels);
    set.features.resize(static_cast<Eigen::Index>(rows.size()), dim);
    for (size_t i = 0; i < rows.size(); ++i)
        set.features.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    return set;
}

EmbeddingSet load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    return load_embeddings(in);
}

void save_embeddings(const EmbeddingSet& set, std::ostream& out) {
    out << "id,label";
    for (Eigen::Index j = 0; j < set.dim(); ++j) out << ",f" << j;
    out << "\n";
    for (Eigen::Index i = 0; i < set.size(); ++i) {
        out << set.ids[static_cast<size_t>(i)] << ','
            << (set.labeled() ? set.labels[static_cast<size_t>(i)] : std::string());
        for (Eigen::Index j = 0; j < set.dim(); ++j) out << ',' << shortest(set.features(i, j));
        out << "\n";
    }
}

void save_embeddings(const EmbeddingSet& set, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot write '" + path + "'");
    save_embeddings(set, out);
}

EmbeddingSet synth_embeddings(int n_clusters, int points_per_cluster, int dim,
                              double noise_scale, std::uint64_t seed) {
    if (n_clusters < 1) throw std::invalid_argument("synth_embeddings: n_clusters must be >= 1");
    if (points_per_cluster < 1)
        throw std::invalid_argument("synth_embeddings: points_per_cluster must be >= 1");
    if (dim < n_clusters)
        throw std::invalid_argument("synth_embeddings: dim must be >= n_clusters");
    if (noise_scale < 0.0)
        throw std::invalid_argument("synth_embeddings: noise_scale must be >= 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const Eigen::Index n = static_cast<Eigen::Index>(n_clusters) * points_per_cluster;
    EmbeddingSet set;
    set.features.resize(n, dim);
    set.ids.reserve(static_cast<size_t>(n));
    set.labels.reserve(static_cast<size_t>(n));

    Eigen::Index row = 0;
    for (int c = 0; c < n_clusters; ++c) {
        for (int p = 0; p < points_per_cluster; ++p, ++row) {
            Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
            v[c] = 1.0;
            if (noise_scale > 0.0)
                for (int j = 0; j < dim; ++j) v[j] += noise_scale * gauss(rng);
            const double norm = v.norm();
            if (norm == 0.0) v[c] = 1.0;  // vanishing draw; keep the centroid
            else v /= norm;
            set.features.row(row) = v.transpose();

            char id[24], label[16];
            std::snprintf(id, sizeof id, "p%04lld", static_cast<long long>(row));
            std::snprintf(label, sizeof label, "c%03d", c);
            set.ids.emplace_back(id);
            set.labels.emplace_back(label);
        }
    }
    return set;
}

}  // namespace dsclust
