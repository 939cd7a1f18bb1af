#include "dsclust/serialize.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace dsclust {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string clustering_to_json(const Clustering& clustering, const EmbeddingSet& set,
                               const ClusteringParams& params) {
    ordered_json p;
    p["algorithm"] = params.algorithm;
    if (params.theta) p["theta"] = *params.theta;
    if (params.epsilon) p["epsilon"] = *params.epsilon;
    if (params.k) p["k"] = *params.k;
    if (params.seed) p["seed"] = *params.seed;

    ordered_json clusters = ordered_json::array();
    for (const Cluster& c : clustering.clusters) {
        // ids ordered by descending weight, ties by id
        std::vector<size_t> order(c.members.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            const double wa = c.weights[static_cast<Eigen::Index>(a)];
            const double wb = c.weights[static_cast<Eigen::Index>(b)];
            if (wa != wb) return wa > wb;
            return set.ids[static_cast<size_t>(c.members[a])] <
                   set.ids[static_cast<size_t>(c.members[b])];
        });
        ordered_json members = ordered_json::array();
        ordered_json weights = ordered_json::object();
        for (size_t i : order) {
            const std::string& id = set.ids[static_cast<size_t>(c.members[i])];
            members.push_back(id);
            weights[id] = c.weights[static_cast<Eigen::Index>(i)];
        }
        ordered_json jc;
        jc["rank"] = c.extraction_rank;
        jc["members"] = std::move(members);
        jc["weights"] = std::move(weights);
        jc["converged"] = c.converged;
        jc["iterations"] = c.iterations;
        clusters.push_back(std::move(jc));
    }

    ordered_json root;
    root["params"] = std::move(p);
    root["clusters"] = std::move(clusters);
    return root.dump(2) + "\n";
}

namespace {

Eigen::Index lookup_id(const std::unordered_map<std::string, Eigen::Index>& index,
                       const std::string& id) {
    const auto it = index.find(id);
    if (it == index.end())
        throw input_error("clustering refers to unknown id \"" + id + "\"");
    return it->second;
}

}  // namespace

LoadedClustering clustering_from_json(const std::string& text, const EmbeddingSet& set) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const ordered_json::exception& e) {
        throw input_error(std::string("invalid clustering JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("clusters") || !root["clusters"].is_array())
        throw input_error("clustering JSON must be an object with a \"clusters\" array");

    LoadedClustering out;
    out.algorithm = "ds";
    if (root.contains("params")) {
        const auto& p = root["params"];
        if (!p.is_object()) throw input_error("clustering JSON: \"params\" must be an object");
        if (p.contains("algorithm")) {
            if (!p["algorithm"].is_string())
                throw input_error("clustering JSON: \"algorithm\" must be a string");
            out.algorithm = p["algorithm"].get<std::string>();
        }
    }

    std::unordered_map<std::string, Eigen::Index> index;
    for (size_t i = 0; i < set.ids.size(); ++i) index[set.ids[i]] = static_cast<Eigen::Index>(i);
    std::vector<char> covered(set.ids.size(), 0);

    struct Parsed {
        long long rank;
        Cluster cluster;
    };
    std::vector<Parsed> parsed;
    std::unordered_set<long long> ranks_seen;

    for (const auto& jc : root["clusters"]) {
        if (!jc.is_object() || !jc.contains("rank") || !jc["rank"].is_number_integer() ||
            !jc.contains("members") || !jc["members"].is_array())
            throw input_error("clustering JSON: each cluster needs an integer \"rank\" and a \"members\" array");
        Parsed p;
        p.rank = jc["rank"].get<long long>();
        if (p.rank < 0) throw input_error("clustering JSON: cluster rank must be non-negative");
        if (!ranks_seen.insert(p.rank).second)
            throw input_error("clustering JSON: duplicate cluster rank " + std::to_string(p.rank));
        if (jc["members"].empty()) throw input_error("clustering JSON: empty cluster");

        std::vector<std::pair<Eigen::Index, double>> entries;
        for (const auto& jm : jc["members"]) {
            if (!jm.is_string()) throw input_error("clustering JSON: member ids must be strings");
            const std::string id = jm.get<std::string>();
            const Eigen::Index item = lookup_id(index, id);
            if (covered[static_cast<size_t>(item)])
                throw input_error("clustering assigns id \"" + id + "\" more than once");
            covered[static_cast<size_t>(item)] = 1;
            entries.emplace_back(item, 0.0);
        }

        if (jc.contains("weights")) {
            if (!jc["weights"].is_object())
                throw input_error("clustering JSON: \"weights\" must be an object");
            if (jc["weights"].size() != entries.size())
                throw input_error("clustering JSON: weights must cover the members exactly");
            double sum = 0.0;
            for (auto& [item, w] : entries) {
                const std::string& id = set.ids[static_cast<size_t>(item)];
                if (!jc["weights"].contains(id))
                    throw input_error("clustering JSON: missing weight for id \"" + id + "\"");
                const auto& jw = jc["weights"][id];
                if (!jw.is_number() || !(jw.get<double>() > 0.0) ||
                    !std::isfinite(jw.get<double>()))
                    throw input_error("clustering JSON: weight for id \"" + id +
                                      "\" must be a positive finite number");
                w = jw.get<double>();
                sum += w;
            }
            for (auto& [item, w] : entries) w /= sum;
        } else {
            for (auto& [item, w] : entries) w = 1.0 / static_cast<double>(entries.size());
        }

        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        p.cluster.members.reserve(entries.size());
        p.cluster.weights.resize(static_cast<Eigen::Index>(entries.size()));
        for (size_t i = 0; i < entries.size(); ++i) {
            p.cluster.members.push_back(entries[i].first);
            p.cluster.weights[static_cast<Eigen::Index>(i)] = entries[i].second;
        }
        p.cluster.converged = !jc.contains("converged") || !jc["converged"].is_boolean() ||
                              jc["converged"].get<bool>();
        p.cluster.iterations = jc.contains("iterations") && jc["iterations"].is_number_integer()
                                   ? jc["iterations"].get<int>()
                                   : 0;
        parsed.push_back(std::move(p));
    }
    if (parsed.empty()) throw input_error("clustering JSON: no clusters");

    for (size_t i = 0; i < covered.size(); ++i)
        if (!covered[i]) throw input_error("clustering is missing id \"" + set.ids[i] + "\"");

    std::sort(parsed.begin(), parsed.end(),
              [](const Parsed& a, const Parsed& b) { return a.rank < b.rank; });
    out.clustering.n_items = set.size();
    for (size_t i = 0; i < parsed.size(); ++i) {
        parsed[i].cluster.extraction_rank = static_cast<int>(i);
        out.clustering.clusters.push_back(std::move(parsed[i].cluster));
    }
    return out;
}

LoadedClustering external_assignment_from_csv(std::istream& in, const EmbeddingSet& set) {
    std::string line;
    if (!std::getline(in, line)) throw input_error("assignment CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "id,cluster_id")
        throw input_error("assignment CSV: header must be \"id,cluster_id\"");

    std::unordered_map<std::string, Eigen::Index> index;
    for (size_t i = 0; i < set.ids.size(); ++i) index[set.ids[i]] = static_cast<Eigen::Index>(i);
    std::vector<char> covered(set.ids.size(), 0);

    std::vector<std::string> group_order;                       // by first appearance
    std::unordered_map<std::string, size_t> group_index;
    std::vector<std::vector<Eigen::Index>> groups;

    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw input_error("assignment CSV: line " + std::to_string(line_no) +
                              " must have exactly two fields");
        const std::string id = line.substr(0, comma);
        const std::string cluster = line.substr(comma + 1);
        if (id.empty() || cluster.empty())
            throw input_error("assignment CSV: line " + std::to_string(line_no) +
                              " has an empty field");
        const Eigen::Index item = lookup_id(index, id);
        if (covered[static_cast<size_t>(item)])
            throw input_error("assignment CSV: id \"" + id + "\" appears more than once");
        covered[static_cast<size_t>(item)] = 1;
        auto [it, fresh] = group_index.emplace(cluster, groups.size());
        if (fresh) {
            group_order.push_back(cluster);
            groups.emplace_back();
        }
        groups[it->second].push_back(item);
    }
    for (size_t i = 0; i < covered.size(); ++i)
        if (!covered[i]) throw input_error("assignment CSV is missing id \"" + set.ids[i] + "\"");

    LoadedClustering out;
    out.algorithm = "external";
    out.clustering.n_items = set.size();
    for (size_t g = 0; g < groups.size(); ++g) {
        Cluster c;
        c.members = groups[g];
        std::sort(c.members.begin(), c.members.end());
        c.weights = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(c.members.size()),
                                              1.0 / static_cast<double>(c.members.size()));
        c.extraction_rank = static_cast<int>(g);
        out.clustering.clusters.push_back(std::move(c));
    }
    return out;
}

std::string report_to_json(const EvaluationReport& report) {
    ordered_json root;
    root["mr"] = report.mr;
    root["ari"] = report.ari;
    root["acp"] = report.acp;
    root["n_clusters"] = report.n_clusters;
    ordered_json mapping = ordered_json::object();
    for (size_t i = 0; i < report.assignment.labels.size(); ++i) {
        if (report.assignment.labels[i])
            mapping[std::to_string(i)] = *report.assignment.labels[i];
        else
            mapping[std::to_string(i)] = nullptr;
    }
    root["assignment"] = {
        {"method", report.assignment.method == LabelMethod::max ? "max" : "hungarian"},
        {"mapping", std::move(mapping)},
    };
    ordered_json errors = ordered_json::object();
    for (const auto& [label, count] : report.per_speaker_errors) errors[label] = count;
    root["per_speaker_errors"] = std::move(errors);
    return root.dump(2) + "\n";
}

std::string report_to_csv_line(const EvaluationReport& report) {
    return format_double(report.mr) + "," + format_double(report.ari) + "," +
           format_double(report.acp) + "," + std::to_string(report.n_clusters) + "\n";
}

void write_affinity_csv(const AffinityMatrix& a, std::ostream& out) {
    out << "# n=" << a.size() << "\n";
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        for (Eigen::Index j = 0; j < a.size(); ++j) {
            if (j) out << ',';
            out << format_double(a.values()(i, j));
        }
        out << '\n';
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw input_error("cannot open \"" + tmp + "\" for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            std::remove(tmp.c_str());
            throw input_error("failed writing \"" + tmp + "\"");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw input_error("cannot move \"" + tmp + "\" to \"" + path + "\": " + ec.message());
    }
}

}  // namespace dsclust
