#include "docclust/report_json.hpp"

#include "docclust/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace docclust::report {

namespace {

Json opt(const std::optional<double>& v) { return v && std::isfinite(*v) ? Json(*v) : Json(nullptr); }

template <class T>
T field(const Json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

std::vector<consolidation::Constraint> parse_pairs(const Json& j, const char* key) {
    std::vector<consolidation::Constraint> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) throw DataError(std::string("constraints: '") + key + "' must be an array");
    for (const auto& e : j.at(key)) {
        consolidation::Constraint c;
        if (e.is_array() && (e.size() == 2 || e.size() == 3) && e[0].is_number_integer() && e[1].is_number_integer()) {
            c.i = e[0].get<Eigen::Index>();
            c.j = e[1].get<Eigen::Index>();
            if (e.size() == 3) {
                if (!e[2].is_number()) throw DataError("constraints: weight must be a number");
                c.weight = e[2].get<double>();
            }
        } else if (e.is_object() && e.contains("i") && e.contains("j")) {
            c.i = e.at("i").get<Eigen::Index>();
            c.j = e.at("j").get<Eigen::Index>();
            c.weight = e.value("weight", 1.0);
        } else {
            throw DataError(std::string("constraints: malformed entry in '") + key + "': " + e.dump());
        }
        out.push_back(c);
    }
    return out;
}

std::string cell(const std::optional<double>& v) {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", *v);
    return buf;
}

}  // namespace

Json to_json(const metrics::EvalReport& r) {
    Json j;
    j["ari"] = opt(r.ari);
    j["nmi"] = opt(r.nmi);
    j["hs"] = opt(r.hs);
    j["cs"] = opt(r.cs);
    j["ss"] = opt(r.ss);
    j["pc"] = r.pc;
    j["noise_pct"] = r.noise_pct;
    return j;
}

Json to_json(const Partition& p) {
    Json j;
    j["algorithm"] = std::string(to_string(p.algorithm));
    j["n_clusters"] = p.n_clusters;
    j["labels"] = p.labels;
    return j;
}

Partition partition_from_json(const Json& j) {
    try {
        Partition p;
        p.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
        p.labels = j.at("labels").get<std::vector<int>>();
        p.n_clusters = j.at("n_clusters").get<int>();
        p.validate();
        return p;
    } catch (const Json::exception& e) {
        throw DataError(std::string("malformed partition: ") + e.what());
    }
}

Json to_json(const ClusterConfig& cfg) {
    Json j;
    j["algorithm"] = std::string(to_string(cfg.algorithm));
    j["kmeans"] = {{"k", cfg.kmeans.k}, {"max_iter", cfg.kmeans.max_iter}, {"seed", cfg.kmeans.seed},
                   {"tol", cfg.kmeans.tol}};
    j["dbscan"] = {{"eps", cfg.dbscan.eps}, {"min_pts", cfg.dbscan.min_pts}};
    j["hdbscan"] = {{"min_cluster_size", cfg.hdbscan.min_cluster_size},
                    {"min_samples", cfg.hdbscan.min_samples},
                    {"knn_k", cfg.hdbscan.knn_k}};
    j["birch"] = {{"threshold", cfg.birch.threshold},
                  {"branching", cfg.birch.branching},
                  {"global_k", cfg.birch.global_k ? Json(*cfg.birch.global_k) : Json(nullptr)},
                  {"seed", cfg.birch.seed}};
    return j;
}

ClusterConfig cluster_config_from_json(const Json& j) {
    ClusterConfig cfg;
    cfg.algorithm = algorithm_from_string(field<std::string>(j, "algorithm", "kmeans"));
    const Json empty = Json::object();
    const Json& km = j.contains("kmeans") ? j.at("kmeans") : empty;
    cfg.kmeans.k = field(km, "k", cfg.kmeans.k);
    cfg.kmeans.max_iter = field(km, "max_iter", cfg.kmeans.max_iter);
    cfg.kmeans.seed = field(km, "seed", cfg.kmeans.seed);
    cfg.kmeans.tol = field(km, "tol", cfg.kmeans.tol);
    const Json& db = j.contains("dbscan") ? j.at("dbscan") : empty;
    cfg.dbscan.eps = field(db, "eps", cfg.dbscan.eps);
    cfg.dbscan.min_pts = field(db, "min_pts", cfg.dbscan.min_pts);
    const Json& hd = j.contains("hdbscan") ? j.at("hdbscan") : empty;
    cfg.hdbscan.min_cluster_size = field(hd, "min_cluster_size", cfg.hdbscan.min_cluster_size);
    cfg.hdbscan.min_samples = field(hd, "min_samples", cfg.hdbscan.min_samples);
    cfg.hdbscan.knn_k = field(hd, "knn_k", cfg.hdbscan.knn_k);
    const Json& bi = j.contains("birch") ? j.at("birch") : empty;
    cfg.birch.threshold = field(bi, "threshold", cfg.birch.threshold);
    cfg.birch.branching = field(bi, "branching", cfg.birch.branching);
    cfg.birch.seed = field(bi, "seed", cfg.birch.seed);
    if (bi.contains("global_k") && !bi.at("global_k").is_null()) cfg.birch.global_k = bi.at("global_k").get<int>();
    return cfg;
}

Json to_json(const tuning::Trial& t) {
    Json j;
    Json params;
    for (const auto& [name, value] : t.params) params[name] = value;
    j["params"] = params;
    j["score"] = opt(t.score);
    j["pc"] = t.pc;
    j["noise_pct"] = t.noise_pct;
    j["error"] = t.error ? Json(*t.error) : Json(nullptr);
    return j;
}

Json to_json(const tuning::GridSpec& g) {
    Json j;
    j["algorithm"] = std::string(to_string(g.algorithm));
    Json axes = Json::array();
    for (const auto& a : g.axes) axes.push_back({{"name", a.name}, {"values", a.values}});
    j["axes"] = axes;
    return j;
}

Json to_json(const fusion::GroupStats& s) {
    Json j;
    j["group_key"] = s.key;
    j["count"] = s.count;
    j["degenerate"] = s.degenerate;
    j["dim"] = s.mean.size();
    j["mean"] = std::vector<double>(s.mean.data(), s.mean.data() + s.mean.size());
    std::vector<double> cov;
    for (Eigen::Index r = 0; r < s.covariance.rows(); ++r)
        for (Eigen::Index c = 0; c < s.covariance.cols(); ++c) cov.push_back(s.covariance(r, c));
    j["covariance"] = cov;
    return j;
}

Json to_json(const consolidation::MergeMap& m) {
    Json j;
    j["n_new"] = m.n_new;
    j["mapping"] = m.mapping;
    return j;
}

consolidation::ConstraintSet constraints_from_json(const Json& j) {
    if (!j.is_object()) throw DataError("constraints file must hold a JSON object");
    consolidation::ConstraintSet cs;
    cs.must_links = parse_pairs(j, "must_link");
    cs.cannot_links = parse_pairs(j, "cannot_link");
    return cs;
}

std::string csv_header() { return "model,algorithm,ARI,NMI,HS,CS,SS,PC,%Noise\n"; }

std::string csv_row(const std::string& model, const std::string& algorithm, const metrics::EvalReport& r) {
    char tail[96];
    std::snprintf(tail, sizeof tail, "%d,%.2f", r.pc, r.noise_pct);
    return model + "," + algorithm + "," + cell(r.ari) + "," + cell(r.nmi) + "," + cell(r.hs) + "," + cell(r.cs) +
           "," + cell(r.ss) + "," + tail + "\n";
}

void write_json(const std::filesystem::path& path, const Json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw DataError("write failed for " + path.string());
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace docclust::report
