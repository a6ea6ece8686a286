#include "docclust/clustering.hpp"
#include "docclust/consolidation.hpp"
#include "docclust/embx.hpp"
#include "docclust/error.hpp"
#include "docclust/fusion.hpp"
#include "docclust/metrics.hpp"
#include "docclust/page_graph.hpp"
#include "docclust/parallel.hpp"
#include "docclust/projection.hpp"
#include "docclust/report_json.hpp"
#include "docclust/synthgen.hpp"
#include "docclust/tuning.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>

namespace fs = std::filesystem;
using namespace docclust;
using report::Json;

namespace {

struct Common {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string report;

    unsigned workers() const { return threads == 0 ? default_thread_count() : threads; }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker cap (0 = DOCCLUST_THREADS or hardware)")->capture_default_str();
    sub->add_option("--report", c.report, "Write the JSON report here instead of stdout");
}

void emit(const Common& c, const Json& j) {
    if (c.report.empty())
        std::cout << j.dump(2) << '\n';
    else
        report::write_json(c.report, j);
}

Json header(const std::string& command, const Common& c) {
    Json j;
    j["command"] = command;
    j["seed"] = c.seed;
    return j;
}

std::optional<std::vector<int>> truth_of(const embx::Dataset& ds) { return ds.labels(); }

// Cluster flags. They override --config, which overrides the built-in defaults.
struct ClusterFlags {
    std::string config_path;
    std::string alg = "kmeans";
    ClusterConfig values;
    int global_k = 0;
    std::vector<std::pair<CLI::Option*, std::function<void(ClusterConfig&)>>> setters;
    CLI::Option* alg_opt = nullptr;

    void add(CLI::App* sub) {
        sub->add_option("--config", config_path, "Cluster config JSON (as written in reports)");
        alg_opt = sub->add_option("--alg", alg, "kmeans | dbscan | hdbscan | hdbscan-knn | birch")->capture_default_str();
        auto& v = values;
        setters.emplace_back(sub->add_option("--k", v.kmeans.k, "k-means cluster count"),
                             [&v](ClusterConfig& c) { c.kmeans.k = v.kmeans.k; });
        setters.emplace_back(sub->add_option("--max-iter", v.kmeans.max_iter, "k-means iteration cap"),
                             [&v](ClusterConfig& c) { c.kmeans.max_iter = v.kmeans.max_iter; });
        setters.emplace_back(sub->add_option("--tol", v.kmeans.tol, "k-means centroid shift tolerance"),
                             [&v](ClusterConfig& c) { c.kmeans.tol = v.kmeans.tol; });
        setters.emplace_back(sub->add_option("--eps", v.dbscan.eps, "DBSCAN radius"),
                             [&v](ClusterConfig& c) { c.dbscan.eps = v.dbscan.eps; });
        setters.emplace_back(sub->add_option("--min-pts", v.dbscan.min_pts, "DBSCAN core threshold (self included)"),
                             [&v](ClusterConfig& c) { c.dbscan.min_pts = v.dbscan.min_pts; });
        setters.emplace_back(
            sub->add_option("--min-cluster-size", v.hdbscan.min_cluster_size, "HDBSCAN minimum cluster size"),
            [&v](ClusterConfig& c) { c.hdbscan.min_cluster_size = v.hdbscan.min_cluster_size; });
        setters.emplace_back(sub->add_option("--min-samples", v.hdbscan.min_samples, "HDBSCAN core neighbourhood"),
                             [&v](ClusterConfig& c) { c.hdbscan.min_samples = v.hdbscan.min_samples; });
        setters.emplace_back(sub->add_option("--knn-k", v.hdbscan.knn_k, "neighbours for noise reassignment"),
                             [&v](ClusterConfig& c) { c.hdbscan.knn_k = v.hdbscan.knn_k; });
        setters.emplace_back(sub->add_option("--threshold", v.birch.threshold, "BIRCH leaf radius threshold"),
                             [&v](ClusterConfig& c) { c.birch.threshold = v.birch.threshold; });
        setters.emplace_back(sub->add_option("--branching", v.birch.branching, "BIRCH branching factor"),
                             [&v](ClusterConfig& c) { c.birch.branching = v.birch.branching; });
        setters.emplace_back(sub->add_option("--global-k", global_k, "BIRCH global k-means cluster count"),
                             [this](ClusterConfig& c) { c.birch.global_k = global_k; });
    }

    ClusterConfig resolve(std::uint64_t seed) const {
        ClusterConfig cfg = config_path.empty() ? ClusterConfig{} : report::cluster_config_from_json(report::read_json(config_path));
        if (config_path.empty() || alg_opt->count() > 0) cfg.algorithm = algorithm_from_string(alg);
        for (const auto& [opt, set] : setters)
            if (opt->count() > 0) set(cfg);
        if (config_path.empty()) cfg = cfg.reseeded(seed);
        return cfg;
    }
};

void write_partition(const std::string& path, const Partition& p) {
    if (!path.empty()) report::write_json(path, report::to_json(p));
}

Json evaluation(const Matrix& data, const Partition& p, const embx::Dataset& ds, unsigned threads) {
    return report::to_json(metrics::evaluate(data, p, truth_of(ds), threads));
}

// ---- subcommands

struct SynthArgs {
    synth::BlobSpec spec;
    std::string shift = "none";
    std::string out;
};

int run_synth(const SynthArgs& a, const Common& c) {
    synth::BlobSpec spec = a.spec;
    spec.shift = synth::shift_from_string(a.shift);
    spec.seed = c.seed;
    spec.validate();
    const embx::Dataset ds = synth::generate(spec);
    embx::write_dataset(ds, a.out);
    Json j = header("synth", c);
    j["config"] = {{"n_clusters", spec.n_clusters},
                   {"points_per_cluster", spec.points_per_cluster},
                   {"dim", spec.dim},
                   {"separation", spec.separation},
                   {"noise_frac", spec.noise_frac},
                   {"shift", std::string(synth::to_string(spec.shift))},
                   {"shift_magnitude", spec.shift_magnitude},
                   {"seed", spec.seed}};
    j["output"] = a.out;
    j["item_count"] = ds.size();
    j["outliers"] = spec.outlier_count();
    emit(c, j);
    return 0;
}

struct ProjectArgs {
    std::string in, out, strategy = "mean", pca_base = "mean";
    int kernel = 0;
    int pca_dim = 0;
};

int run_project(const ProjectArgs& a, const Common& c) {
    const embx::Dataset ds = embx::read_dataset(a.in);
    const Strategy strategy = strategy_from_string(a.strategy);
    const Strategy base = strategy == Strategy::pca ? strategy_from_string(a.pca_base) : strategy;
    if (base == Strategy::pca) throw ConfigError("--pca-base cannot be pca");
    if (strategy == Strategy::pca && a.pca_dim < 1) throw ConfigError("pca needs --pca-dim >= 1");
    const int kernel = a.kernel > 0 ? a.kernel : projection::default_kernel(ds.dim);

    std::vector<DocVector> vecs;
    for (const auto& te : ds.items) {
        switch (base) {
            case Strategy::mean: vecs.push_back(projection::mean_pool(te)); break;
            case Strategy::hybrid: vecs.push_back(projection::hybrid_pool(te, {kernel})); break;
            case Strategy::cls: vecs.push_back(projection::cls_pool(te)); break;
            case Strategy::pca: break;
        }
    }
    if (strategy == Strategy::pca) vecs = projection::pca_reduce(vecs, a.pca_dim);

    embx::Dataset out = embx::from_vectors(stack_rows(vecs));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto& o = out.items[i];
        const auto& src = ds.items[i];
        o.doc_id = src.doc_id;
        o.page_index = src.page_index;
        o.label = src.label;
        o.ocr_confidence = src.ocr_confidence;
        o.language = src.language;
    }
    embx::write_dataset(out, a.out);

    Json j = header("project", c);
    j["config"] = {{"input", a.in},
                   {"output", a.out},
                   {"strategy", a.strategy},
                   {"kernel", base == Strategy::hybrid ? Json(kernel) : Json(nullptr)},
                   {"pca_dim", strategy == Strategy::pca ? Json(a.pca_dim) : Json(nullptr)},
                   {"pca_base", strategy == Strategy::pca ? Json(a.pca_base) : Json(nullptr)}};
    j["item_count"] = out.size();
    j["dim"] = out.dim;
    emit(c, j);
    return 0;
}

struct ClusterArgs {
    std::string in, partition_out;
    ClusterFlags flags;
};

int run_cluster(const ClusterArgs& a, const Common& c) {
    const embx::Dataset ds = embx::read_dataset(a.in);
    const Matrix data = ds.vectors();
    const ClusterConfig cfg = a.flags.resolve(c.seed);
    const Partition p = run_clustering(data, cfg);
    write_partition(a.partition_out, p);
    Json j = header("cluster", c);
    j["config"] = report::to_json(cfg);
    j["input"] = a.in;
    j["metrics"] = evaluation(data, p, ds, c.workers());
    j["partition"] = report::to_json(p);
    emit(c, j);
    return 0;
}

struct TuneArgs {
    std::string in, partition_out, trials_out, grid;
    int true_k = 0;
    ClusterFlags flags;
};

int run_tune(const TuneArgs& a, const Common& c) {
    const embx::Dataset ds = embx::read_dataset(a.in);
    const Matrix data = ds.vectors();
    const ClusterConfig base = a.flags.resolve(c.seed);
    Json j = header("tune", c);
    j["input"] = a.in;
    j["base_config"] = report::to_json(base);

    int true_k = a.true_k;
    if (true_k == 0 && (base.algorithm == Algorithm::kmeans) ) {
        const auto truth = truth_of(ds);
        if (!truth) throw ConfigError("k-means tuning follows the oracle-k convention: pass --true-k or use labelled data");
        true_k = static_cast<int>(std::set<int>(truth->begin(), truth->end()).size());
    }

    Partition p;
    if (base.algorithm == Algorithm::kmeans) {
        p = tuning::oracle_partition(data, Algorithm::kmeans, true_k, std::nullopt, c.seed, c.workers());
        j["oracle_k"] = true_k;
        ClusterConfig best = base;
        best.kmeans.k = true_k;
        j["best_config"] = report::to_json(best);
    } else {
        tuning::GridSpec spec;
        if (a.grid.empty()) {
            spec = tuning::default_grid(base.algorithm, data, c.seed);
        } else {
            const Json g = report::read_json(a.grid);
            spec.algorithm = base.algorithm;
            for (const auto& [name, values] : g.at("axes").items())
                spec.axes.push_back({name, values.get<std::vector<double>>()});
        }
        const tuning::TuneResult tr = tuning::grid_search(data, spec, base, c.workers());
        if (!a.trials_out.empty()) {
            std::ofstream out(a.trials_out, std::ios::binary);
            if (!out) throw DataError("cannot write " + a.trials_out);
            for (const auto& t : tr.trials) out << report::to_json(t).dump() << '\n';
        }
        j["grid"] = report::to_json(spec);
        j["best_index"] = tr.best_index;
        j["best_score"] = tr.best_score;
        j["best_config"] = report::to_json(tr.best_config);
        if (base.algorithm == Algorithm::birch && a.true_k > 0) {
            p = tuning::oracle_partition(data, Algorithm::birch, a.true_k, tr, c.seed, c.workers());
            j["oracle_k"] = a.true_k;
        } else {
            p = run_clustering(data, tr.best_config);
        }
    }
    write_partition(a.partition_out, p);
    j["metrics"] = evaluation(data, p, ds, c.workers());
    j["partition"] = report::to_json(p);
    emit(c, j);
    return 0;
}

struct EvaluateArgs {
    std::string in, partition, csv, model = "model";
};

int run_evaluate(const EvaluateArgs& a, const Common& c) {
    const embx::Dataset ds = embx::read_dataset(a.in);
    const Matrix data = ds.vectors();
    const Partition p = report::partition_from_json(report::read_json(a.partition));
    if (p.size() != ds.size())
        throw DataError("partition has " + std::to_string(p.size()) + " labels for " + std::to_string(ds.size()) +
                        " items");
    const metrics::EvalReport r = metrics::evaluate(data, p, truth_of(ds), c.workers());
    if (!a.csv.empty()) {
        const bool fresh = !fs::exists(a.csv);
        std::ofstream out(a.csv, std::ios::binary | std::ios::app);
        if (!out) throw DataError("cannot write " + a.csv);
        if (fresh) out << report::csv_header();
        out << report::csv_row(a.model, std::string(to_string(p.algorithm)), r);
    }
    Json j = header("evaluate", c);
    j["config"] = {{"input", a.in}, {"partition", a.partition}, {"model", a.model}};
    j["metrics"] = report::to_json(r);
    emit(c, j);
    return 0;
}

struct AggregateArgs {
    std::string in, out;
    pagegraph::PageGraphConfig cfg;
};

int run_aggregate(const AggregateArgs& a, const Common& c) {
    const embx::Dataset ds = embx::read_dataset(a.in);
    if (!ds.is_vector_dataset()) throw DataError("aggregate-pages needs one row per page; run project first");
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::size_t>> pages;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto [it, inserted] = pages.try_emplace(ds.items[i].doc_id);
        if (inserted) order.push_back(ds.items[i].doc_id);
        it->second.push_back(i);
    }
    Matrix docs(static_cast<Eigen::Index>(order.size()), ds.dim);
    std::vector<embx::TokenEmbeddings> meta;
    Json page_counts = Json::object();
    for (std::size_t d = 0; d < order.size(); ++d) {
        auto idx = pages[order[d]];
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
            return ds.items[x].page_index < ds.items[y].page_index;
        });
        for (std::size_t k = 1; k < idx.size(); ++k)
            if (ds.items[idx[k]].page_index == ds.items[idx[k - 1]].page_index)
                throw DataError("document '" + order[d] + "' repeats page " +
                                std::to_string(ds.items[idx[k]].page_index));
        Matrix rows(static_cast<Eigen::Index>(idx.size()), ds.dim);
        for (std::size_t k = 0; k < idx.size(); ++k)
            rows.row(static_cast<Eigen::Index>(k)) = ds.items[idx[k]].matrix.row(0).cast<double>();
        docs.row(static_cast<Eigen::Index>(d)) = pagegraph::aggregate_document(rows, a.cfg);

        embx::TokenEmbeddings m;
        m.label = ds.items[idx[0]].label;
        m.language = ds.items[idx[0]].language;
        double conf_sum = 0.0;
        int conf_n = 0;
        for (std::size_t k : idx) {
            if (ds.items[k].label != m.label) m.label.reset();
            if (ds.items[k].language != m.language) m.language.reset();
            if (ds.items[k].ocr_confidence) {
                conf_sum += *ds.items[k].ocr_confidence;
                ++conf_n;
            }
        }
        if (conf_n > 0) m.ocr_confidence = conf_sum / conf_n;
        meta.push_back(std::move(m));
        page_counts[order[d]] = idx.size();
    }
    embx::Dataset out = embx::from_vectors(docs, order);
    for (std::size_t d = 0; d < order.size(); ++d) {
        out.items[d].label = meta[d].label;
        out.items[d].language = meta[d].language;
        out.items[d].ocr_confidence = meta[d].ocr_confidence;
    }
    embx::write_dataset(out, a.out);

    Json j = header("aggregate-pages", c);
    j["config"] = {{"input", a.in},
                   {"output", a.out},
                   {"lambda_seq", a.cfg.lambda_seq},
                   {"lambda_sim", a.cfg.lambda_sim},
                   {"sem_k", a.cfg.sem_k},
                   {"smoothing_steps", a.cfg.smoothing_steps},
                   {"temperature", a.cfg.temperature}};
    j["documents"] = order.size();
    j["pages"] = page_counts;
    emit(c, j);
    return 0;
}

struct ConsolidateArgs {
    std::string in, partition, partition_out, constraints, method = "agglomerate";
    consolidation::SeedConfig seed_cfg;
    consolidation::StabilityConfig stab;
    int restarts = 5;
    std::vector<double> taus = consolidation::kDefaultTauSweep;
    ClusterFlags flags;
};

int run_consolidate(const ConsolidateArgs& a, const Common& c) {
    const embx::Dataset ds = embx::read_dataset(a.in);
    const Matrix data = ds.vectors();
    auto input_partition = [&] {
        if (a.partition.empty()) throw ConfigError("--partition is required for method " + a.method);
        Partition p = report::partition_from_json(report::read_json(a.partition));
        if (p.size() != ds.size()) throw DataError("partition size does not match the dataset");
        return p;
    };
    std::optional<consolidation::ConstraintSet> cons;
    if (!a.constraints.empty()) cons = report::constraints_from_json(report::read_json(a.constraints));

    Json j = header("consolidate", c);
    Json cfg = {{"input", a.in}, {"method", a.method}};
    Partition result;
    Json penalty_before = nullptr, penalty_after = nullptr, merge_map = nullptr, bic_curve = nullptr;
    Json k_hat = nullptr, k_dispersion = nullptr;

    if (a.method == "constraints") {
        if (!cons) throw ConfigError("method constraints needs --constraints");
        const auto r = consolidation::constraint_consolidate(input_partition(), *cons);
        result = r.partition;
        merge_map = report::to_json(r.merge_map);
        penalty_before = r.penalty_before;
        penalty_after = r.penalty_after;
        cfg["partition"] = a.partition;
        cfg["constraints"] = a.constraints;
    } else if (a.method == "seed") {
        const Partition in = input_partition();
        result = consolidation::prototype_seed(data, in, a.seed_cfg, cons);
        if (cons) {
            penalty_before = consolidation::constraint_penalty(in.labels, *cons);
            penalty_after = consolidation::constraint_penalty(result.labels, *cons);
        }
        cfg["partition"] = a.partition;
        cfg["constraints"] = a.constraints.empty() ? Json(nullptr) : Json(a.constraints);
        cfg["budget"] = a.seed_cfg.budget;
        cfg["inertia"] = std::isinf(a.seed_cfg.inertia) ? Json("inf") : Json(a.seed_cfg.inertia);
        cfg["update_prototypes"] = a.seed_cfg.update_prototypes;
    } else if (a.method == "agglomerate") {
        const auto r = consolidation::centroid_agglomerate(data, input_partition(), {a.restarts, c.seed});
        result = r.partition;
        merge_map = report::to_json(r.merge_map);
        bic_curve = r.bic_curve;
        k_hat = r.m_star;
        cfg["partition"] = a.partition;
        cfg["restarts"] = a.restarts;
        j["variance_floor"] = r.variance_floor;
    } else if (a.method == "stability" || a.method == "adaptive") {
        const ClusterConfig base = a.flags.resolve(c.seed);
        consolidation::StabilityConfig stab = a.stab;
        stab.seed = c.seed;
        stab.threads = c.workers();
        cfg["base_config"] = report::to_json(base);
        cfg["runs"] = stab.runs;
        cfg["subsample"] = stab.subsample;
        if (a.method == "stability") {
            const auto r = consolidation::stability_merge(data, base, stab);
            result = r.partition;
            cfg["tau_merge"] = stab.tau_merge;
            k_hat = result.n_clusters;
            j["base_clusters"] = r.base.n_clusters;
        } else {
            const auto r = consolidation::adaptive_k(data, base, stab, a.taus);
            result = r.partition;
            cfg["taus"] = a.taus;
            k_hat = r.k_hat;
            k_dispersion = r.k_dispersion;
            Json sweep = Json::array();
            for (const auto& s : r.sweep)
                sweep.push_back({{"tau", s.tau}, {"clusters", s.clusters}, {"score", s.score ? Json(*s.score) : Json(nullptr)}});
            j["tau"] = r.tau;
            j["sweep"] = sweep;
        }
    } else {
        throw ConfigError("unknown consolidation method '" + a.method + "'");
    }
    write_partition(a.partition_out, result);
    j["config"] = cfg;
    j["merge_map"] = merge_map;
    j["penalty_before"] = penalty_before;
    j["penalty_after"] = penalty_after;
    j["bic_curve"] = bic_curve;
    j["k_hat"] = k_hat;
    j["k_dispersion"] = k_dispersion;
    j["metrics"] = evaluation(data, result, ds, c.workers());
    j["partition"] = report::to_json(result);
    emit(c, j);
    return 0;
}

struct FuseArgs {
    std::string text, vision, out, mode = "convex";
    double weight_floor = 0.0;
};

int run_fuse(const FuseArgs& a, const Common& c) {
    const embx::Dataset t = embx::read_dataset(a.text);
    const embx::Dataset g = embx::read_dataset(a.vision);
    const fusion::FusionConfig cfg{fusion::fusion_mode_from_string(a.mode), a.weight_floor};
    if (!t.is_vector_dataset() || !g.is_vector_dataset()) throw DataError("fuse needs projected (single-row) inputs");
    std::map<std::pair<std::string, std::int64_t>, std::size_t> vision_at;
    for (std::size_t i = 0; i < g.size(); ++i) vision_at[{g.items[i].doc_id, g.items[i].page_index}] = i;
    if (vision_at.size() != g.size()) throw DataError("vision dataset repeats a (doc_id, page_index) key");

    std::vector<Vector> fused;
    for (const auto& te : t.items) {
        const auto it = vision_at.find({te.doc_id, te.page_index});
        if (it == vision_at.end()) throw DataError("no vision vector for '" + te.doc_id + "'");
        fused.push_back(fusion::fuse(te.matrix.row(0).cast<double>().transpose(),
                                     g.items[it->second].matrix.row(0).cast<double>().transpose(), te.ocr_confidence,
                                     cfg));
    }
    if (fused.size() != g.size()) throw DataError("vision dataset has items missing from the text dataset");
    Matrix rows(static_cast<Eigen::Index>(fused.size()), fused.empty() ? 0 : fused[0].size());
    for (std::size_t i = 0; i < fused.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = fused[i].transpose();
    embx::Dataset out = embx::from_vectors(rows);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& src = t.items[i];
        out.items[i].doc_id = src.doc_id;
        out.items[i].page_index = src.page_index;
        out.items[i].label = src.label;
        out.items[i].ocr_confidence = src.ocr_confidence;
        out.items[i].language = src.language;
    }
    embx::write_dataset(out, a.out);
    Json j = header("fuse", c);
    j["config"] = {{"text", a.text},
                   {"vision", a.vision},
                   {"output", a.out},
                   {"mode", a.mode},
                   {"weight_floor", a.weight_floor},
                   {"missing_confidence_weight", 0.5}};
    j["item_count"] = out.size();
    j["dim"] = out.dim;
    emit(c, j);
    return 0;
}

struct AlignArgs {
    std::string in, out, ref = "identity";
    double ridge = 0.0;
};

int run_align(const AlignArgs& a, const Common& c) {
    const embx::Dataset ds = embx::read_dataset(a.in);
    const Matrix data = ds.vectors();
    std::vector<std::string> keys;
    for (const auto& te : ds.items) {
        if (!te.language) throw DataError("item '" + te.doc_id + "' has no language tag");
        keys.push_back(*te.language);
    }
    const auto stats = fusion::fit_group_stats(data, keys);
    fusion::GroupStats ref;
    if (a.ref == "identity") {
        ref = fusion::identity_stats(data.cols());
    } else {
        const auto it = std::find_if(stats.begin(), stats.end(), [&](const auto& s) { return s.key == a.ref; });
        if (it == stats.end()) throw DataError("reference language '" + a.ref + "' not present");
        ref = *it;
    }
    const std::optional<double> ridge = a.ridge > 0.0 ? std::optional<double>(a.ridge) : std::nullopt;
    Matrix aligned = data;
    for (const auto& s : stats) {
        std::vector<Eigen::Index> rows;
        for (std::size_t i = 0; i < keys.size(); ++i)
            if (keys[i] == s.key) rows.push_back(static_cast<Eigen::Index>(i));
        aligned(rows, Eigen::all) = fusion::coral_align(data(rows, Eigen::all), s, ref, ridge);
    }
    embx::Dataset out = ds;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.items[i].matrix = aligned.row(static_cast<Eigen::Index>(i)).cast<float>();
    embx::write_dataset(out, a.out);

    Json j = header("align", c);
    j["config"] = {{"input", a.in},
                   {"output", a.out},
                   {"reference", a.ref},
                   {"ridge", ridge ? Json(*ridge) : Json("per-covariance default")}};
    Json groups = Json::array();
    for (const auto& s : stats) groups.push_back(report::to_json(s));
    j["groups"] = groups;
    j["reference_stats"] = report::to_json(ref);
    emit(c, j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Document embedding clustering pipeline"};
    app.require_subcommand(1);
    Common common;

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a labelled Gaussian-blob EMBX dataset");
    synth->add_option("--out", synth_args.out, "Output EMBX directory")->required();
    synth->add_option("--clusters", synth_args.spec.n_clusters)->capture_default_str();
    synth->add_option("--per-cluster", synth_args.spec.points_per_cluster)->capture_default_str();
    synth->add_option("--dim", synth_args.spec.dim)->capture_default_str();
    synth->add_option("--separation", synth_args.spec.separation, "Centroid radius in std units")->capture_default_str();
    synth->add_option("--noise-frac", synth_args.spec.noise_frac, "Share of uniform outliers")->capture_default_str();
    synth->add_option("--shift", synth_args.shift, "none | covariate")->capture_default_str();
    synth->add_option("--shift-magnitude", synth_args.spec.shift_magnitude)->capture_default_str();
    add_common(synth, common);

    ProjectArgs project_args;
    auto* project = app.add_subcommand("project", "Pool token matrices into document vectors");
    project->add_option("--in", project_args.in)->required();
    project->add_option("--out", project_args.out)->required();
    project->add_option("--strategy", project_args.strategy, "mean | hybrid | cls | pca")->capture_default_str();
    project->add_option("--kernel", project_args.kernel, "Hybrid max-pool window (0 = largest divisor <= 8)");
    project->add_option("--pca-dim", project_args.pca_dim, "Target dimension for pca");
    project->add_option("--pca-base", project_args.pca_base, "Pooling applied before pca")->capture_default_str();
    add_common(project, common);

    ClusterArgs cluster_args;
    auto* cluster = app.add_subcommand("cluster", "Cluster document vectors");
    cluster->add_option("--in", cluster_args.in)->required();
    cluster->add_option("--partition-out", cluster_args.partition_out);
    cluster_args.flags.add(cluster);
    add_common(cluster, common);

    TuneArgs tune_args;
    auto* tune = app.add_subcommand("tune", "Silhouette grid search (oracle k for k-means)");
    tune->add_option("--in", tune_args.in)->required();
    tune->add_option("--grid", tune_args.grid, "JSON {\"axes\": {name: [values]}} replacing the default grid");
    tune->add_option("--trials-out", tune_args.trials_out, "JSON-lines trial log");
    tune->add_option("--true-k", tune_args.true_k, "Oracle cluster count (k-means, BIRCH global step)");
    tune->add_option("--partition-out", tune_args.partition_out);
    tune_args.flags.add(tune);
    add_common(tune, common);

    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "Score a partition");
    evaluate->add_option("--in", eval_args.in)->required();
    evaluate->add_option("--partition", eval_args.partition)->required();
    evaluate->add_option("--csv", eval_args.csv, "Append a table row here");
    evaluate->add_option("--model", eval_args.model, "Model name for the table row")->capture_default_str();
    add_common(evaluate, common);

    AggregateArgs agg_args;
    auto* aggregate = app.add_subcommand("aggregate-pages", "Pool page vectors into one vector per document");
    aggregate->add_option("--in", agg_args.in)->required();
    aggregate->add_option("--out", agg_args.out)->required();
    aggregate->add_option("--lambda-seq", agg_args.cfg.lambda_seq)->capture_default_str();
    aggregate->add_option("--lambda-sim", agg_args.cfg.lambda_sim)->capture_default_str();
    aggregate->add_option("--sem-k", agg_args.cfg.sem_k)->capture_default_str();
    aggregate->add_option("--steps", agg_args.cfg.smoothing_steps, "1 or 2")->capture_default_str();
    aggregate->add_option("--temperature", agg_args.cfg.temperature)->capture_default_str();
    add_common(aggregate, common);

    ConsolidateArgs cons_args;
    auto* consolidate = app.add_subcommand("consolidate", "Merge or reseed clusters");
    consolidate->add_option("--in", cons_args.in)->required();
    consolidate->add_option("--method", cons_args.method, "constraints | seed | agglomerate | stability | adaptive")
        ->capture_default_str();
    consolidate->add_option("--partition", cons_args.partition, "Input partition JSON");
    consolidate->add_option("--partition-out", cons_args.partition_out);
    consolidate->add_option("--constraints", cons_args.constraints, "Constraint JSON");
    consolidate->add_option("--budget", cons_args.seed_cfg.budget)->capture_default_str();
    consolidate->add_option("--inertia", cons_args.seed_cfg.inertia, "Penalty for leaving the own cluster's seed")
        ->capture_default_str();
    consolidate->add_flag("--update-prototypes", cons_args.seed_cfg.update_prototypes);
    consolidate->add_option("--restarts", cons_args.restarts, "EM restarts per m")->capture_default_str();
    consolidate->add_option("--runs", cons_args.stab.runs)->capture_default_str();
    consolidate->add_option("--subsample", cons_args.stab.subsample)->capture_default_str();
    consolidate->add_option("--tau", cons_args.stab.tau_merge)->capture_default_str();
    consolidate->add_option("--taus", cons_args.taus, "Sweep for adaptive")->delimiter(',');
    cons_args.flags.add(consolidate);
    add_common(consolidate, common);

    FuseArgs fuse_args;
    auto* fuse = app.add_subcommand("fuse", "Confidence-weighted text/vision fusion");
    fuse->add_option("--text", fuse_args.text)->required();
    fuse->add_option("--vision", fuse_args.vision)->required();
    fuse->add_option("--out", fuse_args.out)->required();
    fuse->add_option("--mode", fuse_args.mode, "convex | concat")->capture_default_str();
    fuse->add_option("--weight-floor", fuse_args.weight_floor)->capture_default_str();
    add_common(fuse, common);

    AlignArgs align_args;
    auto* align = app.add_subcommand("align", "Per-language CORAL alignment");
    align->add_option("--in", align_args.in)->required();
    align->add_option("--out", align_args.out)->required();
    align->add_option("--ref", align_args.ref, "Reference language, or identity to whiten")->capture_default_str();
    align->add_option("--ridge", align_args.ridge, "Explicit ridge (0 = 1e-3 trace/d per covariance)");
    add_common(align, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*synth) return run_synth(synth_args, common);
        if (*project) return run_project(project_args, common);
        if (*cluster) return run_cluster(cluster_args, common);
        if (*tune) return run_tune(tune_args, common);
        if (*evaluate) return run_evaluate(eval_args, common);
        if (*aggregate) return run_aggregate(agg_args, common);
        if (*consolidate) return run_consolidate(cons_args, common);
        if (*fuse) return run_fuse(fuse_args, common);
        if (*align) return run_align(align_args, common);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
