// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include "oracles.hpp"

#include "docclust/birch.hpp"
#include "docclust/consolidation.hpp"
#include "docclust/dbscan.hpp"
#include "docclust/fusion.hpp"
#include "docclust/hdbscan.hpp"
#include "docclust/kmeans.hpp"
#include "docclust/metrics.hpp"
#include "docclust/page_graph.hpp"
#include "docclust/projection.hpp"
#include "docclust/rng.hpp"
#include "docclust/synthgen.hpp"
#include "docclust/tuning.hpp"

#include <chrono>
#include <cstdio>
#include <set>
#include <string>

using namespace docclust;

namespace {

int failures = 0;

void line(const char* name, bool ok, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix random_blobs(Rng& rng, int n, int d, int centers, double spread) {
    Matrix c(centers, d), x(n, d);
    for (int k = 0; k < centers; ++k)
        for (int j = 0; j < d; ++j) c(k, j) = rng.uniform(-10.0, 10.0);
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(centers)));
        for (int j = 0; j < d; ++j) x(i, j) = c(k, j) + spread * rng.normal();
    }
    return x;
}

void golden_graph() {
    const auto t0 = std::chrono::steady_clock::now();
    Matrix sim = Matrix::Constant(5, 5, 0.1);
    sim.diagonal().setOnes();
    auto set = [&](int i, int j, double v) { sim(i, j) = sim(j, i) = v; };
    set(0, 2, 0.8);
    set(1, 3, 0.6);
    set(2, 4, 0.7);
    const auto g = pagegraph::build_page_graph_from_similarity(sim, {1.0, 0.5, 1, 1, 0.1});
    Matrix a(5, 5);
    a << 1, 1, 0.4, 0, 0, 1, 1, 1, 0.3, 0, 0.4, 1, 1, 1, 0.35, 0, 0.3, 1, 1, 1, 0, 0, 0.35, 1, 1;
    Vector d(5);
    d << 2.4, 3.3, 3.75, 3.3, 2.35;
    Matrix at(5, 5);
    at << 0.416667, 0.355335, 0.133333, 0, 0, 0.355335, 0.303030, 0.284268, 0.090909, 0, 0.133333, 0.284268,
        0.266667, 0.284268, 0.117901, 0, 0.090909, 0.284268, 0.303030, 0.359095, 0, 0, 0.117901, 0.359095, 0.425532;
    const double ea = (g.adjacency - a).cwiseAbs().maxCoeff();
    const double ed = (g.degrees - d).cwiseAbs().maxCoeff();
    const double et = (g.normalized - at).cwiseAbs().maxCoeff();
    const double secs = seconds_since(t0);
    line("golden-page-graph", ea <= 1e-12 && ed <= 1e-12 && et <= 1e-6 && secs < 1.0,
         fmt("max|A err| %.2e, max|D err| %.2e, max|Atilde err| %.2e, %.3f s", ea, ed, et, secs));
}

void metric_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(101);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const int n = 2 + static_cast<int>(rng.index(299));
        const int kp = 1 + static_cast<int>(rng.index(8)), kt = 1 + static_cast<int>(rng.index(8));
        std::vector<int> p(static_cast<std::size_t>(n)), q(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            p[static_cast<std::size_t>(i)] = static_cast<int>(rng.index(static_cast<std::uint64_t>(kp))) - (t % 3 == 0 ? 1 : 0);
            q[static_cast<std::size_t>(i)] = static_cast<int>(rng.index(static_cast<std::uint64_t>(kt)));
        }
        const auto hc = metrics::homogeneity_completeness(p, q);
        worst = std::max({worst, std::abs(metrics::adjusted_rand(p, q) - oracle::ari_pairs(p, q)),
                          std::abs(metrics::normalized_mi(p, q) - oracle::nmi(p, q)),
                          std::abs(hc.homogeneity - oracle::homogeneity(p, q)),
                          std::abs(hc.completeness - oracle::completeness(p, q))});
    }
    const double secs = seconds_since(t0);
    line("metric-oracle", worst <= 1e-9 && secs < 10.0, fmt("200 pairs, max abs diff %.2e, %.2f s", worst, secs));
}

void dbscan_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(202);
    int matched = 0;
    for (int t = 0; t < 100; ++t) {
        const int n = 10 + static_cast<int>(rng.index(191));
        const int d = 2 + static_cast<int>(rng.index(4));
        const Matrix x = random_blobs(rng, n, d, 1 + static_cast<int>(rng.index(5)), rng.uniform(0.5, 3.0));
        const double eps = rng.uniform(0.5, 4.0);
        const int min_pts = 2 + static_cast<int>(rng.index(8));
        if (oracle::same_grouping(dbscan(x, {eps, min_pts}).labels, oracle::dbscan(x, eps, min_pts))) ++matched;
    }
    const double secs = seconds_since(t0);
    line("dbscan-equivalence", matched == 100 && secs < 30.0, fmt("%.0f/100 instances match, %.2f s", matched, secs));
}

void mst_check() {
    Rng rng(303);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const int n = 5 + static_cast<int>(rng.index(96));
        const Matrix x = random_blobs(rng, n, 2 + static_cast<int>(rng.index(4)), 3, 2.0);
        const int ms = 1 + static_cast<int>(rng.index(std::min<std::uint64_t>(10, static_cast<std::uint64_t>(n))));
        double w = 0.0;
        const auto edges = mutual_reachability_mst(x, ms);
        for (const auto& e : edges) w += e.weight;
        const double ref = oracle::mst_weight(x, ms);
        worst = std::max(worst, std::abs(w - ref) / std::max(1.0, std::abs(ref)));
        if (static_cast<int>(edges.size()) != n - 1) worst = INFINITY;
    }
    line("hdbscan-mst", worst <= 1e-9, fmt("50 instances, max relative weight diff %.2e", worst));
}

void hdbscan_knn_contract() {
    Rng rng(404);
    int checked = 0, broken = 0;
    for (int t = 0; t < 60; ++t) {
        const int n = 30 + static_cast<int>(rng.index(171));
        const Matrix x = random_blobs(rng, n, 2 + static_cast<int>(rng.index(3)), 2 + static_cast<int>(rng.index(4)),
                                      rng.uniform(0.5, 2.5));
        const HdbscanConfig cfg{2 + static_cast<int>(rng.index(14)), 1 + static_cast<int>(rng.index(10)),
                                1 + static_cast<int>(rng.index(7))};
        const Partition base = hdbscan(x, cfg);
        if (base.n_clusters == 0) continue;
        ++checked;
        const Partition hy = hdbscan_knn(x, cfg);
        bool ok = hy.noise_count() == 0 && hy.n_clusters == base.n_clusters;
        for (std::size_t i = 0; i < base.size(); ++i)
            if (base.labels[i] != kNoise && base.labels[i] != hy.labels[i]) ok = false;
        if (!ok) ++broken;
    }
    line("hdbscan-knn-contract", broken == 0 && checked > 0,
         fmt("%.0f instances with clusters, %.0f violations", checked, broken));
}

void kmeans_contracts() {
    Rng rng(505);
    int bad_mono = 0, bad_k = 0, bad_det = 0;
    for (int t = 0; t < 100; ++t) {
        const int n = 20 + static_cast<int>(rng.index(181));
        const Matrix x = random_blobs(rng, n, 2 + static_cast<int>(rng.index(6)), 1 + static_cast<int>(rng.index(6)), 2.0);
        const KMeansConfig cfg{1 + static_cast<int>(rng.index(10)), 300, rng.next_u64(), 0.0};
        const auto r = kmeans_fit(x, cfg);
        for (std::size_t i = 1; i < r.inertia_history.size(); ++i)
            if (r.inertia_history[i] > r.inertia_history[i - 1]) {
                ++bad_mono;
                break;
            }
        std::set<int> used(r.partition.labels.begin(), r.partition.labels.end());
        if (r.partition.n_clusters != cfg.k || static_cast<int>(used.size()) != cfg.k || used.count(kNoise)) ++bad_k;
        const auto again = kmeans_fit(x, cfg);
        if (!(again.partition == r.partition) || again.inertia_history != r.inertia_history) ++bad_det;
    }
    line("kmeans-contracts", bad_mono + bad_k + bad_det == 0,
         fmt("100 runs: %.0f non-monotone, %.0f wrong k, %.0f non-deterministic", bad_mono, bad_k, bad_det));
}

void cf_additivity() {
    Rng rng(606);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const int d = 1 + static_cast<int>(rng.index(16));
        const int count = 2 + static_cast<int>(rng.index(40));
        Matrix pts(count, d);
        for (int i = 0; i < count; ++i)
            for (int j = 0; j < d; ++j) pts(i, j) = rng.uniform(-50.0, 50.0);
        // Random chain: merge points into running groups, then merge the groups.
        std::vector<CFEntry> groups;
        for (int i = 0; i < count; ++i) {
            const CFEntry p = CFEntry::of_point(pts.row(i).transpose());
            if (groups.empty() || rng.uniform() < 0.3)
                groups.push_back(p);
            else
                groups.back() = cf_merge(groups.back(), p);
        }
        CFEntry total = groups.front();
        for (std::size_t g = 1; g < groups.size(); ++g) total = cf_merge(total, groups[g]);
        const auto ref = oracle::direct_cf(pts);
        const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
        worst = std::max({worst, rel(total.n, ref.n), rel(total.ss, ref.ss),
                          (total.ls - ref.ls).cwiseAbs().maxCoeff() / std::max(1.0, ref.ls.cwiseAbs().maxCoeff())});
    }
    line("birch-cf-additivity", worst <= 1e-9, fmt("200 chains, max relative diff %.2e", worst));
}

void synthetic_separation() {
    const auto t0 = std::chrono::steady_clock::now();
    synth::BlobSpec spec;  // 4 x 50, dim 32, separation 20
    spec.seed = 0;
    const auto ds = synth::generate(spec);
    const Matrix x = ds.vectors();
    const auto truth = *ds.labels();

    const double km = metrics::adjusted_rand(tuning::oracle_partition(x, Algorithm::kmeans, 4).labels, truth);
    const auto db_grid = tuning::default_grid(Algorithm::dbscan, x);
    const auto db = tuning::grid_search(x, db_grid);
    const Partition db_part = run_clustering(x, db.best_config);
    const double db_ari = metrics::adjusted_rand(db_part.labels, truth);
    double grid_max = -INFINITY;
    for (const auto& t : db.trials) {
        const double s = oracle::silhouette(x, run_clustering(x, t.config).labels);
        if (!std::isnan(s)) grid_max = std::max(grid_max, s);
    }
    const double sil_gap = std::abs(db.best_score - grid_max);
    const auto hd = tuning::grid_search(x, tuning::default_grid(Algorithm::hdbscan_knn, x));
    const double hd_ari = metrics::adjusted_rand(run_clustering(x, hd.best_config).labels, truth);
    const auto bi = tuning::grid_search(x, tuning::default_grid(Algorithm::birch, x));
    const double bi_ari = metrics::adjusted_rand(tuning::oracle_partition(x, Algorithm::birch, 4, bi).labels, truth);
    const double secs = seconds_since(t0);

    char buf[400];
    std::snprintf(buf, sizeof buf,
                  "ARI kmeans %.6f, dbscan %.6f (pc %d, noise %.1f%%), hdbscan-knn %.6f, birch %.6f; "
                  "dbscan silhouette gap to grid max %.2e; %.1f s",
                  km, db_ari, db_part.n_clusters, 100.0 * static_cast<double>(db_part.noise_count()) / x.rows(), hd_ari,
                  bi_ari, sil_gap, secs);
    line("synthetic-separation", km == 1.0 && db_ari == 1.0 && hd_ari == 1.0 && bi_ari == 1.0 && sil_gap <= 1e-9 &&
                                     secs < 60.0,
         buf);
}

void consolidation_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    synth::BlobSpec spec;
    spec.seed = 1;
    const auto ds = synth::generate(spec);
    const Matrix x = ds.vectors();
    const auto truth = *ds.labels();

    ClusterConfig over;
    over.algorithm = Algorithm::kmeans;
    over.kmeans.k = 8;
    over.kmeans.seed = 3;
    const Partition eight = run_clustering(x, over);
    const auto ag = consolidation::centroid_agglomerate(x, eight, {5, 11});
    const double ag_ari = metrics::adjusted_rand(ag.partition.labels, truth);

    consolidation::StabilityConfig st;
    st.seed = 12;
    const auto sm = consolidation::stability_merge(x, over, st);
    const double sm_ari = metrics::adjusted_rand(sm.partition.labels, truth);
    const auto ak = consolidation::adaptive_k(x, over, st);
    const double ak_ari = metrics::adjusted_rand(ak.partition.labels, truth);
    const double secs = seconds_since(t0);

    char buf[400];
    std::snprintf(buf, sizeof buf,
                  "over-segmented to %d (ARI %.3f); agglomerate m*=%d ARI %.6f; stability_merge %d clusters ARI %.6f; "
                  "adaptive_k k_hat=%d (dispersion %.2f, tau %.1f) ARI %.6f; %.1f s",
                  eight.n_clusters, metrics::adjusted_rand(eight.labels, truth), ag.m_star, ag_ari,
                  sm.partition.n_clusters, sm_ari, ak.k_hat, ak.k_dispersion, ak.tau, ak_ari, secs);
    line("consolidation-recovery", eight.n_clusters == 8 && ag.m_star == 4 && ag_ari == 1.0 && sm_ari == 1.0 &&
                                       ak.k_hat == 4 && ak_ari == 1.0 && secs < 120.0,
         buf);
}

void coral_contract() {
    Rng rng(808);
    const int n = 5000, d = 8;
    Matrix mix(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) mix(i, j) = rng.normal();
    Matrix a(n, d), b(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) {
            a(i, j) = rng.normal();
            b(i, j) = rng.normal();
        }
    const Matrix ref = (a * mix).rowwise() + Eigen::RowVectorXd::LinSpaced(d, -2.0, 2.0);
    const auto r = fusion::fit_stats(ref, "ref");
    auto check = [&](const Matrix& src, std::optional<double> ridge, double& mean_err, double& cov_err) {
        const auto o = fusion::fit_stats(fusion::coral_align(src, fusion::fit_stats(src), r, ridge));
        mean_err = (o.mean - r.mean).cwiseAbs().maxCoeff();
        cov_err = (o.covariance - r.covariance).norm() / r.covariance.norm();
    };
    // Same shape as the reference, shifted and scaled by 3; default ridge.
    double m1, c1, m2, c2;
    check(((b * mix) * 3.0).rowwise() + Eigen::RowVectorXd::Constant(d, 7.0), std::nullopt, m1, c1);
    // Per-axis rescale changes the covariance shape; the default ridge would
    // cost O(ridge / smallest eigenvalue), so a small explicit ridge is used.
    const Vector scale = Vector::LinSpaced(d, 0.5, 4.0);
    check(((b * mix) * scale.asDiagonal()).rowwise() + Eigen::RowVectorXd::Constant(d, 7.0), 1e-6, m2, c2);
    line("coral-contract", m1 <= 1e-6 && c1 <= 1e-3 && m2 <= 1e-6 && c2 <= 1e-3,
         fmt("n=5000 d=8; scalar rescale, default ridge: mean err %.2e, rel cov err %.2e; ", m1, c1) +
             fmt("per-axis rescale, ridge 1e-6: mean err %.2e, rel cov err %.2e", m2, c2));
}

void projection_contract() {
    int checked = 0, bad = 0;
    for (int dim = 1; dim <= 96; ++dim)
        for (int k = 1; k <= dim; ++k) {
            if (dim % k) continue;
            embx::TokenEmbeddings te;
            te.matrix = RowMatrixF::Ones(3, dim);
            te.text_rows = 1;
            ++checked;
            if (projection::hybrid_pool(te, {k}).vector.size() != dim + dim / k) ++bad;
        }
    // Hand examples: 2 text rows + 2 image rows, D = 4, k = 2.
    embx::TokenEmbeddings te;
    te.matrix.resize(4, 4);
    te.matrix << 1, 2, 3, 4, 3, 2, 1, 0, 5, -1, 0, 2, -3, 7, 6, 1;
    te.text_rows = 2;
    Vector mean(4), cls(4), hyb(6);
    mean << 1.5, 2.5, 2.5, 1.75;
    cls << 1, 2, 3, 4;
    // text mean (2, 2, 2, 2); image window maxima (5, 2) and (7, 6), averaged.
    hyb << 2, 2, 2, 2, 6, 4;
    const bool hand = projection::mean_pool(te).vector == mean && projection::cls_pool(te).vector == cls &&
                      projection::hybrid_pool(te, {2}).vector == hyb;
    line("projection-contract", bad == 0 && hand,
         fmt("%.0f (D, k) pairs checked, %.0f wrong dims; hand examples %s", checked, bad) + (hand ? "exact" : "MISMATCH"));
}

void covariate_shift() {
    double clean_db = 0, shift_db = 0, clean_hd = 0, shift_hd = 0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        synth::BlobSpec spec;
        spec.seed = 40 + static_cast<std::uint64_t>(s);
        spec.separation = 8.0;
        const auto clean = synth::generate(spec);
        spec.shift = synth::Shift::covariate;
        spec.shift_magnitude = 8.0;
        const auto shifted = synth::generate(spec);
        for (int pass = 0; pass < 2; ++pass) {
            const auto& ds = pass == 0 ? clean : shifted;
            const Matrix x = ds.vectors();
            const auto truth = *ds.labels();
            const auto db = tuning::grid_search(x, tuning::default_grid(Algorithm::dbscan, x));
            const auto hd = tuning::grid_search(x, tuning::default_grid(Algorithm::hdbscan_knn, x));
            const double a_db = metrics::adjusted_rand(run_clustering(x, db.best_config).labels, truth);
            const double a_hd = metrics::adjusted_rand(run_clustering(x, hd.best_config).labels, truth);
            (pass == 0 ? clean_db : shift_db) += a_db / seeds;
            (pass == 0 ? clean_hd : shift_hd) += a_hd / seeds;
        }
    }
    const double drop_db = clean_db - shift_db, drop_hd = clean_hd - shift_hd;
    line("covariate-shift-degradation", (1.0 - shift_db) > (1.0 - clean_db) && (1.0 - shift_hd) > (1.0 - clean_hd),
         fmt("mean ARI dbscan %.3f -> %.3f, hdbscan-knn %.3f -> %.3f", clean_db, shift_db, clean_hd, shift_hd) +
             fmt(" (drops %.3f, %.3f)", drop_db, drop_hd));
}

}  // namespace

int main() {
    golden_graph();
    metric_oracle();
    dbscan_equivalence();
    mst_check();
    hdbscan_knn_contract();
    kmeans_contracts();
    cf_additivity();
    synthetic_separation();
    consolidation_recovery();
    coral_contract();
    projection_contract();
    covariate_shift();
    std::printf("%d failing\n", failures);
    return failures;
}
