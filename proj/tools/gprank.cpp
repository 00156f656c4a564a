// gprank: command-line surface over the diffusion library. Every subcommand
// writes its tables as CSV plus a manifest.json run record; reruns with the
// same configuration produce byte-identical CSVs.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gprank/analysis.hpp"
#include "gprank/detect.hpp"
#include "gprank/diffusion.hpp"
#include "gprank/errors.hpp"
#include "gprank/format.hpp"
#include "gprank/graph.hpp"
#include "gprank/graph_io.hpp"
#include "gprank/parallel.hpp"
#include "gprank/randgraph.hpp"
#include "gprank/rng.hpp"
#include "gprank/spectral.hpp"
#include "gprank/svgplot.hpp"
#include "gprank/version.hpp"
#include "gprank/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string iso_utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir.empty() ? "." : dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw gprank::io_error("cannot create output directory: " + p.string());
    return p;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw gprank::io_error("cannot write " + path.string());
    return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw gprank::io_error("write failed: " + path.string());
}

// Run record written next to the outputs; the timestamp is the only field
// that changes across identical reruns.
void write_manifest(const fs::path& dir, const std::string& command, std::uint64_t seed,
                    const json& config, const std::vector<std::string>& outputs) {
    json m;
    m["tool"] = "gprank";
    m["version"] = gprank::kVersion;
    m["command"] = command;
    m["timestamp_utc"] = iso_utc_now();
    m["seed"] = seed;
    m["config"] = config;
    m["outputs"] = outputs;
    const fs::path path = dir / "manifest.json";
    auto out = open_output(path);
    out << m.dump(2) << '\n';
    finish_output(out, path);
}

// Shared options: RNG seed, worker count, output directory.
struct CommonOpts {
    std::uint64_t seed = 0;
    int threads = gprank::default_thread_count();
    std::string out_dir = ".";

    void add(CLI::App* cmd, bool with_threads = true) {
        cmd->add_option("--seed", seed, "Master RNG seed")->capture_default_str();
        if (with_threads)
            cmd->add_option("--threads", threads,
                            "Worker thread count (default: GPRANK_THREADS or hardware)")
                ->capture_default_str();
        cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    }

    json echo() const { return json{{"seed", seed}, {"threads", threads}, {"out", out_dir}}; }
};

// Block-model parameters; all five travel together.
struct SpecOpts {
    gprank::SbmSpec spec;
    CLI::Option* opts[5] = {nullptr, nullptr, nullptr, nullptr, nullptr};

    void add(CLI::App* cmd) {
        opts[0] = cmd->add_option("--n1", spec.n1, "Size of block C1 (the recovery target)");
        opts[1] = cmd->add_option("--n0", spec.n0, "Size of block C0");
        opts[2] = cmd->add_option("--p1", spec.p1, "Edge probability inside C1");
        opts[3] = cmd->add_option("--p0", spec.p0, "Edge probability inside C0");
        opts[4] = cmd->add_option("--q", spec.q, "Edge probability across blocks");
    }

    int given() const {
        int count = 0;
        for (const auto* o : opts) count += o->count() > 0 ? 1 : 0;
        return count;
    }

    bool complete() const { return given() == 5; }

    void require_complete() const {
        if (!complete())
            throw gprank::config_error("--n1 --n0 --p1 --p0 --q are required together");
        spec.validate();
    }

    json echo() const {
        return json{{"n1", spec.n1}, {"n0", spec.n0}, {"p1", spec.p1},
                    {"p0", spec.p0}, {"q", spec.q}};
    }
};

// Exactly one graph source: a block-model spec or an edge-list file.
struct SourceOpts {
    SpecOpts spec;
    std::string graph_path;
    std::string communities_path;
    CLI::Option* o_graph = nullptr;
    CLI::Option* o_comm = nullptr;

    void add(CLI::App* cmd, bool with_communities) {
        spec.add(cmd);
        o_graph = cmd->add_option("--graph", graph_path, "Edge-list file to load");
        if (with_communities)
            o_comm = cmd->add_option("--communities", communities_path,
                                     "Community file (one community per line)");
    }

    bool generated() const {
        const bool loaded = o_graph->count() > 0;
        if (loaded && spec.given() > 0)
            throw gprank::config_error("choose one graph source: --graph or --n1..--q");
        if (!loaded) spec.require_complete();
        return !loaded;
    }

    json echo() const {
        if (o_graph->count() > 0) {
            json j{{"graph", graph_path}};
            if (o_comm != nullptr && o_comm->count() > 0) j["communities"] = communities_path;
            return j;
        }
        return spec.echo();
    }
};

struct LoadedGraph {
    gprank::Graph g;
    gprank::VertexMap vmap;
    gprank::CommunitySet communities;
};

LoadedGraph load_source(const SourceOpts& src, bool need_communities) {
    LoadedGraph lg;
    auto [g, vmap] = gprank::load_edge_list(src.graph_path);
    lg.g = std::move(g);
    lg.vmap = std::move(vmap);
    if (src.o_comm != nullptr && src.o_comm->count() > 0) {
        auto [cs, stats] = gprank::load_communities(src.communities_path, lg.vmap);
        lg.communities = std::move(cs);
        if (stats.dropped_members > 0 || stats.skipped_lines > 0)
            std::cerr << "communities: dropped " << stats.dropped_members
                      << " unknown members, skipped " << stats.skipped_lines
                      << " empty lines\n";
    } else if (need_communities) {
        throw gprank::config_error("--communities is required with --graph here");
    }
    return lg;
}

// Detection defaults differ by source: synthetic runs seed from 1 vertex,
// real-network runs from 20, matching the experiment protocol.
std::size_t resolve_seed_count(std::size_t requested, bool generated) {
    if (requested > 0) return requested;
    return generated ? 1 : 20;
}

void write_recall_summary_csv(const fs::path& path,
                              const std::vector<gprank::DetectionResult>& cells,
                              std::size_t trials) {
    auto out = open_output(path);
    out << "scheme,K,Q,trials,mean_recall,std_recall\n";
    for (const auto& cell : cells)
        out << cell.scheme_label << ',' << cell.K << ',' << cell.Q << ',' << trials << ','
            << gprank::fmt_g(cell.mean_recall) << ',' << gprank::fmt_g(cell.std_recall)
            << '\n';
    finish_output(out, path);
}

void write_recall_trials_csv(const fs::path& path, const gprank::DetectionResult& cell) {
    auto out = open_output(path);
    out << "scheme,trial,recall\n";
    for (std::size_t t = 0; t < cell.recalls.size(); ++t)
        out << cell.scheme_label << ',' << t << ',' << gprank::fmt_g(cell.recalls[t]) << '\n';
    finish_output(out, path);
}

// ---------------------------------------------------------------------------
// gen-sbm

struct GenSbmOpts {
    CommonOpts common;
    SpecOpts spec;
    std::uint64_t trial = 0;
};

void run_gen_sbm(const GenSbmOpts& o) {
    o.spec.require_complete();
    const fs::path dir = ensure_out_dir(o.common.out_dir);
    const auto sample =
        gprank::sample_sbm(o.spec.spec, gprank::RngConfig{o.common.seed}, o.trial);
    const auto vmap = gprank::VertexMap::identity(sample.g.n());
    gprank::save_edge_list((dir / "graph.edges").string(), sample.g, vmap);
    gprank::save_communities((dir / "communities.txt").string(), sample.communities, vmap);
    json config = o.spec.echo();
    config.update(o.common.echo());
    config["trial"] = o.trial;
    write_manifest(dir, "gen-sbm", o.common.seed, config, {"graph.edges", "communities.txt"});
    std::cout << "graph.edges: " << sample.g.n() << " vertices, " << sample.g.edge_count()
              << " edges\ncommunities.txt: " << sample.communities.size()
              << " communities\n";
}

// ---------------------------------------------------------------------------
// lp

struct LpOpts {
    CommonOpts common;
    SourceOpts source;
    int K = 10;
    std::uint64_t trial = 0;
    std::size_t seed_count = 1;
    std::size_t community_index = 0;
    std::string seeds_path;
    std::vector<std::uint64_t> seed_vertices;
    CLI::Option* o_seeds = nullptr;
    CLI::Option* o_seed_vertices = nullptr;
};

void run_lp(const LpOpts& o) {
    const fs::path dir = ensure_out_dir(o.common.out_dir);
    const bool generated = o.source.generated();
    gprank::Graph g;
    gprank::VertexMap vmap;
    std::vector<gprank::Vertex> seeds;

    if (generated) {
        auto stream = gprank::trial_stream(gprank::RngConfig{o.common.seed}, o.trial);
        auto sample = gprank::sample_sbm_no_isolated(o.source.spec.spec, stream);
        seeds = gprank::sample_seeds(sample.communities.communities.front(), o.seed_count,
                                     stream);
        g = std::move(sample.g);
        vmap = gprank::VertexMap::identity(g.n());
    } else {
        auto lg = load_source(o.source, false);
        g = std::move(lg.g);
        vmap = std::move(lg.vmap);
        if (o.o_seeds->count() > 0) {
            seeds = gprank::load_seed_list(o.seeds_path, vmap);
        } else if (o.o_seed_vertices->count() > 0) {
            for (std::uint64_t id : o.seed_vertices) {
                const auto it = vmap.to_dense.find(id);
                if (it == vmap.to_dense.end())
                    throw gprank::config_error("--seed-vertices: unknown vertex id " +
                                               std::to_string(id));
                seeds.push_back(it->second);
            }
        } else if (!lg.communities.communities.empty()) {
            if (o.community_index >= lg.communities.size())
                throw gprank::config_error("--community-index out of range");
            seeds = gprank::sample_seeds(lg.communities.communities[o.community_index],
                                         o.seed_count,
                                         gprank::RngConfig{o.common.seed}, o.trial);
        } else {
            throw gprank::config_error(
                "lp: provide --seeds, --seed-vertices, or --communities");
        }
        std::sort(seeds.begin(), seeds.end());
        seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
        if (seeds.empty()) throw gprank::config_error("lp: empty seed set");
    }

    std::vector<double> x0(g.n(), 0.0);
    for (gprank::Vertex s : seeds) x0[s] = 1.0 / static_cast<double>(seeds.size());
    const auto lps = gprank::landing_probabilities(g, x0, o.K, true);

    const fs::path path = dir / "lp.csv";
    auto out = open_output(path);
    out << "k,vertex,x,z\n";
    for (int k = 0; k <= o.K; ++k) {
        const auto i = static_cast<std::size_t>(k);
        for (gprank::Vertex v = 0; v < g.n(); ++v)
            out << k << ',' << vmap.to_original[v] << ',' << gprank::fmt_g(lps.x[i][v])
                << ',' << gprank::fmt_g(lps.z[i][v]) << '\n';
    }
    finish_output(out, path);

    json config = o.source.echo();
    config.update(o.common.echo());
    config["K"] = o.K;
    config["trial"] = o.trial;
    config["seed_count"] = o.seed_count;
    json seed_ids = json::array();
    for (gprank::Vertex s : seeds) seed_ids.push_back(vmap.to_original[s]);
    config["seeds"] = seed_ids;
    write_manifest(dir, "lp", o.common.seed, config, {"lp.csv"});
    std::cout << "lp.csv: " << g.n() << " vertices, k = 0.." << o.K << ", "
              << seeds.size() << " seeds\n";
}

// ---------------------------------------------------------------------------
// detect / sweep

struct DetectOpts {
    CommonOpts common;
    SourceOpts source;
    std::string scheme;
    int K = 50;
    std::size_t Q = 0;
    std::size_t trials = 100;
    std::size_t seed_count = 0;
    std::size_t community_index = 0;
    bool raw = false;
    bool no_include_seeds = false;
};

gprank::DetectionConfig make_detection_config(const CommonOpts& common, std::size_t Q,
                                              std::size_t seed_count, std::size_t trials,
                                              bool raw, bool no_include_seeds,
                                              bool generated) {
    gprank::DetectionConfig cfg;
    cfg.Q = Q;
    cfg.seed_count = resolve_seed_count(seed_count, generated);
    cfg.trials = trials;
    cfg.normalized = !raw;
    cfg.include_seeds = !no_include_seeds;
    cfg.rng = gprank::RngConfig{common.seed};
    cfg.threads = common.threads;
    return cfg;
}

json echo_detection(const gprank::DetectionConfig& cfg) {
    return json{{"Q", cfg.Q},
                {"seed_count", cfg.seed_count},
                {"trials", cfg.trials},
                {"normalized", cfg.normalized},
                {"include_seeds", cfg.include_seeds}};
}

void run_detect(const DetectOpts& o) {
    const fs::path dir = ensure_out_dir(o.common.out_dir);
    const bool generated = o.source.generated();
    const auto scheme = gprank::parse_scheme(o.scheme, o.K);
    const auto cfg = make_detection_config(o.common, o.Q, o.seed_count, o.trials, o.raw,
                                           o.no_include_seeds, generated);

    gprank::DetectionResult cell;
    std::size_t resamples = 0;
    if (generated) {
        auto result = gprank::sbm_recall_vs_steps(o.source.spec.spec, {scheme}, cfg,
                                                  {scheme.K()});
        cell = std::move(result.cells.front());
        resamples = result.resamples;
    } else {
        auto lg = load_source(o.source, true);
        if (o.community_index >= lg.communities.size())
            throw gprank::config_error("--community-index out of range");
        cell = gprank::run_detection(lg.g, lg.communities.communities[o.community_index],
                                     scheme, cfg);
    }

    write_recall_trials_csv(dir / "detect.csv", cell);
    json config = o.source.echo();
    config.update(o.common.echo());
    config.update(echo_detection(cfg));
    config["scheme"] = o.scheme;
    config["K"] = o.K;
    if (!generated) config["community_index"] = o.community_index;
    write_manifest(dir, "detect", o.common.seed, config, {"detect.csv"});
    std::cout << cell.scheme_label << " K=" << cell.K << " Q=" << cell.Q
              << " trials=" << o.trials << " mean_recall=" << gprank::fmt_g(cell.mean_recall)
              << " std_recall=" << gprank::fmt_g(cell.std_recall)
              << " resamples=" << resamples << '\n';
}

struct SweepOpts {
    CommonOpts common;
    SourceOpts source;
    std::vector<std::string> schemes;
    int K = 50;
    std::size_t Q = 0;
    std::size_t trials = 100;
    std::size_t seed_count = 0;
    std::size_t community_index = 0;
    bool raw = false;
    bool no_include_seeds = false;
    bool svg = false;
    std::vector<int> k_list;
    std::vector<std::size_t> q_list;
    CLI::Option* o_k_list = nullptr;
    CLI::Option* o_q_list = nullptr;
};

void run_sweep(const SweepOpts& o) {
    const fs::path dir = ensure_out_dir(o.common.out_dir);
    const bool generated = o.source.generated();
    if (o.o_k_list->count() > 0 && o.o_q_list->count() > 0)
        throw gprank::config_error("sweep: give --k-list or --q-list, not both");
    const bool over_steps = o.o_q_list->count() == 0;
    std::vector<int> k_list = o.k_list;
    if (over_steps && k_list.empty()) k_list.push_back(o.K);

    std::vector<gprank::WeightScheme> schemes;
    for (const auto& text : o.schemes) schemes.push_back(gprank::parse_scheme(text, o.K));
    const auto cfg = make_detection_config(o.common, o.Q, o.seed_count, o.trials, o.raw,
                                           o.no_include_seeds, generated);

    std::vector<gprank::DetectionResult> cells;
    std::size_t resamples = 0;
    if (generated) {
        auto result = over_steps
                          ? gprank::sbm_recall_vs_steps(o.source.spec.spec, schemes, cfg,
                                                        k_list)
                          : gprank::sbm_recall_vs_budget(o.source.spec.spec, schemes, cfg,
                                                         o.q_list);
        cells = std::move(result.cells);
        resamples = result.resamples;
    } else {
        auto lg = load_source(o.source, true);
        if (o.community_index >= lg.communities.size())
            throw gprank::config_error("--community-index out of range");
        const auto& community = lg.communities.communities[o.community_index];
        cells = over_steps
                    ? gprank::recall_vs_steps(lg.g, community, schemes, cfg, k_list)
                    : gprank::recall_vs_budget(lg.g, community, schemes, cfg, o.q_list);
    }

    write_recall_summary_csv(dir / "sweep.csv", cells, o.trials);
    std::vector<std::string> outputs{"sweep.csv"};

    if (o.svg) {
        const std::size_t cells_per_scheme = over_steps ? k_list.size() : o.q_list.size();
        std::vector<double> xs;
        if (over_steps)
            for (int k : k_list) xs.push_back(static_cast<double>(k));
        else
            for (std::size_t q : o.q_list) xs.push_back(static_cast<double>(q));
        std::vector<gprank::SvgSeries> series;
        for (std::size_t si = 0; si < schemes.size(); ++si) {
            gprank::SvgSeries s;
            s.name = schemes[si].label;
            for (std::size_t ci = 0; ci < cells_per_scheme; ++ci)
                s.ys.push_back(cells[si * cells_per_scheme + ci].mean_recall);
            series.push_back(std::move(s));
        }
        const fs::path svg_path = dir / "sweep.svg";
        auto out = open_output(svg_path);
        out << gprank::svg_line_plot("mean recall", over_steps ? "K" : "Q", "recall", xs,
                                     series, false);
        finish_output(out, svg_path);
        outputs.push_back("sweep.svg");
    }

    json config = o.source.echo();
    config.update(o.common.echo());
    config.update(echo_detection(cfg));
    config["schemes"] = o.schemes;
    config["K"] = o.K;
    if (over_steps)
        config["k_list"] = k_list;
    else
        config["q_list"] = o.q_list;
    if (!generated) config["community_index"] = o.community_index;
    write_manifest(dir, "sweep", o.common.seed, config, outputs);
    std::cout << "sweep.csv: " << cells.size() << " cells, trials=" << o.trials
              << " resamples=" << resamples << '\n';
}

// ---------------------------------------------------------------------------
// variance

struct VarianceOpts {
    CommonOpts common;
    SpecOpts spec;
    int K = 30;
    std::size_t trials = 100;
    bool no_lambda = false;
    bool svg = false;
};

void run_variance(const VarianceOpts& o) {
    o.spec.require_complete();
    const fs::path dir = ensure_out_dir(o.common.out_dir);
    const auto table =
        gprank::variance_experiment(o.spec.spec, o.K, o.trials,
                                    gprank::RngConfig{o.common.seed}, o.common.threads,
                                    !o.no_lambda);

    const fs::path path = dir / "variance.csv";
    auto out = open_output(path);
    out << "k,trials,mean_sq_l2_x,mean_sq_l2_z,mean_l1_x\n";
    for (int k = 0; k <= o.K; ++k) {
        const auto i = static_cast<std::size_t>(k);
        out << k << ',' << o.trials << ',' << gprank::fmt_g(table.mean_sq_l2_x[i]) << ','
            << gprank::fmt_g(table.mean_sq_l2_z[i]) << ','
            << gprank::fmt_g(table.mean_l1_x[i]) << '\n';
    }
    finish_output(out, path);
    std::vector<std::string> outputs{"variance.csv"};

    if (o.svg) {
        std::vector<double> xs;
        for (int k = 0; k <= o.K; ++k) xs.push_back(static_cast<double>(k));
        const std::vector<gprank::SvgSeries> series{{"mean_sq_l2_x", table.mean_sq_l2_x},
                                                    {"mean_sq_l2_z", table.mean_sq_l2_z}};
        const fs::path svg_path = dir / "variance.svg";
        auto svg_out = open_output(svg_path);
        svg_out << gprank::svg_line_plot("deviation from the averaged walk", "k",
                                         "mean squared l2 deviation", xs, series, true);
        finish_output(svg_out, svg_path);
        outputs.push_back("variance.svg");
    }

    json config = o.spec.echo();
    config.update(o.common.echo());
    config["K"] = o.K;
    config["trials"] = o.trials;
    config["estimate_lambda"] = !o.no_lambda;
    write_manifest(dir, "variance", o.common.seed, config, outputs);
    std::cout << "variance.csv: k = 0.." << o.K << ", trials=" << o.trials
              << " resamples=" << table.resamples;
    if (!o.no_lambda)
        std::cout << " mean_lambda_sub=" << gprank::fmt_g(table.mean_lambda_sub);
    std::cout << '\n';
}

// ---------------------------------------------------------------------------
// lambda2

struct Lambda2Opts {
    CommonOpts common;
    SourceOpts source;
    std::uint64_t trial = 0;
    double tol = 1e-12;
    int max_iter = 100000;
};

void run_lambda2(const Lambda2Opts& o) {
    const fs::path dir = ensure_out_dir(o.common.out_dir);
    const bool generated = o.source.generated();
    gprank::Graph g;
    if (generated) {
        auto stream = gprank::trial_stream(gprank::RngConfig{o.common.seed}, o.trial);
        g = gprank::sample_sbm_no_isolated(o.source.spec.spec, stream).g;
    } else {
        g = std::move(load_source(o.source, false).g);
    }
    const auto est = gprank::lambda_sub_estimate(g, o.tol, o.max_iter);

    const fs::path path = dir / "lambda2.csv";
    auto out = open_output(path);
    out << "key,value\n";
    out << "lambda_sub," << gprank::fmt_g(est.lambda_sub) << '\n';
    out << "residual," << gprank::fmt_g(est.residual) << '\n';
    out << "iterations," << est.iterations << '\n';
    out << "converged," << (est.converged ? 1 : 0) << '\n';
    finish_output(out, path);

    json config = o.source.echo();
    config.update(o.common.echo());
    config["trial"] = o.trial;
    config["tol"] = o.tol;
    config["max_iter"] = o.max_iter;
    write_manifest(dir, "lambda2", o.common.seed, config, {"lambda2.csv"});
    std::cout << "lambda_sub " << gprank::fmt_g(est.lambda_sub) << "\nresidual "
              << gprank::fmt_g(est.residual) << '\n';
    if (!est.converged) std::cerr << "warning: estimate did not converge\n";
}

// ---------------------------------------------------------------------------
// prep

struct PrepOpts {
    CommonOpts common;
    std::string graph_path;
    std::string communities_path;
    std::size_t hops = 0;
    std::size_t window_lo = 0;
    std::size_t window_hi = 0;
    CLI::Option* o_comm = nullptr;
};

void run_prep(const PrepOpts& o) {
    const fs::path dir = ensure_out_dir(o.common.out_dir);
    auto [g0, m0] = gprank::load_edge_list(o.graph_path);
    auto [g1, m1] = gprank::largest_connected_component(g0);
    const auto vmap1 = gprank::VertexMap::compose(m0, m1);
    std::cout << "lcc: " << g1.n() << " vertices, " << g1.edge_count() << " edges (from "
              << g0.n() << " vertices, " << g0.edge_count() << " edges)\n";

    json config{{"graph", o.graph_path}, {"hops", o.hops}};
    config.update(o.common.echo());
    std::vector<std::string> outputs;

    if (o.o_comm->count() == 0) {
        gprank::save_edge_list((dir / "prep_lcc.edges").string(), g1, vmap1);
        gprank::save_vertex_map((dir / "prep_lcc_vmap.csv").string(), vmap1);
        outputs = {"prep_lcc.edges", "prep_lcc_vmap.csv"};
        write_manifest(dir, "prep", o.common.seed, config, outputs);
        return;
    }

    auto [cs, stats] = gprank::load_communities(o.communities_path, vmap1);
    if (stats.dropped_members > 0 || stats.skipped_lines > 0)
        std::cerr << "communities: dropped " << stats.dropped_members
                  << " members outside the lcc, skipped " << stats.skipped_lines
                  << " empty lines\n";
    const auto selected =
        gprank::select_communities_m34(cs, g1.n(), o.window_lo, o.window_hi);
    if (selected.empty())
        throw gprank::config_error("prep: no community matches the size window");
    std::cout << "selected " << selected.size() << " of " << cs.size()
              << " communities (target n^0.75 = "
              << gprank::fmt_g(std::pow(static_cast<double>(g1.n()), 0.75), 6) << ")\n";

    config["communities"] = o.communities_path;
    if (o.window_hi > 0) {
        config["window_lo"] = o.window_lo;
        config["window_hi"] = o.window_hi;
    }
    json selected_echo = json::array();

    for (const std::size_t idx : selected) {
        const auto& members = cs.communities[idx];
        gprank::Graph sub;
        gprank::VertexMap msub;
        if (o.hops > 0) {
            auto [s, m] = gprank::bfs_subgraph(g1, members, o.hops);
            sub = std::move(s);
            msub = std::move(m);
        } else {
            sub = g1;
            msub = gprank::VertexMap::identity(g1.n());
        }
        const auto vmap_sub = gprank::VertexMap::compose(vmap1, msub);
        gprank::CommunitySet restricted;
        restricted.communities.emplace_back();
        for (gprank::Vertex v : members)
            restricted.communities.back().push_back(msub.to_dense.at(v));

        const std::string stem = "prep_" + std::to_string(idx);
        gprank::save_edge_list((dir / (stem + ".edges")).string(), sub, vmap_sub);
        gprank::save_vertex_map((dir / (stem + "_vmap.csv")).string(), vmap_sub);
        gprank::save_communities((dir / (stem + ".cmty")).string(), restricted, vmap_sub);
        outputs.push_back(stem + ".edges");
        outputs.push_back(stem + "_vmap.csv");
        outputs.push_back(stem + ".cmty");
        selected_echo.push_back(idx);
        std::cout << "community " << idx << " (size " << members.size() << "): " << sub.n()
                  << " vertices, " << sub.edge_count() << " edges\n";
    }
    config["selected"] = selected_echo;
    write_manifest(dir, "prep", o.common.seed, config, outputs);
}

// ---------------------------------------------------------------------------
// bound

struct BoundOpts {
    CommonOpts common;
    SpecOpts spec;
    std::size_t n = 0;
    double dbar_min = 0.0;
    double dbar_max = 0.0;
    double lambda_bar = 0.0;
    double x0_l2 = 1.0;
    gprank::BoundConstants c;
    int k = -1;
    std::string scheme;
    int K = 50;
    CLI::Option* o_n = nullptr;
    CLI::Option* o_k = nullptr;
    CLI::Option* o_scheme = nullptr;
};

void run_bound(const BoundOpts& o) {
    const fs::path dir = ensure_out_dir(o.common.out_dir);
    gprank::BoundInputs in;
    json config;
    if (o.o_n->count() > 0) {
        if (o.spec.given() > 0)
            throw gprank::config_error("bound: give --n1..--q or --n/--dbar-*, not both");
        in.n = o.n;
        in.dbar_min = o.dbar_min;
        in.dbar_max = o.dbar_max;
        in.lambda_bar = o.lambda_bar;
        in.x0_l2 = o.x0_l2;
        config = json{{"n", o.n},
                      {"dbar_min", o.dbar_min},
                      {"dbar_max", o.dbar_max},
                      {"lambda_bar", o.lambda_bar}};
    } else {
        o.spec.require_complete();
        in = gprank::BoundInputs::from_spec(o.spec.spec, o.x0_l2);
        config = o.spec.echo();
    }
    config.update(o.common.echo());
    config["x0_l2"] = o.x0_l2;
    config["constants"] = {{"c1", o.c.c1}, {"c2", o.c.c2}, {"c3", o.c.c3},
                           {"c4", o.c.c4}, {"c5", o.c.c5}, {"c6", o.c.c6}};

    const bool step_mode = o.o_k->count() > 0;
    if (step_mode == (o.o_scheme->count() > 0))
        throw gprank::config_error("bound: give exactly one of --k or --scheme");

    gprank::BoundReport r;
    if (step_mode) {
        r = gprank::bound_eval_step(in, o.c, o.k);
        config["k"] = o.k;
    } else {
        r = gprank::bound_eval_gpr(in, o.c, gprank::parse_scheme(o.scheme, o.K));
        config["scheme"] = o.scheme;
        config["K"] = o.K;
    }

    const fs::path path = dir / "bound.csv";
    auto out = open_output(path);
    out << "key,value\n";
    out << "mode," << (step_mode ? "step" : "gpr") << '\n';
    out << "n," << in.n << '\n';
    out << "dbar_min," << gprank::fmt_g(in.dbar_min) << '\n';
    out << "dbar_max," << gprank::fmt_g(in.dbar_max) << '\n';
    out << "lambda_bar," << gprank::fmt_g(in.lambda_bar) << '\n';
    out << "x0_l2," << gprank::fmt_g(in.x0_l2) << '\n';
    out << "c1," << gprank::fmt_g(o.c.c1) << '\n';
    out << "c2," << gprank::fmt_g(o.c.c2) << '\n';
    out << "c3," << gprank::fmt_g(o.c.c3) << '\n';
    out << "c4," << gprank::fmt_g(o.c.c4) << '\n';
    out << "c5," << gprank::fmt_g(o.c.c5) << '\n';
    out << "c6," << gprank::fmt_g(o.c.c6) << '\n';
    out << "rho_lp," << gprank::fmt_g(r.rho_lp) << '\n';
    out << "rho_dnlp," << gprank::fmt_g(r.rho_dnlp) << '\n';
    out << "floor_term," << gprank::fmt_g(r.floor_term) << '\n';
    if (step_mode) {
        out << "k," << r.k << '\n';
        out << "step_term," << gprank::fmt_g(r.step_term) << '\n';
        out << "rhs_lp," << gprank::fmt_g(r.rhs_lp) << '\n';
        out << "rhs_dnlp," << gprank::fmt_g(r.rhs_dnlp) << '\n';
    } else {
        out << "g_value," << gprank::fmt_g(r.g_value) << '\n';
        out << "g_decay_ok," << (r.g_decay_ok ? 1 : 0) << '\n';
        out << "rhs_gpr," << gprank::fmt_g(r.rhs_gpr) << '\n';
        out << "g_condition_value," << gprank::fmt_g(r.g_condition_value) << '\n';
        out << "g_condition_threshold," << gprank::fmt_g(r.g_condition_threshold) << '\n';
    }
    finish_output(out, path);

    write_manifest(dir, "bound", o.common.seed, config, {"bound.csv"});
    if (step_mode)
        std::cout << "rhs_lp " << gprank::fmt_g(r.rhs_lp) << "\nrhs_dnlp "
                  << gprank::fmt_g(r.rhs_dnlp) << '\n';
    else
        std::cout << "rhs_gpr " << gprank::fmt_g(r.rhs_gpr) << "\ng_value "
                  << gprank::fmt_g(r.g_value) << '\n';
}

void add_detection_options(CLI::App* cmd, std::size_t& Q, std::size_t& trials,
                           std::size_t& seed_count, std::size_t& community_index,
                           bool& raw, bool& no_include_seeds) {
    cmd->add_option("--Q", Q, "Prediction budget (0 = community size)")
        ->capture_default_str();
    cmd->add_option("--trials", trials, "Trial count")->capture_default_str();
    cmd->add_option("--seed-count", seed_count,
                    "Seeds per trial (0 = auto: 1 generated, 20 loaded)");
    cmd->add_option("--community-index", community_index,
                    "Community to recover on loaded graphs")
        ->capture_default_str();
    cmd->add_flag("--raw", raw, "Score raw landing probabilities instead of normalized");
    cmd->add_flag("--no-include-seeds", no_include_seeds,
                  "Do not force the seeds into the predicted set");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph diffusion toolkit: generalized PageRank weighting schemes on "
                 "random-walk landing probabilities"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML/INI file; flags override");
    app.set_version_flag("--version", gprank::kVersion);

    GenSbmOpts gen;
    auto* cmd_gen = app.add_subcommand("gen-sbm", "Sample a two-block graph to files");
    gen.spec.add(cmd_gen);
    gen.common.add(cmd_gen, false);
    cmd_gen->add_option("--trial", gen.trial, "Trial index within the seed's stream")
        ->capture_default_str();
    cmd_gen->callback([&gen] { run_gen_sbm(gen); });

    LpOpts lp;
    auto* cmd_lp = app.add_subcommand("lp", "Landing probabilities of a seeded walk");
    lp.source.add(cmd_lp, true);
    lp.common.add(cmd_lp, false);
    cmd_lp->add_option("--K", lp.K, "Number of walk steps")->capture_default_str();
    cmd_lp->add_option("--trial", lp.trial, "Trial index within the seed's stream")
        ->capture_default_str();
    cmd_lp->add_option("--seed-count", lp.seed_count, "Seeds to sample from the community")
        ->capture_default_str();
    cmd_lp->add_option("--community-index", lp.community_index,
                       "Community to sample seeds from")
        ->capture_default_str();
    lp.o_seeds = cmd_lp->add_option("--seeds", lp.seeds_path, "Seed list file");
    lp.o_seed_vertices = cmd_lp->add_option("--seed-vertices", lp.seed_vertices,
                                            "Seed vertex ids (original ids)")
                             ->delimiter(',');
    cmd_lp->callback([&lp] { run_lp(lp); });

    DetectOpts det;
    auto* cmd_detect =
        app.add_subcommand("detect", "Seed-set community detection, per-trial recalls");
    det.source.add(cmd_detect, true);
    det.common.add(cmd_detect);
    cmd_detect->add_option("--scheme", det.scheme, "Weight scheme, e.g. ppr:0.85")
        ->required();
    cmd_detect->add_option("--K", det.K, "Walk depth")->capture_default_str();
    add_detection_options(cmd_detect, det.Q, det.trials, det.seed_count,
                          det.community_index, det.raw, det.no_include_seeds);
    cmd_detect->callback([&det] { run_detect(det); });

    SweepOpts sweep;
    auto* cmd_sweep =
        app.add_subcommand("sweep", "Recall across schemes and step or budget checkpoints");
    sweep.source.add(cmd_sweep, true);
    sweep.common.add(cmd_sweep);
    cmd_sweep->add_option("--scheme", sweep.schemes, "Weight scheme (repeatable)")
        ->required();
    cmd_sweep->add_option("--K", sweep.K, "Walk depth")->capture_default_str();
    sweep.o_k_list = cmd_sweep->add_option("--k-list", sweep.k_list, "Step checkpoints")
                         ->delimiter(',');
    sweep.o_q_list = cmd_sweep->add_option("--q-list", sweep.q_list, "Budget checkpoints")
                         ->delimiter(',');
    add_detection_options(cmd_sweep, sweep.Q, sweep.trials, sweep.seed_count,
                          sweep.community_index, sweep.raw, sweep.no_include_seeds);
    cmd_sweep->add_flag("--svg", sweep.svg, "Also write a line plot");
    cmd_sweep->callback([&sweep] { run_sweep(sweep); });

    VarianceOpts var;
    auto* cmd_variance = app.add_subcommand(
        "variance", "Deviation of sampled landing probabilities from the averaged walk");
    var.spec.add(cmd_variance);
    var.common.add(cmd_variance);
    cmd_variance->add_option("--K", var.K, "Walk depth")->capture_default_str();
    cmd_variance->add_option("--trials", var.trials, "Trial count")->capture_default_str();
    cmd_variance->add_flag("--no-lambda", var.no_lambda,
                           "Skip the per-trial spectral estimate");
    cmd_variance->add_flag("--svg", var.svg, "Also write a log-scale line plot");
    cmd_variance->callback([&var] { run_variance(var); });

    Lambda2Opts lam;
    auto* cmd_lambda2 =
        app.add_subcommand("lambda2", "Subdominant eigenvalue magnitude of the walk matrix");
    lam.source.add(cmd_lambda2, false);
    lam.common.add(cmd_lambda2, false);
    cmd_lambda2->add_option("--trial", lam.trial, "Trial index within the seed's stream")
        ->capture_default_str();
    cmd_lambda2->add_option("--tol", lam.tol, "Residual tolerance")->capture_default_str();
    cmd_lambda2->add_option("--max-iter", lam.max_iter, "Iteration cap")
        ->capture_default_str();
    cmd_lambda2->callback([&lam] { run_lambda2(lam); });

    PrepOpts prep;
    auto* cmd_prep = app.add_subcommand(
        "prep", "Reduce a real network: largest component, size-rule community, BFS ball");
    cmd_prep->add_option("--graph", prep.graph_path, "Edge-list file to load")->required();
    prep.o_comm = cmd_prep->add_option("--communities", prep.communities_path,
                                       "Community file (one community per line)");
    cmd_prep->add_option("--hops", prep.hops, "BFS radius around the community (0 = keep lcc)")
        ->capture_default_str();
    cmd_prep->add_option("--window-lo", prep.window_lo, "Community size window lower bound")
        ->capture_default_str();
    cmd_prep->add_option("--window-hi", prep.window_hi,
                         "Community size window upper bound (0 = nearest-size rule)")
        ->capture_default_str();
    prep.common.add(cmd_prep, false);
    cmd_prep->callback([&prep] { run_prep(prep); });

    BoundOpts bound;
    auto* cmd_bound =
        app.add_subcommand("bound", "Concentration-bound right-hand sides and conditions");
    bound.spec.add(cmd_bound);
    bound.common.add(cmd_bound, false);
    bound.o_n = cmd_bound->add_option("--n", bound.n, "Vertex count (explicit inputs)");
    cmd_bound->add_option("--dbar-min", bound.dbar_min, "Smallest expected degree");
    cmd_bound->add_option("--dbar-max", bound.dbar_max, "Largest expected degree");
    cmd_bound->add_option("--lambda-bar", bound.lambda_bar,
                          "Subdominant eigenvalue magnitude of the averaged walk");
    cmd_bound->add_option("--x0-l2", bound.x0_l2, "l2 norm of the start vector")
        ->capture_default_str();
    cmd_bound->add_option("--c1", bound.c.c1, "Floor-term constant")->capture_default_str();
    cmd_bound->add_option("--c2", bound.c.c2, "Step-term constant")->capture_default_str();
    cmd_bound->add_option("--c3", bound.c.c3, "Decay-rate slack constant")
        ->capture_default_str();
    cmd_bound->add_option("--c4", bound.c.c4, "Normalized step-term constant")
        ->capture_default_str();
    cmd_bound->add_option("--c5", bound.c.c5, "Normalized decay-rate slack constant")
        ->capture_default_str();
    cmd_bound->add_option("--c6", bound.c.c6, "Series-condition slack constant")
        ->capture_default_str();
    bound.o_k = cmd_bound->add_option("--k", bound.k, "Evaluate the per-step bound at k");
    bound.o_scheme =
        cmd_bound->add_option("--scheme", bound.scheme, "Evaluate the weighted bound");
    cmd_bound->add_option("--K", bound.K, "Truncation depth for --scheme")
        ->capture_default_str();
    cmd_bound->callback([&bound] { run_bound(bound); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const gprank::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const gprank::io_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 3;
    } catch (const gprank::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
