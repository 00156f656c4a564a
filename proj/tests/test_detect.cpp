#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gprank/detect.hpp"
#include "gprank/graph.hpp"
#include "gprank/randgraph.hpp"
#include "gprank/rng.hpp"
#include "gprank/weights.hpp"

using namespace gprank;

namespace {

// Two 5-cliques joined by a single bridge edge {4,5}.
Graph two_cliques() {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex u = 0; u < 5; ++u)
        for (Vertex v = u + 1; v < 5; ++v) edges.emplace_back(u, v);
    for (Vertex u = 5; u < 10; ++u)
        for (Vertex v = u + 1; v < 10; ++v) edges.emplace_back(u, v);
    edges.emplace_back(4, 5);
    return Graph::from_edges(10, edges);
}

const std::vector<Vertex> kCliqueA{0, 1, 2, 3, 4};

} // namespace

TEST_CASE("seed draws are sorted subsets of the community", "[detect]") {
    const std::vector<Vertex> community{3, 7, 11, 15, 19};
    const auto a = sample_seeds(community, 3, RngConfig{50}, 2);
    const auto b = sample_seeds(community, 3, RngConfig{50}, 2);
    REQUIRE(a == b);
    REQUIRE(a.size() == 3);
    REQUIRE(std::is_sorted(a.begin(), a.end()));
    for (Vertex s : a)
        REQUIRE(std::find(community.begin(), community.end(), s) != community.end());

    auto stream = trial_stream(RngConfig{50}, 2);
    REQUIRE(sample_seeds(community, 3, stream) == a);

    REQUIRE_THROWS_AS(sample_seeds(community, 0, RngConfig{50}, 2), config_error);
    REQUIRE_THROWS_AS(sample_seeds(community, 6, RngConfig{50}, 2), config_error);
}

TEST_CASE("top_q ranks by score then index", "[detect]") {
    const std::vector<double> scores{5.0, 1.0, 9.0, 9.0, 0.0};
    REQUIRE(top_q(scores, 2) == std::vector<Vertex>{2, 3});
    REQUIRE(top_q(scores, 3) == std::vector<Vertex>{0, 2, 3});
    REQUIRE(top_q(scores, 5) == std::vector<Vertex>{0, 1, 2, 3, 4});
    REQUIRE(top_q(scores, 0).empty());

    const std::vector<double> flat(4, 2.5);
    REQUIRE(top_q(flat, 2) == std::vector<Vertex>{0, 1});
}

TEST_CASE("top_q honors forced vertices", "[detect]") {
    const std::vector<double> scores{5.0, 1.0, 9.0, 9.0, 0.0};
    REQUIRE(top_q(scores, 2, {4}) == std::vector<Vertex>{2, 4});
    REQUIRE(top_q(scores, 2, {4, 4}) == std::vector<Vertex>{2, 4});
    REQUIRE(top_q(scores, 1, {4}) == std::vector<Vertex>{4});
    REQUIRE(top_q(scores, 3, {1, 4}) == std::vector<Vertex>{1, 2, 4});

    REQUIRE_THROWS_AS(top_q(scores, 6), config_error);
    REQUIRE_THROWS_AS(top_q(scores, 2, {9}), config_error);
    REQUIRE_THROWS_AS(top_q(scores, 1, {0, 1}), config_error);
}

TEST_CASE("recall counts the recovered fraction", "[detect]") {
    REQUIRE(recall({0, 2, 3}, {2, 3, 5, 7}) == Catch::Approx(0.5));
    REQUIRE(recall({}, {1, 2}) == 0.0);
    REQUIRE(recall({1, 2}, {1, 2}) == 1.0);
    REQUIRE(recall({0, 1, 2, 3}, {3}) == 1.0);
    REQUIRE_THROWS_AS(recall({0}, {}), config_error);
}

TEST_CASE("a planted clique is recovered perfectly", "[detect]") {
    const auto g = two_cliques();
    DetectionConfig cfg;
    cfg.trials = 8;
    cfg.seed_count = 1;
    cfg.rng = RngConfig{99};
    const auto result = run_detection(g, kCliqueA, ppr_weights(0.85, 10), cfg);
    REQUIRE(result.scheme_label == "ppr:0.85");
    REQUIRE(result.Q == kCliqueA.size());
    REQUIRE(result.recalls.size() == 8);
    REQUIRE(result.mean_recall == 1.0);
    REQUIRE(result.std_recall == 0.0);
}

TEST_CASE("positively rescaled weights leave recalls unchanged", "[detect]") {
    const auto g = two_cliques();
    DetectionConfig cfg;
    cfg.trials = 6;
    cfg.Q = 3;
    cfg.rng = RngConfig{123};
    const auto base = ppr_weights(0.6, 8);
    std::vector<double> scaled = base.gamma;
    for (double& v : scaled) v *= 37.5;
    const auto a = run_detection(g, kCliqueA, base, cfg);
    const auto b = run_detection(g, kCliqueA, custom_weights(scaled), cfg);
    REQUIRE(a.recalls == b.recalls);
}

TEST_CASE("recall never drops as the budget grows", "[detect]") {
    const auto g = two_cliques();
    DetectionConfig cfg;
    cfg.trials = 6;
    cfg.rng = RngConfig{321};
    const std::vector<std::size_t> q_list{1, 2, 3, 5, 8, 10};
    const auto cells = recall_vs_budget(g, kCliqueA, {ppr_weights(0.85, 6)}, cfg, q_list);
    REQUIRE(cells.size() == q_list.size());
    for (std::size_t i = 1; i < cells.size(); ++i) {
        for (std::size_t t = 0; t < cfg.trials; ++t)
            REQUIRE(cells[i].recalls[t] >= cells[i - 1].recalls[t]);
    }
    REQUIRE(cells.back().mean_recall == 1.0);
}

TEST_CASE("step checkpoints replay the same accumulation", "[detect]") {
    const auto g = two_cliques();
    DetectionConfig cfg;
    cfg.trials = 5;
    cfg.rng = RngConfig{777};
    const auto scheme = hpr_weights(3.0, 8);
    const auto cells = recall_vs_steps(g, kCliqueA, {scheme}, cfg, {0, 1, 1, 3, 8});
    REQUIRE(cells.size() == 5);
    REQUIRE(cells[1].recalls == cells[2].recalls);
    REQUIRE(cells[1].K == 1);

    const auto full = run_detection(g, kCliqueA, scheme, cfg);
    REQUIRE(cells[4].recalls == full.recalls);
}

TEST_CASE("forcing the seed matters when its own score is low", "[detect]") {
    const auto path = Graph::from_edges(3, {{0, 1}, {1, 2}});
    const std::vector<Vertex> community{0};
    DetectionConfig cfg;
    cfg.trials = 1;
    cfg.Q = 1;
    cfg.normalized = false;
    cfg.rng = RngConfig{5};
    const auto step1 = custom_weights({0.0, 1.0});

    cfg.include_seeds = true;
    REQUIRE(run_detection(path, community, step1, cfg).mean_recall == 1.0);
    cfg.include_seeds = false;
    REQUIRE(run_detection(path, community, step1, cfg).mean_recall == 0.0);
}

TEST_CASE("recall experiments validate their configuration", "[detect]") {
    const auto g = two_cliques();
    DetectionConfig cfg;
    cfg.trials = 2;
    cfg.rng = RngConfig{1};

    const std::vector<WeightScheme> mixed{ppr_weights(0.5, 4), ppr_weights(0.5, 5)};
    REQUIRE_THROWS_AS(recall_vs_steps(g, kCliqueA, mixed, cfg, {0, 4}), config_error);
    REQUIRE_THROWS_AS(recall_vs_steps(g, kCliqueA, {}, cfg, {0}), config_error);
    REQUIRE_THROWS_AS(recall_vs_steps(g, kCliqueA, {ppr_weights(0.5, 4)}, cfg, {}),
                      config_error);
    REQUIRE_THROWS_AS(recall_vs_steps(g, kCliqueA, {ppr_weights(0.5, 4)}, cfg, {5}),
                      config_error);

    DetectionConfig no_trials = cfg;
    no_trials.trials = 0;
    REQUIRE_THROWS_AS(run_detection(g, kCliqueA, ppr_weights(0.5, 4), no_trials),
                      config_error);

    DetectionConfig big_q = cfg;
    big_q.Q = 11;
    REQUIRE_THROWS_AS(run_detection(g, kCliqueA, ppr_weights(0.5, 4), big_q), config_error);

    DetectionConfig many_seeds = cfg;
    many_seeds.seed_count = 6;
    REQUIRE_THROWS_AS(run_detection(g, kCliqueA, ppr_weights(0.5, 4), many_seeds),
                      config_error);
}

TEST_CASE("resampled-graph sweeps are deterministic across thread counts", "[detect]") {
    const SbmSpec spec{12, 12, 0.7, 0.7, 0.05};
    DetectionConfig cfg;
    cfg.trials = 8;
    cfg.rng = RngConfig{2026};
    const std::vector<WeightScheme> schemes{ppr_weights(0.85, 6), hpr_weights(2.0, 6)};

    cfg.threads = 1;
    const auto serial = sbm_recall_vs_steps(spec, schemes, cfg, {0, 2, 4, 6});
    cfg.threads = 4;
    const auto threaded = sbm_recall_vs_steps(spec, schemes, cfg, {0, 2, 4, 6});

    REQUIRE(serial.cells.size() == threaded.cells.size());
    REQUIRE(serial.resamples == threaded.resamples);
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
        REQUIRE(serial.cells[i].recalls == threaded.cells[i].recalls);
        REQUIRE(serial.cells[i].scheme_label == threaded.cells[i].scheme_label);
    }
}

TEST_CASE("dense planted blocks are easy to recover from fresh draws", "[detect]") {
    const SbmSpec spec{10, 10, 0.9, 0.9, 0.05};
    DetectionConfig cfg;
    cfg.trials = 6;
    cfg.rng = RngConfig{31415};
    const auto result = sbm_recall_vs_budget(spec, {ppr_weights(0.85, 8)}, cfg, {10});
    REQUIRE(result.cells.size() == 1);
    REQUIRE(result.cells.front().Q == 10);
    REQUIRE(result.cells.front().mean_recall >= 0.6);
    REQUIRE(result.cells.front().mean_recall <= 1.0);
}

TEST_CASE("a zero budget predicts nothing", "[detect]") {
    const auto g = two_cliques();
    DetectionConfig cfg;
    cfg.trials = 3;
    cfg.include_seeds = false;
    cfg.rng = RngConfig{8};
    const auto cells = recall_vs_budget(g, kCliqueA, {ppr_weights(0.5, 4)}, cfg, {0, 10});
    REQUIRE(cells[0].mean_recall == 0.0);
    REQUIRE(cells[1].mean_recall == 1.0);
}

TEST_CASE("forced seeds floor the recall at their community share", "[detect]") {
    const SbmSpec spec{8, 8, 0.4, 0.4, 0.3};
    DetectionConfig cfg;
    cfg.trials = 10;
    cfg.seed_count = 2;
    cfg.rng = RngConfig{906};
    const auto result = sbm_recall_vs_steps(spec, {ppr_weights(0.85, 4)}, cfg, {4});
    for (double r : result.cells.front().recalls) REQUIRE(r >= 2.0 / 8.0);
}

TEST_CASE("top_q is invariant under positive affine score maps", "[detect]") {
    auto stream = trial_stream(RngConfig{5150}, 0);
    std::vector<double> scores(40);
    for (double& s : scores) s = stream.next_double();
    std::vector<double> mapped(scores.size());
    for (std::size_t v = 0; v < scores.size(); ++v) mapped[v] = 2.5 * scores[v] + 7.0;
    for (std::size_t q : {std::size_t{1}, std::size_t{7}, std::size_t{40}})
        REQUIRE(top_q(scores, q) == top_q(mapped, q));
}

TEST_CASE("community selection targets the n^(3/4) size scale", "[detect]") {
    CommunitySet cs;
    cs.communities = {std::vector<Vertex>(10), std::vector<Vertex>(100),
                      std::vector<Vertex>(1000)};
    REQUIRE(select_communities_m34(cs, 1000) == std::vector<std::size_t>{1});

    REQUIRE(select_communities_m34(cs, 1000, 50, 1500) == std::vector<std::size_t>{1, 2});
    REQUIRE(select_communities_m34(cs, 1000, 2000, 3000).empty());
    REQUIRE_THROWS_AS(select_communities_m34(cs, 1000, 9, 5), config_error);
    REQUIRE_THROWS_AS(select_communities_m34(CommunitySet{}, 1000), config_error);

    CommunitySet tie;
    tie.communities = {std::vector<Vertex>(6), std::vector<Vertex>(10)};
    REQUIRE(select_communities_m34(tie, 16) == std::vector<std::size_t>{0, 1});

    CommunitySet lone;
    lone.communities = {std::vector<Vertex>(42)};
    REQUIRE(select_communities_m34(lone, 5000) == std::vector<std::size_t>{0});
}

TEST_CASE("the one-feature classifier counts symmetric mistakes", "[detect]") {
    REQUIRE(single_feature_error({5.0, 4.0, 1.0, 2.0}, {1, 1, 0, 0}, 2) == 0.0);
    REQUIRE(single_feature_error({5.0, 1.0, 4.0, 2.0}, {1, 1, 0, 0}, 2) ==
            Catch::Approx(0.5));
    REQUIRE(single_feature_error({1.0, 1.0, 1.0, 1.0}, {1, 1, 0, 0}, 2) == 0.0);
    REQUIRE(single_feature_error({1.0, 1.0, 1.0, 1.0}, {0, 0, 1, 1}, 2) ==
            Catch::Approx(1.0));

    REQUIRE_THROWS_AS(single_feature_error({1.0, 2.0}, {1, 0, 0}, 1), config_error);
    REQUIRE_THROWS_AS(single_feature_error({1.0, 2.0}, {1, 1}, 1), config_error);
    REQUIRE_THROWS_AS(single_feature_error({}, {}, 0), config_error);
}