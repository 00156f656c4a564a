#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "gprank/graph.hpp"
#include "gprank/graph_io.hpp"
#include "gprank/randgraph.hpp"
#include "gprank/rng.hpp"

using namespace gprank;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "gprank_graph_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

} // namespace

TEST_CASE("CSR construction on a path graph", "[graph]") {
    const auto g = Graph::from_edges(3, {{0, 1}, {1, 2}});
    REQUIRE(g.n() == 3);
    REQUIRE(g.edge_count() == 2);
    REQUIRE(g.total_degree() == 4);
    REQUIRE(g.degree(0) == 1);
    REQUIRE(g.degree(1) == 2);
    REQUIRE(g.degree(2) == 1);
    REQUIRE(g.min_degree() == 1);
    const auto row = g.neighbors(1);
    REQUIRE(std::vector<Vertex>(row.begin(), row.end()) == std::vector<Vertex>{0, 2});
    REQUIRE(g.has_edge(0, 1));
    REQUIRE_FALSE(g.has_edge(0, 2));
}

TEST_CASE("duplicate and reversed edges collapse", "[graph]") {
    const auto g = Graph::from_edges(2, {{0, 1}, {1, 0}, {0, 1}});
    REQUIRE(g.edge_count() == 1);
    REQUIRE(g.degree(0) == 1);
    REQUIRE(g.degree(1) == 1);
}

TEST_CASE("self-loop contributes one to its degree", "[graph]") {
    const auto g = Graph::from_edges(2, {{0, 0}, {0, 1}});
    REQUIRE(g.degree(0) == 2);
    REQUIRE(g.degree(1) == 1);
    REQUIRE(g.edge_count() == 2);
    REQUIRE(g.total_degree() == 3);
}

TEST_CASE("from_edges rejects out-of-range endpoints", "[graph]") {
    REQUIRE_THROWS_AS(Graph::from_edges(2, {{0, 2}}), config_error);
}

TEST_CASE("walk_step on a triangle preserves the uniform distribution", "[graph]") {
    const auto g = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    const std::vector<double> uniform(3, 1.0 / 3.0);
    const auto next = walk_step(g, uniform);
    for (double v : next) REQUIRE(v == Catch::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("walk_step on a star moves all mass off the center", "[graph]") {
    const auto g = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
    const auto spread = walk_step(g, {1.0, 0.0, 0.0, 0.0});
    REQUIRE(spread[0] == 0.0);
    for (int leaf = 1; leaf < 4; ++leaf)
        REQUIRE(spread[static_cast<std::size_t>(leaf)] == Catch::Approx(1.0 / 3.0));
    const auto back = walk_step(g, spread);
    REQUIRE(back[0] == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("degree-proportional distribution is stationary", "[graph]") {
    auto stream = trial_stream(RngConfig{2024}, 0);
    const auto sample = sample_sbm_no_isolated({20, 20, 0.4, 0.3, 0.1}, stream);
    const auto pi = sample.g.stationary_distribution();
    const auto next = walk_step(sample.g, pi);
    for (std::size_t v = 0; v < pi.size(); ++v)
        REQUIRE(next[v] == Catch::Approx(pi[v]).margin(1e-12));
}

TEST_CASE("walk mass is conserved across 200 steps", "[graph]") {
    auto stream = trial_stream(RngConfig{7}, 0);
    const auto sample = sample_sbm_no_isolated({30, 30, 0.3, 0.3, 0.05}, stream);
    std::vector<double> x(sample.g.n(), 0.0);
    x[0] = 1.0;
    for (int k = 0; k < 200; ++k) x = walk_step(sample.g, x);
    REQUIRE(sum(x) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("walk_step validates its inputs", "[graph]") {
    const auto g = Graph::from_edges(3, {{0, 1}});
    const std::vector<double> ok{0.5, 0.5, 0.0};
    REQUIRE_THROWS_AS(walk_step(g, ok), numeric_error); // vertex 2 is isolated

    const auto connected = Graph::from_edges(2, {{0, 1}});
    REQUIRE_THROWS_AS(walk_step(connected, {0.5}), config_error);
    REQUIRE_THROWS_AS(walk_step(connected, {-0.1, 1.1}), config_error);
    REQUIRE_THROWS_AS(walk_step(connected, {0.6, 0.5}), config_error);
}

TEST_CASE("walk_step commutes with vertex relabeling", "[graph]") {
    auto stream = trial_stream(RngConfig{11}, 3);
    const auto sample = sample_sbm_no_isolated({15, 15, 0.4, 0.4, 0.1}, stream);
    const Graph& g = sample.g;
    const std::size_t n = g.n();

    std::vector<Vertex> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    auto shuffle_stream = trial_stream(RngConfig{11}, 4);
    for (std::size_t i = n; i > 1; --i)
        std::swap(perm[i - 1], perm[shuffle_stream.next_below(i)]);

    std::vector<std::pair<Vertex, Vertex>> mapped;
    for (Vertex v = 0; v < n; ++v)
        for (Vertex u : g.neighbors(v))
            if (v <= u) mapped.emplace_back(perm[v], perm[u]);
    const auto gp = Graph::from_edges(n, std::move(mapped));

    std::vector<double> x(n, 0.0);
    auto mass_stream = trial_stream(RngConfig{11}, 5);
    double total = 0.0;
    for (auto& value : x) {
        value = mass_stream.next_double();
        total += value;
    }
    for (auto& value : x) value /= total;
    std::vector<double> xp(n);
    for (Vertex v = 0; v < n; ++v) xp[perm[v]] = x[v];

    const auto y = walk_step(g, x);
    const auto yp = walk_step(gp, xp);
    for (Vertex v = 0; v < n; ++v)
        REQUIRE(yp[perm[v]] == Catch::Approx(y[v]).margin(1e-12));
}

TEST_CASE("largest component wins, ties go to the smallest vertex", "[graph]") {
    const auto g = Graph::from_edges(5, {{0, 1}, {1, 2}, {0, 2}, {3, 4}});
    const auto [lcc, vmap] = largest_connected_component(g);
    REQUIRE(lcc.n() == 3);
    REQUIRE(vmap.to_original == std::vector<std::uint64_t>{0, 1, 2});

    const auto tie = Graph::from_edges(4, {{2, 3}, {0, 1}});
    const auto [kept, tie_map] = largest_connected_component(tie);
    REQUIRE(kept.n() == 2);
    REQUIRE(tie_map.to_original == std::vector<std::uint64_t>{0, 1});
}

TEST_CASE("component extraction relabels in ascending order", "[graph]") {
    const auto g = Graph::from_edges(7, {{4, 5}, {5, 6}, {0, 1}});
    const auto [lcc, vmap] = largest_connected_component(g);
    REQUIRE(lcc.n() == 3);
    REQUIRE(vmap.to_original == std::vector<std::uint64_t>{4, 5, 6});
    REQUIRE(lcc.has_edge(0, 1));
    REQUIRE(lcc.has_edge(1, 2));
    REQUIRE_FALSE(lcc.has_edge(0, 2));
}

TEST_CASE("bfs_subgraph keeps vertices within the hop budget", "[graph]") {
    const auto path = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    const auto [two_hops, vmap] = bfs_subgraph(path, {0}, 2);
    REQUIRE(two_hops.n() == 3);
    REQUIRE(vmap.to_original == std::vector<std::uint64_t>{0, 1, 2});

    const auto [zero_hops, zmap] = bfs_subgraph(path, {2}, 0);
    REQUIRE(zero_hops.n() == 1);
    REQUIRE(zmap.to_original == std::vector<std::uint64_t>{2});

    const auto [all, amap] = bfs_subgraph(path, {0}, 10);
    REQUIRE(all.n() == 5);
    REQUIRE(all.edge_count() == path.edge_count());
}

TEST_CASE("bfs_subgraph drops edges leaving the visited set", "[graph]") {
    const auto g = Graph::from_edges(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
    const auto [sub, vmap] = bfs_subgraph(g, {3}, 1);
    REQUIRE(sub.n() == 2);
    REQUIRE(vmap.to_original == std::vector<std::uint64_t>{2, 3});
    REQUIRE(sub.edge_count() == 1);
}

TEST_CASE("bfs_subgraph validates seeds", "[graph]") {
    const auto g = Graph::from_edges(2, {{0, 1}});
    REQUIRE_THROWS_AS(bfs_subgraph(g, {}, 1), config_error);
    REQUIRE_THROWS_AS(bfs_subgraph(g, {5}, 1), config_error);
}

TEST_CASE("max_seed_eccentricity measures the farthest vertex", "[graph]") {
    const auto path = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    REQUIRE(max_seed_eccentricity(path, {0}) == 4);
    REQUIRE(max_seed_eccentricity(path, {2}) == 2);
    REQUIRE(max_seed_eccentricity(path, {0, 4}) == 2);
    REQUIRE(max_seed_eccentricity(path, {0, 1, 2, 3, 4}) == 0);

    const auto cycle = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
    REQUIRE(max_seed_eccentricity(cycle, {0}) == 2);

    const auto split = Graph::from_edges(4, {{0, 1}, {2, 3}});
    REQUIRE_THROWS_AS(max_seed_eccentricity(split, {0}), config_error);
}

TEST_CASE("vertex maps compose through a two-stage pipeline", "[graph]") {
    const auto first = VertexMap::from_originals({100, 200, 300, 400});
    const auto second = VertexMap::from_originals({3, 1});
    const auto composed = VertexMap::compose(first, second);
    REQUIRE(composed.to_original == std::vector<std::uint64_t>{400, 200});
    REQUIRE(composed.to_dense.at(400) == 0);
    REQUIRE(composed.to_dense.at(200) == 1);

    const auto bad = VertexMap::from_originals({9});
    REQUIRE_THROWS_AS(VertexMap::compose(first, bad), config_error);
}

TEST_CASE("edge lists load with comments, blanks and first-appearance ids", "[io]") {
    const auto path = temp_file("basic.txt");
    write_file(path, "# a comment\n10 20\n\n20 30\n10 30\n");
    const auto [g, vmap] = load_edge_list(path.string());
    REQUIRE(g.n() == 3);
    REQUIRE(g.edge_count() == 3);
    REQUIRE(vmap.to_original == std::vector<std::uint64_t>{10, 20, 30});
    REQUIRE(vmap.to_dense.at(30) == 2);
}

TEST_CASE("a lone self-loop line yields one vertex of degree one", "[io]") {
    const auto path = temp_file("selfloop.txt");
    write_file(path, "3 3\n");
    const auto [g, vmap] = load_edge_list(path.string());
    REQUIRE(g.n() == 1);
    REQUIRE(g.degree(0) == 1);
    REQUIRE(vmap.to_original == std::vector<std::uint64_t>{3});
}

TEST_CASE("edge list loader rejects malformed input", "[io]") {
    const auto bad = temp_file("bad.txt");
    write_file(bad, "1 2\n1 x\n");
    REQUIRE_THROWS_AS(load_edge_list(bad.string()), io_error);

    const auto short_line = temp_file("short.txt");
    write_file(short_line, "1\n");
    REQUIRE_THROWS_AS(load_edge_list(short_line.string()), io_error);

    const auto empty = temp_file("empty.txt");
    write_file(empty, "# nothing\n");
    REQUIRE_THROWS_AS(load_edge_list(empty.string()), io_error);

    REQUIRE_THROWS_AS(load_edge_list((temp_file("missing_dir") / "nope.txt").string()),
                      io_error);
}

TEST_CASE("edge lists round-trip through save and load", "[io]") {
    const auto src = temp_file("round_src.txt");
    write_file(src, "7 9\n9 11\n7 11\n11 11\n");
    const auto [g, vmap] = load_edge_list(src.string());
    const auto dst = temp_file("round_dst.txt");
    save_edge_list(dst.string(), g, vmap);
    const auto [g2, vmap2] = load_edge_list(dst.string());
    REQUIRE(g2.n() == g.n());
    REQUIRE(g2.edge_count() == g.edge_count());
    REQUIRE(vmap2.to_original == vmap.to_original);
    for (Vertex v = 0; v < g.n(); ++v) REQUIRE(g2.degree(v) == g.degree(v));
}

TEST_CASE("community loader drops unknown members and empty lines", "[io]") {
    const auto edges = temp_file("c_edges.txt");
    write_file(edges, "1 2\n2 3\n");
    const auto [g, vmap] = load_edge_list(edges.string());

    const auto cmty = temp_file("c_sets.txt");
    write_file(cmty, "1 2 99\n50 60\n3 2\n");
    const auto [cs, stats] = load_communities(cmty.string(), vmap);
    REQUIRE(cs.size() == 2);
    REQUIRE(stats.dropped_members == 3);
    REQUIRE(stats.skipped_lines == 1);
    REQUIRE(cs.communities[0] == std::vector<Vertex>{0, 1});
    REQUIRE(cs.communities[1] == std::vector<Vertex>{1, 2});
}

TEST_CASE("communities round-trip through save and load", "[io]") {
    const auto edges = temp_file("rt_edges.txt");
    write_file(edges, "5 6\n6 7\n7 8\n");
    const auto [g, vmap] = load_edge_list(edges.string());
    CommunitySet cs;
    cs.communities = {{0, 1}, {2, 3}};
    const auto path = temp_file("rt_sets.txt");
    save_communities(path.string(), cs, vmap);
    const auto [loaded, stats] = load_communities(path.string(), vmap);
    REQUIRE(stats.dropped_members == 0);
    REQUIRE(loaded.communities == cs.communities);
}

TEST_CASE("vertex maps round-trip through CSV", "[io]") {
    const auto vmap = VertexMap::from_originals({42, 7, 19});
    const auto path = temp_file("vmap.csv");
    save_vertex_map(path.string(), vmap);
    const auto loaded = load_vertex_map(path.string());
    REQUIRE(loaded.to_original == vmap.to_original);
    REQUIRE(loaded.to_dense.at(19) == 2);

    const auto bad = temp_file("vmap_bad.csv");
    write_file(bad, "original,dense\n42,1\n");
    REQUIRE_THROWS_AS(load_vertex_map(bad.string()), io_error);
}

TEST_CASE("seed lists round-trip through files", "[io]") {
    const auto vmap = VertexMap::from_originals({42, 7, 19});
    const auto path = temp_file("seeds.txt");
    save_seed_list(path.string(), {2, 0}, vmap);
    const auto seeds = load_seed_list(path.string(), vmap);
    REQUIRE(seeds == std::vector<Vertex>{2, 0});

    const auto bad = temp_file("seeds_bad.txt");
    write_file(bad, "555\n");
    REQUIRE_THROWS_AS(load_seed_list(bad.string(), vmap), io_error);
}
