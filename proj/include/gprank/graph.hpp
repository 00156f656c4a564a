#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace gprank {

using Vertex = std::uint32_t;

constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

// Undirected graph in compressed sparse row form. Vertices are dense indices
// 0..n-1, adjacency rows are sorted ascending, duplicate edges are collapsed,
// and a self-loop is stored once in its own row (degree contribution 1).
class Graph {
public:
    Graph() = default;

    static Graph from_edges(std::size_t n, std::vector<std::pair<Vertex, Vertex>> edges) {
        for (auto& [u, v] : edges) {
            if (u >= n || v >= n)
                throw config_error("from_edges: endpoint out of range");
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

        Graph g;
        g.n_ = n;
        g.undirected_edges_ = edges.size();
        std::vector<std::size_t> deg(n, 0);
        for (const auto& [u, v] : edges) {
            ++deg[u];
            if (u != v) ++deg[v];
        }
        g.row_ptr_.assign(n + 1, 0);
        for (std::size_t v = 0; v < n; ++v) g.row_ptr_[v + 1] = g.row_ptr_[v] + deg[v];
        g.col_.resize(g.row_ptr_[n]);
        std::vector<std::size_t> cursor(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
        for (const auto& [u, v] : edges) {
            g.col_[cursor[u]++] = v;
            if (u != v) g.col_[cursor[v]++] = u;
        }
        for (std::size_t v = 0; v < n; ++v)
            std::sort(g.col_.begin() + static_cast<std::ptrdiff_t>(g.row_ptr_[v]),
                      g.col_.begin() + static_cast<std::ptrdiff_t>(g.row_ptr_[v + 1]));
        g.min_degree_ = n == 0 ? 0 : *std::min_element(deg.begin(), deg.end());
        return g;
    }

    std::size_t n() const { return n_; }

    // Undirected edge count; a self-loop counts once.
    std::size_t edge_count() const { return undirected_edges_; }

    std::size_t degree(Vertex v) const { return row_ptr_[v + 1] - row_ptr_[v]; }

    std::size_t min_degree() const { return min_degree_; }

    // Sum of degrees; equals the CSR entry count.
    std::size_t total_degree() const { return col_.size(); }

    std::span<const Vertex> neighbors(Vertex v) const {
        return {col_.data() + row_ptr_[v], col_.data() + row_ptr_[v + 1]};
    }

    bool has_edge(Vertex u, Vertex v) const {
        const auto row = neighbors(u);
        return std::binary_search(row.begin(), row.end(), v);
    }

    // Degree-proportional stationary distribution d / sum(d).
    std::vector<double> stationary_distribution() const {
        if (total_degree() == 0)
            throw numeric_error("stationary_distribution: graph has no edges");
        std::vector<double> pi(n_);
        const double total = static_cast<double>(total_degree());
        for (Vertex v = 0; v < n_; ++v)
            pi[v] = static_cast<double>(degree(v)) / total;
        return pi;
    }

private:
    std::size_t n_ = 0;
    std::size_t undirected_edges_ = 0;
    std::size_t min_degree_ = 0;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<Vertex> col_;
};

// Bijection between original vertex ids and dense indices. Preprocessing
// steps return one of these; chains compose so original ids survive a
// load -> component -> subgraph pipeline.
struct VertexMap {
    std::vector<std::uint64_t> to_original;
    std::unordered_map<std::uint64_t, Vertex> to_dense;

    std::size_t size() const { return to_original.size(); }

    static VertexMap identity(std::size_t n) {
        VertexMap m;
        m.to_original.resize(n);
        m.to_dense.reserve(n);
        for (std::size_t v = 0; v < n; ++v) {
            m.to_original[v] = v;
            m.to_dense.emplace(v, static_cast<Vertex>(v));
        }
        return m;
    }

    static VertexMap from_originals(std::vector<std::uint64_t> originals) {
        VertexMap m;
        m.to_original = std::move(originals);
        m.to_dense.reserve(m.to_original.size());
        for (std::size_t v = 0; v < m.to_original.size(); ++v)
            m.to_dense.emplace(m.to_original[v], static_cast<Vertex>(v));
        return m;
    }

    // `second` maps indices of the stage produced by `first`; the result maps
    // final dense indices straight back to first-stage originals.
    static VertexMap compose(const VertexMap& first, const VertexMap& second) {
        std::vector<std::uint64_t> originals(second.size());
        for (std::size_t v = 0; v < second.size(); ++v) {
            const std::uint64_t mid = second.to_original[v];
            if (mid >= first.size())
                throw config_error("VertexMap::compose: index out of range");
            originals[v] = first.to_original[mid];
        }
        return from_originals(std::move(originals));
    }
};

// Ground-truth communities as sorted vertex lists.
struct CommunitySet {
    std::vector<std::vector<Vertex>> communities;

    std::size_t size() const { return communities.size(); }
};

namespace detail {

inline void check_distribution(const Graph& g, const std::vector<double>& x) {
    if (x.size() != g.n())
        throw config_error("walk_step: vector length does not match vertex count");
    double sum = 0.0;
    for (double value : x) {
        if (value < 0.0)
            throw config_error("walk_step: negative mass entry");
        sum += value;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw config_error("walk_step: mass does not sum to 1");
}

// One step of x' = A D^{-1} x without precondition checks. Scatter order is
// fixed (ascending source, ascending neighbor), so results are reproducible
// bit for bit.
inline void walk_step_unchecked(const Graph& g, const std::vector<double>& x,
                                std::vector<double>& out) {
    out.assign(g.n(), 0.0);
    for (Vertex v = 0; v < g.n(); ++v) {
        if (x[v] == 0.0) continue;
        const double share = x[v] / static_cast<double>(g.degree(v));
        for (Vertex u : g.neighbors(v)) out[u] += share;
    }
}

} // namespace detail

// One lazy-free random-walk step x' = A D^{-1} x.
inline std::vector<double> walk_step(const Graph& g, const std::vector<double>& x) {
    detail::check_distribution(g, x);
    if (g.n() > 0 && g.min_degree() == 0)
        throw numeric_error("walk_step: graph has a zero-degree vertex");
    std::vector<double> out;
    detail::walk_step_unchecked(g, x, out);
    return out;
}

namespace detail {

// Subgraph induced by `keep` (sorted ascending); vertices are relabeled in
// that order. Neighbors outside `keep` are dropped.
inline std::pair<Graph, VertexMap> induced_subgraph(const Graph& g,
                                                    const std::vector<Vertex>& keep) {
    std::vector<Vertex> relabel(g.n(), kNoVertex);
    for (std::size_t i = 0; i < keep.size(); ++i) relabel[keep[i]] = static_cast<Vertex>(i);
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex v : keep) {
        for (Vertex u : g.neighbors(v)) {
            if (u < v) continue;
            if (relabel[u] == kNoVertex) continue;
            edges.emplace_back(relabel[v], relabel[u]);
        }
    }
    std::vector<std::uint64_t> originals(keep.begin(), keep.end());
    return {Graph::from_edges(keep.size(), std::move(edges)),
            VertexMap::from_originals(std::move(originals))};
}

} // namespace detail

// Largest connected component, relabeled in ascending input order. Ties on
// size go to the component containing the smallest vertex index.
inline std::pair<Graph, VertexMap> largest_connected_component(const Graph& g) {
    if (g.n() == 0)
        throw config_error("largest_connected_component: empty graph");
    std::vector<std::uint32_t> comp(g.n(), std::numeric_limits<std::uint32_t>::max());
    std::vector<std::size_t> comp_size;
    std::vector<Vertex> stack;
    for (Vertex start = 0; start < g.n(); ++start) {
        if (comp[start] != std::numeric_limits<std::uint32_t>::max()) continue;
        const auto id = static_cast<std::uint32_t>(comp_size.size());
        comp_size.push_back(0);
        comp[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            ++comp_size[id];
            for (Vertex u : g.neighbors(v)) {
                if (comp[u] == std::numeric_limits<std::uint32_t>::max()) {
                    comp[u] = id;
                    stack.push_back(u);
                }
            }
        }
    }
    std::uint32_t best = 0;
    for (std::uint32_t id = 1; id < comp_size.size(); ++id)
        if (comp_size[id] > comp_size[best]) best = id;
    std::vector<Vertex> keep;
    keep.reserve(comp_size[best]);
    for (Vertex v = 0; v < g.n(); ++v)
        if (comp[v] == best) keep.push_back(v);
    return detail::induced_subgraph(g, keep);
}

// Vertices within `hops` steps of the seed set, as an induced subgraph.
inline std::pair<Graph, VertexMap> bfs_subgraph(const Graph& g,
                                                const std::vector<Vertex>& seeds,
                                                std::size_t hops) {
    if (seeds.empty())
        throw config_error("bfs_subgraph: empty seed set");
    std::vector<std::size_t> dist(g.n(), std::numeric_limits<std::size_t>::max());
    std::queue<Vertex> frontier;
    for (Vertex s : seeds) {
        if (s >= g.n())
            throw config_error("bfs_subgraph: seed out of range");
        if (dist[s] == 0) continue;
        dist[s] = 0;
        frontier.push(s);
    }
    while (!frontier.empty()) {
        const Vertex v = frontier.front();
        frontier.pop();
        if (dist[v] == hops) continue;
        for (Vertex u : g.neighbors(v)) {
            if (dist[u] != std::numeric_limits<std::size_t>::max()) continue;
            dist[u] = dist[v] + 1;
            frontier.push(u);
        }
    }
    std::vector<Vertex> keep;
    for (Vertex v = 0; v < g.n(); ++v)
        if (dist[v] != std::numeric_limits<std::size_t>::max()) keep.push_back(v);
    return detail::induced_subgraph(g, keep);
}

// Longest BFS distance from the seed set to any non-seed vertex; 0 when the
// seeds cover the whole graph.
inline std::size_t max_seed_eccentricity(const Graph& g, const std::vector<Vertex>& seeds) {
    if (seeds.empty())
        throw config_error("max_seed_eccentricity: empty seed set");
    std::vector<std::size_t> dist(g.n(), std::numeric_limits<std::size_t>::max());
    std::queue<Vertex> frontier;
    for (Vertex s : seeds) {
        if (s >= g.n())
            throw config_error("max_seed_eccentricity: seed out of range");
        if (dist[s] == 0) continue;
        dist[s] = 0;
        frontier.push(s);
    }
    std::size_t farthest = 0;
    while (!frontier.empty()) {
        const Vertex v = frontier.front();
        frontier.pop();
        farthest = std::max(farthest, dist[v]);
        for (Vertex u : g.neighbors(v)) {
            if (dist[u] != std::numeric_limits<std::size_t>::max()) continue;
            dist[u] = dist[v] + 1;
            frontier.push(u);
        }
    }
    for (Vertex v = 0; v < g.n(); ++v)
        if (dist[v] == std::numeric_limits<std::size_t>::max())
            throw config_error("max_seed_eccentricity: vertex unreachable from seeds");
    return farthest;
}

} // namespace gprank
