#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"

namespace gprank {

namespace detail {

// Parses whitespace-separated nonnegative integers from one line.
inline bool parse_ids(const std::string& line, std::vector<std::uint64_t>& out) {
    out.clear();
    const char* p = line.c_str();
    while (*p != '\0') {
        while (*p == ' ' || *p == '\t' || *p == '\r') ++p;
        if (*p == '\0') break;
        if (*p < '0' || *p > '9') return false;
        char* end = nullptr;
        errno = 0;
        const std::uint64_t value = std::strtoull(p, &end, 10);
        if (errno != 0 || end == p) return false;
        out.push_back(value);
        p = end;
    }
    return true;
}

inline bool is_blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

} // namespace detail

// Reads a whitespace-separated "u v" edge list with '#' comment lines.
// Dense indices are assigned in order of first appearance; the returned map
// recovers the original ids.
inline std::pair<Graph, VertexMap> load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open edge list: " + path);
    VertexMap vmap;
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<std::uint64_t> ids;
    std::string line;
    std::size_t line_no = 0;
    auto intern = [&vmap](std::uint64_t id) {
        const auto [it, inserted] =
            vmap.to_dense.emplace(id, static_cast<Vertex>(vmap.to_original.size()));
        if (inserted) vmap.to_original.push_back(id);
        return it->second;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_blank_or_comment(line)) continue;
        if (!detail::parse_ids(line, ids) || ids.size() != 2)
            throw io_error(path + ":" + std::to_string(line_no) + ": expected \"u v\"");
        const Vertex u = intern(ids[0]);
        const Vertex v = intern(ids[1]);
        edges.emplace_back(u, v);
    }
    if (edges.empty()) throw io_error("edge list has no edges: " + path);
    return {Graph::from_edges(vmap.size(), std::move(edges)), std::move(vmap)};
}

inline void save_edge_list(const std::string& path, const Graph& g, const VertexMap& vmap) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write edge list: " + path);
    out << "# nodes: " << g.n() << " edges: " << g.edge_count() << "\n";
    for (Vertex v = 0; v < g.n(); ++v)
        for (Vertex u : g.neighbors(v))
            if (v <= u) out << vmap.to_original[v] << ' ' << vmap.to_original[u] << '\n';
    if (!out) throw io_error("write failed: " + path);
}

struct CommunityLoadStats {
    std::size_t dropped_members = 0;
    std::size_t skipped_lines = 0;
};

// Reads one community per line (original ids), remapping through `vmap`.
// Members absent from the map are dropped and counted; lines left empty by
// the dropping are skipped and counted.
inline std::pair<CommunitySet, CommunityLoadStats> load_communities(const std::string& path,
                                                                    const VertexMap& vmap) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open community file: " + path);
    CommunitySet cs;
    CommunityLoadStats stats;
    std::string line;
    std::vector<std::uint64_t> ids;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_blank_or_comment(line)) continue;
        if (!detail::parse_ids(line, ids))
            throw io_error(path + ":" + std::to_string(line_no) + ": expected vertex ids");
        std::vector<Vertex> members;
        members.reserve(ids.size());
        for (std::uint64_t id : ids) {
            const auto it = vmap.to_dense.find(id);
            if (it == vmap.to_dense.end()) {
                ++stats.dropped_members;
                continue;
            }
            members.push_back(it->second);
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (members.empty()) {
            ++stats.skipped_lines;
            continue;
        }
        cs.communities.push_back(std::move(members));
    }
    return {std::move(cs), stats};
}

inline void save_communities(const std::string& path, const CommunitySet& cs,
                             const VertexMap& vmap) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write community file: " + path);
    for (const auto& community : cs.communities) {
        for (std::size_t i = 0; i < community.size(); ++i) {
            if (i > 0) out << ' ';
            out << vmap.to_original[community[i]];
        }
        out << '\n';
    }
    if (!out) throw io_error("write failed: " + path);
}

// Two-column CSV "original,dense", one row per vertex in dense order.
inline void save_vertex_map(const std::string& path, const VertexMap& vmap) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write vertex map: " + path);
    out << "original,dense\n";
    for (std::size_t v = 0; v < vmap.size(); ++v)
        out << vmap.to_original[v] << ',' << v << '\n';
    if (!out) throw io_error("write failed: " + path);
}

inline VertexMap load_vertex_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open vertex map: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("original,dense", 0) != 0)
        throw io_error("vertex map missing header: " + path);
    std::vector<std::uint64_t> originals;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_blank_or_comment(line)) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw io_error(path + ":" + std::to_string(line_no) + ": expected original,dense");
        errno = 0;
        char* end = nullptr;
        const std::uint64_t original = std::strtoull(line.c_str(), &end, 10);
        const std::uint64_t dense = std::strtoull(line.c_str() + comma + 1, nullptr, 10);
        if (errno != 0 || end != line.c_str() + comma || dense != originals.size())
            throw io_error(path + ":" + std::to_string(line_no) + ": bad vertex map row");
        originals.push_back(original);
    }
    return VertexMap::from_originals(std::move(originals));
}

inline void save_seed_list(const std::string& path, const std::vector<Vertex>& seeds,
                           const VertexMap& vmap) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write seed list: " + path);
    for (Vertex s : seeds) out << vmap.to_original[s] << '\n';
    if (!out) throw io_error("write failed: " + path);
}

inline std::vector<Vertex> load_seed_list(const std::string& path, const VertexMap& vmap) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open seed list: " + path);
    std::vector<Vertex> seeds;
    std::vector<std::uint64_t> ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::is_blank_or_comment(line)) continue;
        if (!detail::parse_ids(line, ids) || ids.size() != 1)
            throw io_error(path + ":" + std::to_string(line_no) + ": expected one vertex id");
        const auto it = vmap.to_dense.find(ids[0]);
        if (it == vmap.to_dense.end())
            throw io_error(path + ":" + std::to_string(line_no) + ": unknown vertex id");
        seeds.push_back(it->second);
    }
    return seeds;
}

} // namespace gprank
