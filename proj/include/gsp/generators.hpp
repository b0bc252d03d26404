#pragma once

#include <gsp/graph.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace gsp {

inline Graph path_graph(std::size_t n) {
    if (n < 1) throw_input("generate", "path needs n >= 1");
    std::vector<Edge> edges;
    for (Vertex v = 1; static_cast<std::size_t>(v) < n; ++v) edges.emplace_back(v, v + 1);
    return Graph(n, edges);
}

inline Graph circle_graph(std::size_t n) {
    if (n < 3) throw_input("generate", "circle needs n >= 3");
    std::vector<Edge> edges;
    for (Vertex v = 1; static_cast<std::size_t>(v) < n; ++v) edges.emplace_back(v, v + 1);
    edges.emplace_back(static_cast<Vertex>(n), 1);
    return Graph(n, edges);
}

/// Rim 1-2-...-(n-2) drawn as a path, hub n-1 joined to every rim vertex,
/// pendant n hanging off the hub.
inline Graph umbrella_graph(std::size_t n) {
    if (n < 3) throw_input("generate", "umbrella needs n >= 3");
    const auto hub = static_cast<Vertex>(n - 1);
    const auto pendant = static_cast<Vertex>(n);
    std::vector<Edge> edges;
    for (Vertex v = 1; v < hub; ++v) {
        edges.emplace_back(v, hub);
        if (v + 1 < hub) edges.emplace_back(v, v + 1);
    }
    edges.emplace_back(hub, pendant);
    return Graph(n, edges);
}

inline constexpr int kMaxConnectAttempts = 1000;

/// G(n, p) conditioned on connectivity. Uses raw mt19937_64 output so the
/// result is identical on every standard library.
inline Graph erdos_renyi_graph(std::size_t n, double p, std::uint64_t seed) {
    if (n < 1) throw_input("generate", "erdos_renyi needs n >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw_input("generate", "probability must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int attempt = 0; attempt < kMaxConnectAttempts; ++attempt) {
        std::vector<Edge> edges;
        for (Vertex u = 1; static_cast<std::size_t>(u) <= n; ++u) {
            for (Vertex v = u + 1; static_cast<std::size_t>(v) <= n; ++v) {
                if (uniform() < p) edges.emplace_back(u, v);
            }
        }
        Graph g(n, edges);
        if (is_connected(g)) return g;
    }
    throw_input("generate", "no connected G(n, p) sample after " + std::to_string(kMaxConnectAttempts) +
                                " attempts");
}

enum class GraphKind { path, circle, umbrella, erdos_renyi };

inline GraphKind parse_graph_kind(std::string_view name) {
    if (name == "path") return GraphKind::path;
    if (name == "circle") return GraphKind::circle;
    if (name == "umbrella") return GraphKind::umbrella;
    if (name == "erdos_renyi" || name == "er") return GraphKind::erdos_renyi;
    throw_input("generate", "unknown graph kind '" + std::string(name) + "'");
}

inline Graph generate(GraphKind kind, std::size_t n, double p = 0.5, std::uint64_t seed = 0) {
    switch (kind) {
        case GraphKind::path: return path_graph(n);
        case GraphKind::circle: return circle_graph(n);
        case GraphKind::umbrella: return umbrella_graph(n);
        case GraphKind::erdos_renyi: return erdos_renyi_graph(n, p, seed);
    }
    throw_input("generate", "unknown graph kind");
}

}  // namespace gsp
