#pragma once

#include <gsp/error.hpp>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gsp {

/// Vertex labels are 1-based throughout the public interface.
using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

/// Shortest-path length; std::nullopt marks "unreachable" (infinite distance).
using Distance = std::optional<std::size_t>;

/// Dense signal f: V -> R, entry v-1 holds f(v).
using Signal = Eigen::VectorXd;

/// Partial signal, vertex -> sampled value.
using VertexSamples = std::map<Vertex, double>;

/// Simple undirected graph on vertices 1..n. Immutable after construction.
class Graph {
public:
    Graph() = default;

    /// Deduplicates edges (either orientation). Throws on self-loops and
    /// out-of-range endpoints.
    Graph(std::size_t n, std::span<const Edge> edges) : n_(n), adjacency_(n) {
        for (auto [u, v] : edges) {
            if (u < 1 || v < 1 || static_cast<std::size_t>(u) > n || static_cast<std::size_t>(v) > n) {
                throw_input("build_graph", "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                               ") has an endpoint outside 1.." + std::to_string(n));
            }
            if (u == v) {
                throw_input("build_graph", "self-loop at vertex " + std::to_string(u));
            }
            edges_.emplace_back(std::min(u, v), std::max(u, v));
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        for (auto [u, v] : edges_) {
            adjacency_[u - 1].push_back(v);
            adjacency_[v - 1].push_back(u);
        }
        for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
    }

    Graph(std::size_t n, std::initializer_list<Edge> edges)
        : Graph(n, std::span<const Edge>(edges.begin(), edges.size())) {}

    std::size_t size() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    bool contains(Vertex v) const noexcept { return v >= 1 && static_cast<std::size_t>(v) <= n_; }

    std::span<const Vertex> neighbours(Vertex v) const {
        check(v, "neighbours");
        return adjacency_[v - 1];
    }

    std::size_t degree(Vertex v) const { return neighbours(v).size(); }

    void check(Vertex v, const char* stage) const {
        if (!contains(v)) {
            throw_input(stage, "vertex " + std::to_string(v) + " is not in 1.." + std::to_string(n_));
        }
    }

    friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> adjacency_;
};

inline Graph build_graph(std::size_t n, std::span<const Edge> edges) { return Graph(n, edges); }

/// Combinatorial Laplacian L = D - A in compressed sparse form.
inline Eigen::SparseMatrix<double> laplacian(const Graph& g) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(g.size() + 2 * g.edge_count());
    for (Vertex v = 1; static_cast<std::size_t>(v) <= g.size(); ++v) {
        triplets.emplace_back(v - 1, v - 1, static_cast<double>(g.degree(v)));
    }
    for (auto [u, v] : g.edges()) {
        triplets.emplace_back(u - 1, v - 1, -1.0);
        triplets.emplace_back(v - 1, u - 1, -1.0);
    }
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::SparseMatrix<double> L(n, n);
    L.setFromTriplets(triplets.begin(), triplets.end());
    return L;
}

inline constexpr std::size_t kMaxDenseVertices = 2000;

inline Eigen::MatrixXd dense_laplacian(const Graph& g) {
    if (g.size() > kMaxDenseVertices) {
        throw_input("laplacian", "dense materialization limited to " + std::to_string(kMaxDenseVertices) +
                                     " vertices");
    }
    return Eigen::MatrixXd(laplacian(g));
}

/// BFS distances from `source`; unreachable vertices map to std::nullopt.
/// Index v-1 holds d(source, v).
inline std::vector<Distance> distances_from(const Graph& g, Vertex source) {
    g.check(source, "distance");
    std::vector<Distance> dist(g.size());
    std::queue<Vertex> queue;
    dist[source - 1] = 0;
    queue.push(source);
    while (!queue.empty()) {
        const Vertex u = queue.front();
        queue.pop();
        for (Vertex w : g.neighbours(u)) {
            if (!dist[w - 1]) {
                dist[w - 1] = *dist[u - 1] + 1;
                queue.push(w);
            }
        }
    }
    return dist;
}

inline Distance distance(const Graph& g, Vertex v, Vertex w) {
    g.check(w, "distance");
    return distances_from(g, v)[w - 1];
}

/// N(v, k) = {w : d(w, v) <= k}, ascending.
inline std::vector<Vertex> neighbourhood(const Graph& g, Vertex v, std::size_t k) {
    g.check(v, "neighbourhood");
    std::vector<Vertex> out;
    const auto dist = distances_from(g, v);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i] && *dist[i] <= k) out.push_back(static_cast<Vertex>(i + 1));
    }
    return out;
}

inline bool is_connected(const Graph& g) {
    if (g.size() == 0) return true;
    const auto dist = distances_from(g, 1);
    return std::all_of(dist.begin(), dist.end(), [](const Distance& d) { return d.has_value(); });
}

/// Restriction f_W of a dense signal.
inline VertexSamples restrict_signal(const Signal& f, std::span<const Vertex> vertices) {
    VertexSamples out;
    for (Vertex v : vertices) {
        if (v < 1 || v > f.size()) throw_input("restrict", "vertex " + std::to_string(v) + " out of range");
        out[v] = f[v - 1];
    }
    return out;
}

}  // namespace gsp
