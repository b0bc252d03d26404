#pragma once

#include <gsp/error.hpp>
#include <gsp/local_operator.hpp>
#include <gsp/multi_snapshot.hpp>
#include <gsp/prony.hpp>
#include <gsp/spectral.hpp>
#include <gsp/tolerances.hpp>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace gsp {

/// A k-face as its ascending list of k+1 vertex labels. The ascending order
/// fixes the orientation.
using Face = std::vector<int>;
using FaceSamples = std::map<Face, double>;

inline std::string face_label(const Face& f) {
    std::string s = "{";
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + std::to_string(f[i]);
    return s + "}";
}

inline constexpr std::size_t kMaxFacetSize = 16;

/// Downward-closed family of faces, stored per dimension in lexicographic
/// order.
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    explicit SimplicialComplex(std::span<const Face> facets) {
        if (facets.empty()) throw_input("build_complex", "facet list is empty");
        std::vector<std::set<Face>> levels;
        for (Face f : facets) {
            if (f.empty()) throw_input("build_complex", "empty facet");
            if (f.size() > kMaxFacetSize) throw_input("build_complex", "facet larger than 16 vertices");
            std::sort(f.begin(), f.end());
            if (std::adjacent_find(f.begin(), f.end()) != f.end())
                throw_input("build_complex", "facet " + face_label(f) + " repeats a vertex");
            if (f.front() < 1) throw_input("build_complex", "vertex labels must be positive");
            if (levels.size() < f.size()) levels.resize(f.size());
            const std::uint32_t subsets = 1u << f.size();
            for (std::uint32_t mask = 1; mask < subsets; ++mask) {
                Face sub;
                for (std::size_t i = 0; i < f.size(); ++i)
                    if (mask & (1u << i)) sub.push_back(f[i]);
                levels[sub.size() - 1].insert(std::move(sub));
            }
        }
        for (auto& level : levels) {
            faces_.emplace_back(level.begin(), level.end());
            auto& index = index_.emplace_back();
            for (std::size_t i = 0; i < faces_.back().size(); ++i) index[faces_.back()[i]] = i;
        }
    }

    explicit SimplicialComplex(std::initializer_list<Face> facets)
        : SimplicialComplex(std::span<const Face>(facets.begin(), facets.size())) {}

    std::size_t top_dimension() const noexcept { return faces_.size() - 1; }
    std::size_t dimension_count() const noexcept { return faces_.size(); }

    std::span<const Face> faces(std::size_t k) const {
        if (k >= faces_.size()) return {};
        return faces_[k];
    }
    std::size_t count(std::size_t k) const { return faces(k).size(); }
    std::size_t total_faces() const {
        std::size_t t = 0;
        for (const auto& level : faces_) t += level.size();
        return t;
    }

    std::optional<std::size_t> index_of(const Face& f) const {
        if (f.empty() || f.size() > faces_.size()) return std::nullopt;
        auto it = index_[f.size() - 1].find(f);
        if (it == index_[f.size() - 1].end()) return std::nullopt;
        return it->second;
    }

    /// Maximal faces, in dimension then lexicographic order.
    std::vector<Face> facets() const {
        std::vector<Face> out;
        for (std::size_t k = 0; k < faces_.size(); ++k) {
            for (const Face& f : faces_[k]) {
                bool maximal = true;
                if (k + 1 < faces_.size()) {
                    for (const Face& g : faces_[k + 1])
                        if (std::includes(g.begin(), g.end(), f.begin(), f.end())) {
                            maximal = false;
                            break;
                        }
                }
                if (maximal) out.push_back(f);
            }
        }
        return out;
    }

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) { return a.faces_ == b.faces_; }

private:
    std::vector<std::vector<Face>> faces_;
    std::vector<std::map<Face, std::size_t>> index_;
};

inline SimplicialComplex build_complex(std::span<const Face> facets) { return SimplicialComplex(facets); }

/// k-chain in the complex's canonical face order.
struct Chain {
    std::size_t k = 0;
    Eigen::VectorXd values;
};

/// Signed incidence matrix of d_k : C_k -> C_{k-1}; entry (-1)^i at the face
/// obtained by dropping the i-th vertex.
inline Eigen::MatrixXi boundary_matrix(const SimplicialComplex& cx, std::size_t k) {
    if (k < 1 || k > cx.top_dimension()) {
        throw_input("boundary_matrix", "k must lie in 1.." + std::to_string(cx.top_dimension()));
    }
    const auto faces = cx.faces(k);
    Eigen::MatrixXi D = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(cx.count(k - 1)),
                                              static_cast<Eigen::Index>(faces.size()));
    for (std::size_t c = 0; c < faces.size(); ++c) {
        for (std::size_t i = 0; i <= k; ++i) {
            Face sub = faces[c];
            sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
            D(static_cast<Eigen::Index>(*cx.index_of(sub)), static_cast<Eigen::Index>(c)) = (i % 2 == 0) ? 1 : -1;
        }
    }
    return D;
}

struct HodgeLaplacian {
    Eigen::MatrixXd full;
    Eigen::MatrixXd up;
    Eigen::MatrixXd down;
};

/// L_k = d_k^T d_k + d_{k+1} d_{k+1}^T; absent boundary maps contribute zero.
inline HodgeLaplacian hodge_laplacian(const SimplicialComplex& cx, std::size_t k) {
    if (k > cx.top_dimension()) throw_input("hodge_laplacian", "k exceeds the top dimension");
    const auto m = static_cast<Eigen::Index>(cx.count(k));
    HodgeLaplacian L{Eigen::MatrixXd::Zero(m, m), Eigen::MatrixXd::Zero(m, m), Eigen::MatrixXd::Zero(m, m)};
    if (k >= 1) {
        const Eigen::MatrixXi D = boundary_matrix(cx, k);
        L.down = (D.transpose() * D).cast<double>();
    }
    if (k + 1 <= cx.top_dimension()) {
        const Eigen::MatrixXi D = boundary_matrix(cx, k + 1);
        L.up = (D * D.transpose()).cast<double>();
    }
    L.full = L.up + L.down;
    return L;
}

/// Dimension of the k-th real homology, as the numerical nullity of L_k.
inline std::size_t betti(const SimplicialComplex& cx, std::size_t k, const Tolerances& tol = {}) {
    if (k > cx.top_dimension()) return 0;
    const SpectralBasis b = eigendecompose(hodge_laplacian(cx, k).full, tol);
    if (b.size() == 0) return 0;
    const double cut = tol.nullity * std::max(1.0, b.eigenvalues.maxCoeff());
    std::size_t nullity = 0;
    for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i)
        if (b.eigenvalues[i] < cut) ++nullity;
    return nullity;
}

/// Nonzero eigenpairs of L_k^UP and L_k^DN plus an orthonormal basis of
/// ker L_k.
struct HodgeDecomposition {
    Eigen::VectorXd up_values;
    Eigen::MatrixXd up_vectors;
    Eigen::VectorXd down_values;
    Eigen::MatrixXd down_vectors;
    Eigen::MatrixXd harmonic;
};

inline HodgeDecomposition hodge_decomposition(const SimplicialComplex& cx, std::size_t k, const Tolerances& tol = {}) {
    const HodgeLaplacian L = hodge_laplacian(cx, k);
    auto nonzero = [&](const Eigen::MatrixXd& A, Eigen::VectorXd& values, Eigen::MatrixXd& vectors, bool keep_zero) {
        const SpectralBasis b = eigendecompose(A, tol);
        const double cut = tol.nullity * std::max(1.0, b.size() ? b.eigenvalues.maxCoeff() : 0.0);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i)
            if ((b.eigenvalues[i] >= cut) != keep_zero) keep.push_back(i);
        values.resize(static_cast<Eigen::Index>(keep.size()));
        vectors.resize(A.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t c = 0; c < keep.size(); ++c) {
            values[static_cast<Eigen::Index>(c)] = b.eigenvalues[keep[c]];
            vectors.col(static_cast<Eigen::Index>(c)) = b.vectors.col(keep[c]);
        }
    };
    HodgeDecomposition out;
    nonzero(L.up, out.up_values, out.up_vectors, false);
    nonzero(L.down, out.down_values, out.down_vectors, false);
    Eigen::VectorXd zero_values;
    nonzero(L.full, zero_values, out.harmonic, true);
    return out;
}

/// k-faces are adjacent when they share a (k-1)-face; 0-faces use the
/// edges of the 1-skeleton.
inline std::vector<std::vector<std::size_t>> face_adjacency(const SimplicialComplex& cx, std::size_t k) {
    std::vector<std::vector<std::size_t>> adj(cx.count(k));
    if (k == 0) {
        for (const Face& e : cx.faces(1)) {
            const std::size_t a = *cx.index_of({e[0]}), b = *cx.index_of({e[1]});
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
    } else {
        std::map<Face, std::vector<std::size_t>> cofaces;
        const auto faces = cx.faces(k);
        for (std::size_t c = 0; c < faces.size(); ++c) {
            for (std::size_t i = 0; i <= k; ++i) {
                Face sub = faces[c];
                sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(i));
                cofaces[sub].push_back(c);
            }
        }
        for (const auto& [sub, list] : cofaces)
            for (std::size_t a : list)
                for (std::size_t b : list)
                    if (a != b) adj[a].push_back(b);
    }
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return adj;
}

inline std::size_t face_index(const SimplicialComplex& cx, const Face& sigma, const char* stage) {
    auto idx = cx.index_of(sigma);
    if (!idx) throw_input(stage, face_label(sigma) + " is not a face of the complex");
    return *idx;
}

/// N(sigma, d) over same-dimensional faces, canonical order.
inline std::vector<Face> face_neighbourhood(const SimplicialComplex& cx, const Face& sigma, std::size_t d) {
    const std::size_t idx = face_index(cx, sigma, "face_neighbourhood");
    const std::size_t k = sigma.size() - 1;
    std::vector<std::vector<std::size_t>> metric = face_adjacency(cx, k);
    std::vector<std::optional<std::size_t>> dist(metric.size());
    std::vector<std::size_t> frontier{idx};
    dist[idx] = 0;
    for (std::size_t r = 1; r <= d && !frontier.empty(); ++r) {
        std::vector<std::size_t> next;
        for (std::size_t u : frontier)
            for (std::size_t w : metric[u])
                if (!dist[w]) {
                    dist[w] = r;
                    next.push_back(w);
                }
        frontier = std::move(next);
    }
    std::vector<Face> out;
    const auto faces = cx.faces(k);
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist[i]) out.push_back(faces[i]);
    return out;
}

enum class HodgePart { up, down, full };

inline const char* to_string(HodgePart p) {
    switch (p) {
        case HodgePart::up: return "up";
        case HodgePart::down: return "down";
        case HodgePart::full: return "full";
    }
    return "?";
}

/// The chosen Hodge operator as a LocalOperator over the face metric.
/// Throws if the operator couples faces at face distance > 1.
inline LocalOperator face_operator(const SimplicialComplex& cx, std::size_t k, HodgePart part) {
    const HodgeLaplacian L = hodge_laplacian(cx, k);
    const Eigen::MatrixXd& M = part == HodgePart::up ? L.up : part == HodgePart::down ? L.down : L.full;
    std::vector<std::string> labels;
    for (const Face& f : cx.faces(k)) labels.push_back(face_label(f));
    return LocalOperator(M.sparseView(), face_adjacency(cx, k), std::move(labels));
}

inline IndexField to_index_field(const SimplicialComplex& cx, std::size_t k, const FaceSamples& samples) {
    IndexField out;
    for (const auto& [face, value] : samples) {
        if (face.size() != k + 1) throw_input("samples", face_label(face) + " is not a " + std::to_string(k) + "-face");
        out[face_index(cx, face, "samples")] = value;
    }
    return out;
}

inline std::map<Face, double> to_face_field(const SimplicialComplex& cx, std::size_t k, const IndexField& field) {
    std::map<Face, double> out;
    const auto faces = cx.faces(k);
    for (auto [i, value] : field) out[faces[i]] = value;
    return out;
}

inline FaceSamples chain_samples(const SimplicialComplex& cx, const Chain& chain) {
    const auto faces = cx.faces(chain.k);
    if (static_cast<std::size_t>(chain.values.size()) != faces.size())
        throw_input("chain", "chain length does not match the number of faces");
    FaceSamples out;
    for (std::size_t i = 0; i < faces.size(); ++i) out[faces[i]] = chain.values[static_cast<Eigen::Index>(i)];
    return out;
}

inline RecoveryResult<Face> to_face_result(const SimplicialComplex& cx, std::size_t k, detail::IndexRecovery rec) {
    RecoveryResult<Face> out;
    out.eigenvalues = std::move(rec.eigenvalues);
    out.diagnostics = std::move(rec.diagnostics);
    for (const auto& field : rec.components) out.components.push_back(to_face_field(cx, k, field));
    return out;
}

/// Single-face recovery for a signal living in the nonzero eigenspaces of
/// T in {UP, DN}: eigenvalues plus components on N(sigma, s).
inline RecoveryResult<Face> recover_simplicial_one(const SimplicialComplex& cx, std::size_t k, HodgePart part,
                                                   const Face& sigma, std::size_t s, const FaceSamples& samples,
                                                   const Tolerances& tol = {}) {
    if (sigma.size() != k + 1) throw_input("recover_simplicial", face_label(sigma) + " is not a k-face");
    const std::size_t idx = face_index(cx, sigma, "recover_simplicial");
    return to_face_result(
        cx, k, detail::recover_one(face_operator(cx, k, part), idx, s, to_index_field(cx, k, samples), tol));
}

using FacePlan = BasicSnapshotPlan<Face>;

/// Stacked-Hankel eigenvalue recovery over face anchors with sum r_i = s.
inline RecoveryResult<Face> recover_simplicial_multi(const SimplicialComplex& cx, std::size_t k, HodgePart part,
                                                     const FacePlan& plan, std::size_t s, const FaceSamples& samples,
                                                     const Tolerances& tol = {}) {
    plan.validate();
    if (plan.total_radius() != s) throw_input("recover_simplicial_multi", "anchor radii must sum to s");
    std::vector<std::size_t> centres, radii;
    for (const auto& a : plan.anchors) {
        if (a.where.size() != k + 1) throw_input("recover_simplicial_multi", face_label(a.where) + " is not a k-face");
        centres.push_back(face_index(cx, a.where, "recover_simplicial_multi"));
        radii.push_back(a.radius);
    }
    return to_face_result(cx, k,
                          detail::recover_multi(face_operator(cx, k, part), centres, radii, s,
                                                to_index_field(cx, k, samples), tol));
}

/// Result of recovering the UP and DN parts separately.
struct SplitRecovery {
    /// Components rescaled to beta_j u_j.
    RecoveryResult<Face> up;
    RecoveryResult<Face> down;
    /// Components of L^UP f and L^DN f as recovered, beta_j lambda_j u_j.
    std::vector<std::map<Face, double>> up_raw;
    std::vector<std::map<Face, double>> down_raw;
    /// f minus the sum of rescaled components on N(sigma, domain_radius).
    std::map<Face, double> residual;
    std::size_t domain_radius = 0;
    double max_residual = 0.0;
    bool harmonic_detected = false;
};

namespace detail {

inline double max_abs(const IndexField& h) {
    double m = 0.0;
    for (auto [i, v] : h) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace detail

/// Recovers f through L^UP f and L^DN f from samples on N(sigma, 2s). Both
/// parts are first tried at sparsity ceil(s/2); the part with the smaller
/// detected size is exact, and the other is re-run with the remaining
/// budget. The residual on the common valid domain exposes any harmonic
/// content, which this procedure cannot recover.
inline SplitRecovery split_recover(const SimplicialComplex& cx, std::size_t k, const Face& sigma, std::size_t s,
                                   const FaceSamples& samples, const Tolerances& tol = {}) {
    if (s < 1) throw_input("split_recover", "sparsity must be at least 1");
    if (sigma.size() != k + 1) throw_input("split_recover", face_label(sigma) + " is not a k-face");
    const std::size_t centre = face_index(cx, sigma, "split_recover");
    const LocalOperator up = face_operator(cx, k, HodgePart::up);
    const LocalOperator down = face_operator(cx, k, HodgePart::down);
    const Ball ball = up.ball(centre, 2 * s);
    const IndexField f = up.gather(to_index_field(cx, k, samples), ball, 2 * s, "split_recover");
    const double f_scale = detail::max_abs(f);

    struct Side {
        const LocalOperator* op;
        IndexField field;
        bool empty = false;
        std::optional<detail::IndexRecovery> rec;
        std::size_t requested = 0;
    };
    Side sides[2] = {{&up, up.apply(f, ball, 2 * s), false, std::nullopt, 0},
                     {&down, down.apply(f, ball, 2 * s), false, std::nullopt, 0}};
    for (Side& side : sides) {
        side.empty = detail::max_abs(side.field) <= tol.zero_signal * (1.0 + side.op->norm()) * f_scale;
    }

    auto attempt = [&](Side& side, std::size_t budget) {
        side.requested = budget;
        try {
            side.rec = detail::recover_one(*side.op, centre, budget, side.field, tol);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::model) throw;
            side.rec.reset();
        }
    };
    auto detected = [](const Side& side) -> std::optional<std::size_t> {
        if (side.empty) return 0;
        if (side.rec) return side.rec->eigenvalues.size();
        return std::nullopt;
    };

    const std::size_t half = (s + 1) / 2;
    for (Side& side : sides)
        if (!side.empty) attempt(side, half);
    const auto d_up = detected(sides[0]), d_down = detected(sides[1]);
    if (!d_up && !d_down) throw_model("split_recover", "neither the UP nor the DN part could be recovered");
    const std::size_t anchor = (!d_down || (d_up && *d_up <= *d_down)) ? 0 : 1;
    Side& other = sides[1 - anchor];
    const std::size_t known = *detected(sides[anchor]);
    if (!other.empty) {
        if (known >= s) throw_model("split_recover", "sparsity budget exhausted before the second part");
        attempt(other, s - known);
        if (!other.rec) throw_model("split_recover", std::string("the ") + (anchor ? "UP" : "DN") +
                                                         " part failed with the remaining sparsity budget");
    }

    SplitRecovery out;
    std::size_t radius = 2 * s;
    IndexField total;
    for (std::size_t side_index = 0; side_index < 2; ++side_index) {
        const Side& side = sides[side_index];
        RecoveryResult<Face>& result = side_index == 0 ? out.up : out.down;
        auto& raw = side_index == 0 ? out.up_raw : out.down_raw;
        result.diagnostics.requested_sparsity = side.requested;
        if (side.empty || !side.rec) continue;
        const detail::IndexRecovery& rec = *side.rec;
        result.eigenvalues = rec.eigenvalues;
        result.diagnostics = rec.diagnostics;
        if (rec.eigenvalues.empty()) continue;
        radius = std::min(radius, side.requested);
        for (std::size_t j = 0; j < rec.eigenvalues.size(); ++j) {
            const double lambda = rec.eigenvalues[j];
            if (std::abs(lambda) <= tol.root_cluster * (1.0 + side.op->norm())) {
                throw_model("split_recover", "recovered a zero eigenvalue in a non-harmonic part");
            }
            raw.push_back(to_face_field(cx, k, rec.components[j]));
            IndexField scaled;
            for (auto [i, value] : rec.components[j]) scaled[i] = value / lambda;
            result.components.push_back(to_face_field(cx, k, scaled));
        }
    }
    out.domain_radius = radius;
    for (std::size_t i : ball.members(radius)) {
        double r = f.at(i);
        for (const auto* part : {&out.up, &out.down})
            for (const auto& comp : part->components) r -= comp.at(cx.faces(k)[i]);
        out.residual[cx.faces(k)[i]] = r;
        out.max_residual = std::max(out.max_residual, std::abs(r));
    }
    out.harmonic_detected = out.max_residual > tol.harmonic_residual * std::max(f_scale, 1e-300);
    return out;
}

// ---------------------------------------------------------------------------
// generators

/// Facets {i, i+1, i+2}, i = 1..triangles.
inline SimplicialComplex triangle_strip(std::size_t triangles) {
    if (triangles < 1) throw_input("generate", "strip needs at least one triangle");
    std::vector<Face> facets;
    for (int i = 1; static_cast<std::size_t>(i) <= triangles; ++i) facets.push_back({i, i + 1, i + 2});
    return SimplicialComplex(facets);
}

/// Random complex on `vertices` vertices from `facets` random facets of
/// dimension 1..max_dim; reproducible under `seed`.
inline SimplicialComplex random_complex(std::size_t vertices, std::size_t facets, std::size_t max_dim,
                                        std::uint64_t seed) {
    if (vertices < 2 || facets < 1 || max_dim < 1) throw_input("generate", "invalid random complex parameters");
    std::mt19937_64 rng(seed);
    std::vector<Face> list;
    for (std::size_t i = 0; i < facets; ++i) {
        const std::size_t size = 2 + rng() % std::min(max_dim, vertices - 1);
        std::vector<int> pool(vertices);
        for (std::size_t v = 0; v < vertices; ++v) pool[v] = static_cast<int>(v + 1);
        Face f;
        for (std::size_t j = 0; j < size; ++j) {
            const std::size_t pick = j + rng() % (vertices - j);
            std::swap(pool[j], pool[pick]);
            f.push_back(pool[j]);
        }
        list.push_back(std::move(f));
    }
    return SimplicialComplex(list);
}

}  // namespace gsp
