#pragma once

#include <gsp/error.hpp>
#include <gsp/graph.hpp>
#include <gsp/local_operator.hpp>
#include <gsp/spectral.hpp>
#include <gsp/tolerances.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gsp {

/// g(k) = (L^k f)(base), k = 0..K.
struct MomentSequence {
    Vertex base = 1;
    std::vector<double> values;
};

struct RecoveryDiagnostics {
    std::size_t requested_sparsity = 0;
    std::size_t hankel_rank = 0;
    std::size_t effective_sparsity = 0;  // distinct eigenvalues after root merging
    std::vector<double> hankel_singular_values;
    double max_imag_residue = 0.0;
    bool merged_roots = false;
};

/// Recovered eigenvalues (ascending) and, when available, the local
/// eigencomponents beta_j u_j restricted to the valid domain. Components
/// are aligned with `eigenvalues`; for a multiple eigenvalue the component
/// is the projection of f onto its eigenspace.
template <class Label>
struct RecoveryResult {
    std::vector<double> eigenvalues;
    std::vector<std::map<Label, double>> components;
    std::optional<std::vector<std::vector<std::size_t>>> matched_support;
    RecoveryDiagnostics diagnostics;
};

/// Null-space representative of a Hankel matrix, normalized to p_s = 1.
struct PronyPolynomial {
    Eigen::VectorXd coefficients;  // p_0 .. p_r, p_r = 1
    std::size_t effective_sparsity = 0;
    std::vector<double> singular_values;
};

struct RootSet {
    std::vector<double> roots;  // ascending
    double max_imag_residue = 0.0;
};

inline LocalOperator graph_operator(const Graph& g) {
    std::vector<std::vector<std::size_t>> metric(g.size());
    std::vector<std::string> labels(g.size());
    for (Vertex v = 1; static_cast<std::size_t>(v) <= g.size(); ++v) {
        for (Vertex w : g.neighbours(v)) metric[v - 1].push_back(static_cast<std::size_t>(w - 1));
        labels[v - 1] = std::to_string(v);
    }
    return LocalOperator(laplacian(g), std::move(metric), std::move(labels));
}

inline IndexField to_index_field(const VertexSamples& samples) {
    IndexField out;
    for (auto [v, value] : samples) {
        if (v >= 1) out[static_cast<std::size_t>(v - 1)] = value;
    }
    return out;
}

inline std::map<Vertex, double> to_vertex_field(const IndexField& field) {
    std::map<Vertex, double> out;
    for (auto [i, value] : field) out[static_cast<Vertex>(i + 1)] = value;
    return out;
}

inline MomentSequence local_moments(const Graph& g, const VertexSamples& samples, Vertex v, std::size_t K) {
    g.check(v, "moments");
    return {v, graph_operator(g).moments(to_index_field(samples), static_cast<std::size_t>(v - 1), K)};
}

/// H(k, l) = g(k + l), k = 0..s-1, l = 0..s.
inline Eigen::MatrixXd hankel(std::span<const double> moments, std::size_t s) {
    if (s < 1) throw_input("hankel", "sparsity must be at least 1");
    if (moments.size() < 2 * s) {
        throw_input("hankel", "need " + std::to_string(2 * s) + " moments, got " + std::to_string(moments.size()));
    }
    const auto rows = static_cast<Eigen::Index>(s);
    Eigen::MatrixXd H(rows, rows + 1);
    for (Eigen::Index k = 0; k < rows; ++k)
        for (Eigen::Index l = 0; l <= rows; ++l) H(k, l) = moments[static_cast<std::size_t>(k + l)];
    return H;
}

inline Eigen::MatrixXd hankel(const MomentSequence& m, std::size_t s) { return hankel(m.values, s); }

namespace detail {

inline std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

inline std::size_t numerical_rank(const Eigen::VectorXd& sv, double rel) {
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > rel * sv[0]) ++rank;
    return rank;
}

// Monic kernel polynomial of a matrix with exactly one null direction.
// Failures carry `report` as the diagnostic singular values.
inline Eigen::VectorXd monic_kernel(const Eigen::MatrixXd& M, const Tolerances& tol, const char* stage,
                                    const std::vector<double>& report) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const Eigen::Index cols = M.cols();
    if (numerical_rank(svd.singularValues(), tol.hankel_rank) + 1 != static_cast<std::size_t>(cols)) {
        throw Error(ErrorKind::model, stage, "kernel is not one-dimensional").with_singular_values(report);
    }
    Eigen::VectorXd p = svd.matrixV().col(cols - 1);
    const double last = p[cols - 1];
    if (std::abs(last) <= tol.kernel_last * p.norm()) {
        throw Error(ErrorKind::model, stage, "leading kernel coordinate vanishes").with_singular_values(report);
    }
    return p / last;
}

}  // namespace detail

/// Kernel of an s x (s+1) Hankel matrix. When the numerical rank r is below
/// s the leading r x (r+1) block is used instead and a degree-r polynomial
/// returned. Rank 0 yields the constant polynomial 1.
inline PronyPolynomial prony_polynomial(const Eigen::MatrixXd& H, const Tolerances& tol = {}) {
    if (H.rows() < 1 || H.cols() != H.rows() + 1) {
        throw_input("prony_polynomial", "expected an s x (s+1) matrix");
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(H);
    PronyPolynomial out;
    out.singular_values = detail::to_std(svd.singularValues());
    const std::size_t rank = detail::numerical_rank(svd.singularValues(), tol.hankel_rank);
    out.effective_sparsity = rank;
    if (rank == 0) {
        out.coefficients = Eigen::VectorXd::Ones(1);
        return out;
    }
    const auto r = static_cast<Eigen::Index>(rank);
    out.coefficients =
        detail::monic_kernel(H.topLeftCorner(r, r + 1), tol, "prony_polynomial", out.singular_values);
    return out;
}

/// Companion matrix with ones on the subdiagonal and -p_0..-p_{d-1} in the
/// last column.
inline Eigen::MatrixXd companion_matrix(const Eigen::VectorXd& p) {
    const Eigen::Index d = p.size() - 1;
    if (d < 1) throw_input("polynomial_roots", "polynomial degree must be at least 1");
    if (p[d] == 0.0) throw_input("polynomial_roots", "leading coefficient is zero");
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i) P(i, i - 1) = 1.0;
    P.col(d - 1) = -p.head(d) / p[d];
    return P;
}

inline RootSet polynomial_roots(const Eigen::VectorXd& p, const Tolerances& tol = {}) {
    const Eigen::MatrixXd P = companion_matrix(p);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(P, false);
    if (solver.info() != Eigen::Success) throw_model("polynomial_roots", "companion eigensolver failed");
    RootSet out;
    for (const auto& z : solver.eigenvalues()) {
        out.max_imag_residue = std::max(out.max_imag_residue, std::abs(z.imag()));
        if (std::abs(z.imag()) > tol.imag_part * (1.0 + std::abs(z.real()))) {
            throw_model("polynomial_roots", "root " + std::to_string(z.real()) + (z.imag() < 0 ? "" : "+") +
                                                std::to_string(z.imag()) + "i is not real");
        }
        out.roots.push_back(z.real());
    }
    std::sort(out.roots.begin(), out.roots.end());
    return out;
}

/// Merges sorted roots closer than tol.root_cluster * (1 + max|root|).
inline std::vector<double> cluster_roots(std::span<const double> sorted, const Tolerances& tol, bool* merged) {
    std::vector<double> out;
    double scale = 0.0;
    for (double x : sorted) scale = std::max(scale, std::abs(x));
    const double gap = tol.root_cluster * (1.0 + scale);
    if (merged) *merged = false;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i + 1;
        double sum = sorted[i];
        while (j < sorted.size() && sorted[j] - sorted[j - 1] < gap) sum += sorted[j++];
        if (j - i > 1 && merged) *merged = true;
        out.push_back(sum / static_cast<double>(j - i));
        i = j;
    }
    return out;
}

namespace detail {

// Evaluates prod_{k != j} (T - l_k I) / (l_j - l_k) applied to f on the
// ball of radius `out_radius`, one shifted application per ring.
inline std::vector<IndexField> local_components(const LocalOperator& op, const IndexField& samples,
                                                std::size_t centre, std::span<const double> eigenvalues,
                                                std::size_t out_radius, const Tolerances& tol) {
    std::vector<IndexField> out;
    if (eigenvalues.empty()) return out;
    const std::size_t m = eigenvalues.size();
    const std::size_t in_radius = out_radius + m - 1;
    const Ball b = op.ball(centre, in_radius);
    const IndexField f = op.gather(samples, b, in_radius, "components");
    double scale = 0.0;
    for (double x : eigenvalues) scale = std::max(scale, std::abs(x));
    for (std::size_t j = 0; j < m; ++j) {
        IndexField h = f;
        std::size_t r = in_radius;
        for (std::size_t k = 0; k < m; ++k) {
            if (k == j) continue;
            const double gap = eigenvalues[j] - eigenvalues[k];
            if (std::abs(gap) < tol.root_cluster * (1.0 + scale)) {
                throw_model("components", "eigenvalues " + std::to_string(eigenvalues[j]) + " and " +
                                              std::to_string(eigenvalues[k]) + " collide");
            }
            h = op.apply(h, b, r--, eigenvalues[k], 1.0 / gap);
        }
        out.push_back(std::move(h));
    }
    return out;
}

struct IndexRecovery {
    std::vector<double> eigenvalues;
    std::vector<IndexField> components;
    RecoveryDiagnostics diagnostics;
};

// Eigenvalue stage shared by single-neighbourhood recovery: moments ->
// Hankel -> kernel polynomial -> roots -> clustering.
inline IndexRecovery eigenvalues_from_hankel(const Eigen::MatrixXd& H, std::size_t s, const Tolerances& tol) {
    IndexRecovery rec;
    rec.diagnostics.requested_sparsity = s;
    const PronyPolynomial poly = prony_polynomial(H, tol);
    rec.diagnostics.hankel_singular_values = poly.singular_values;
    rec.diagnostics.hankel_rank = poly.effective_sparsity;
    if (poly.effective_sparsity == 0) return rec;
    const RootSet roots = polynomial_roots(poly.coefficients, tol);
    rec.diagnostics.max_imag_residue = roots.max_imag_residue;
    rec.eigenvalues = cluster_roots(roots.roots, tol, &rec.diagnostics.merged_roots);
    rec.diagnostics.effective_sparsity = rec.eigenvalues.size();
    return rec;
}

inline IndexRecovery recover_one(const LocalOperator& op, std::size_t centre, std::size_t s,
                                 const IndexField& samples, const Tolerances& tol) {
    if (s < 1) throw_input("recover", "sparsity must be at least 1");
    const std::vector<double> g = op.moments(samples, centre, 2 * s - 1);
    IndexRecovery rec = eigenvalues_from_hankel(hankel(g, s), s, tol);
    rec.components = local_components(op, samples, centre, rec.eigenvalues, s, tol);
    return rec;
}

}  // namespace detail

/// Components beta_j u_j on N(v, m) from samples on N(v, 2m - 1), where m
/// is the number of (distinct) eigenvalues supplied.
inline std::vector<std::map<Vertex, double>> local_components(const Graph& g, const VertexSamples& samples,
                                                              Vertex v, std::span<const double> eigenvalues,
                                                              const Tolerances& tol = {}) {
    g.check(v, "components");
    std::vector<std::map<Vertex, double>> out;
    for (const auto& field : detail::local_components(graph_operator(g), to_index_field(samples),
                                                      static_cast<std::size_t>(v - 1), eigenvalues,
                                                      eigenvalues.size(), tol)) {
        out.push_back(to_vertex_field(field));
    }
    return out;
}

/// Recovery from samples in N(v, 2s - 1): eigenvalues of the active
/// spectral support plus the local components on N(v, s).
inline RecoveryResult<Vertex> recover_one_neighbourhood(const Graph& g, Vertex v, std::size_t s,
                                                        const VertexSamples& samples, const Tolerances& tol = {}) {
    g.check(v, "recover");
    auto rec = detail::recover_one(graph_operator(g), static_cast<std::size_t>(v - 1), s, to_index_field(samples), tol);
    RecoveryResult<Vertex> out;
    out.eigenvalues = std::move(rec.eigenvalues);
    out.diagnostics = std::move(rec.diagnostics);
    for (const auto& field : rec.components) out.components.push_back(to_vertex_field(field));
    return out;
}

/// Single active eigenvalue from the one-ring of v:
/// lambda = (1 / f(v)) * sum_{w ~ v} (f(v) - f(w)), the sign following L = D - A.
inline double one_sparse_eigenvalue(const Graph& g, const VertexSamples& samples, Vertex v) {
    const auto g1 = local_moments(g, samples, v, 1);
    if (g1.values[0] == 0.0) throw_model("recover", "signal vanishes at the base vertex");
    return g1.values[1] / g1.values[0];
}

/// Basis indices (1-based) whose eigenvalue lies within `tol` of each
/// recovered eigenvalue.
struct SupportMatch {
    std::vector<std::vector<std::size_t>> clusters;

    bool is_plain() const {
        return std::all_of(clusters.begin(), clusters.end(), [](const auto& c) { return c.size() == 1; });
    }
    std::vector<std::size_t> support() const {
        std::vector<std::size_t> s;
        for (const auto& c : clusters) s.insert(s.end(), c.begin(), c.end());
        std::sort(s.begin(), s.end());
        return s;
    }
};

inline SupportMatch match_support(std::span<const double> eigenvalues, const SpectralBasis& basis, double tol) {
    SupportMatch out;
    for (double lambda : eigenvalues) {
        std::vector<std::size_t> cluster;
        for (std::size_t j = 1; j <= basis.size(); ++j)
            if (std::abs(basis.eigenvalue(j) - lambda) <= tol) cluster.push_back(j);
        if (cluster.empty()) {
            throw_model("match_support", "no basis eigenvalue within " + std::to_string(tol) + " of " +
                                             std::to_string(lambda));
        }
        out.clusters.push_back(std::move(cluster));
    }
    return out;
}

/// C(j, k) = nodes_j^k, k = 0..cols-1.
inline Eigen::MatrixXd power_matrix(std::span<const double> nodes, std::size_t cols) {
    Eigen::MatrixXd C(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        double p = 1.0;
        for (std::size_t k = 0; k < cols; ++k, p *= nodes[j])
            C(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = p;
    }
    return C;
}

}  // namespace gsp
