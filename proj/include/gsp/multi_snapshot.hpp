#pragma once

#include <gsp/prony.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <set>
#include <span>
#include <vector>

namespace gsp {

template <class Label>
struct BasicAnchor {
    Label where;
    std::size_t radius = 1;
};

/// Anchors (v_i, r_i) of a multi-snapshot sampling scheme.
template <class Label>
struct BasicSnapshotPlan {
    std::vector<BasicAnchor<Label>> anchors;

    std::size_t total_radius() const {
        std::size_t r = 0;
        for (const auto& a : anchors) r += a.radius;
        return r;
    }

    void validate() const {
        if (anchors.empty()) throw_input("snapshot_plan", "plan has no anchors");
        std::set<Label> seen;
        for (const auto& a : anchors) {
            if (a.radius < 1) throw_input("snapshot_plan", "anchor radius must be at least 1");
            if (!seen.insert(a.where).second) throw_input("snapshot_plan", "anchors must be distinct");
        }
    }
};

using Anchor = BasicAnchor<Vertex>;
using SnapshotPlan = BasicSnapshotPlan<Vertex>;

/// W = union of N(v_i, s - 1 + r_i), ascending.
inline std::vector<Vertex> required_samples(const Graph& g, const SnapshotPlan& plan, std::size_t s) {
    plan.validate();
    if (s < 1) throw_input("required_samples", "sparsity must be at least 1");
    std::set<Vertex> W;
    for (const auto& a : plan.anchors) {
        for (Vertex w : neighbourhood(g, a.where, s - 1 + a.radius)) W.insert(w);
    }
    return {W.begin(), W.end()};
}

namespace detail {

// Block i holds rows (g_i(l), ..., g_i(l + s)), l = 0..r_i - 1.
inline Eigen::MatrixXd stacked_hankel(std::span<const std::vector<double>> moments,
                                      std::span<const std::size_t> radii, std::size_t s) {
    std::size_t rows = 0;
    for (std::size_t r : radii) rows += r;
    Eigen::MatrixXd H(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(s + 1));
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (moments[i].size() < s + radii[i]) {
            throw_input("stacked_hankel", "anchor " + std::to_string(i + 1) + " needs " +
                                              std::to_string(s + radii[i]) + " moments, got " +
                                              std::to_string(moments[i].size()));
        }
        for (std::size_t l = 0; l < radii[i]; ++l, ++row)
            for (std::size_t c = 0; c <= s; ++c) H(row, static_cast<Eigen::Index>(c)) = moments[i][l + c];
    }
    return H;
}

// Eigenvalues from a stacked Hankel matrix; the kernel must be exactly
// one-dimensional, otherwise a rank-deficiency error with the singular
// values is raised before any roots are taken.
inline IndexRecovery eigenvalues_from_stacked(const Eigen::MatrixXd& H, std::size_t s, const Tolerances& tol) {
    IndexRecovery rec;
    rec.diagnostics.requested_sparsity = s;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(H);
    rec.diagnostics.hankel_singular_values = to_std(svd.singularValues());
    const std::size_t rank = numerical_rank(svd.singularValues(), tol.hankel_rank);
    rec.diagnostics.hankel_rank = rank;
    if (rank != s) {
        throw Error(ErrorKind::model, "recover_multi",
                    "stacked Hankel kernel has dimension " + std::to_string(s + 1 - rank) + ", expected 1")
            .with_singular_values(rec.diagnostics.hankel_singular_values);
    }
    const Eigen::VectorXd p = monic_kernel(H, tol, "recover_multi", rec.diagnostics.hankel_singular_values);
    const RootSet roots = polynomial_roots(p, tol);
    rec.diagnostics.max_imag_residue = roots.max_imag_residue;
    rec.eigenvalues = cluster_roots(roots.roots, tol, &rec.diagnostics.merged_roots);
    rec.diagnostics.effective_sparsity = rec.eigenvalues.size();
    return rec;
}

inline IndexRecovery recover_multi(const LocalOperator& op, std::span<const std::size_t> centres,
                                   std::span<const std::size_t> radii, std::size_t s, const IndexField& samples,
                                   const Tolerances& tol) {
    if (s < 1) throw_input("recover_multi", "sparsity must be at least 1");
    std::vector<std::vector<double>> moments;
    for (std::size_t i = 0; i < centres.size(); ++i) {
        moments.push_back(op.moments(samples, centres[i], s - 1 + radii[i]));
    }
    return eigenvalues_from_stacked(stacked_hankel(moments, radii, s), s, tol);
}

}  // namespace detail

inline Eigen::MatrixXd stacked_hankel(std::span<const MomentSequence> moments, const SnapshotPlan& plan,
                                      std::size_t s) {
    plan.validate();
    if (moments.size() != plan.anchors.size()) {
        throw_input("stacked_hankel", "one moment sequence per anchor required");
    }
    std::vector<std::vector<double>> values;
    std::vector<std::size_t> radii;
    for (std::size_t i = 0; i < moments.size(); ++i) {
        values.push_back(moments[i].values);
        radii.push_back(plan.anchors[i].radius);
    }
    return detail::stacked_hankel(values, radii, s);
}

/// Eigenvalues only; no components are produced for multi-anchor plans.
inline RecoveryResult<Vertex> recover_multi(const Graph& g, const SnapshotPlan& plan, std::size_t s,
                                            const VertexSamples& samples, const Tolerances& tol = {}) {
    plan.validate();
    std::vector<std::size_t> centres, radii;
    for (const auto& a : plan.anchors) {
        g.check(a.where, "recover_multi");
        centres.push_back(static_cast<std::size_t>(a.where - 1));
        radii.push_back(a.radius);
    }
    auto rec = detail::recover_multi(graph_operator(g), centres, radii, s, to_index_field(samples), tol);
    RecoveryResult<Vertex> out;
    out.eigenvalues = std::move(rec.eigenvalues);
    out.diagnostics = std::move(rec.diagnostics);
    return out;
}

/// Ground-truth coefficient matrix: block i has rows lambda_j^k alpha_ij,
/// k = 0..r_i - 1, with alpha_ij = beta_j u_j(v_i).
inline Eigen::MatrixXd coefficient_matrix_B(const SpectralBasis& basis, const SparseSpectralSignal& sig,
                                            const SnapshotPlan& plan) {
    plan.validate();
    sig.validate(basis.size());
    const auto s = static_cast<Eigen::Index>(sig.sparsity());
    Eigen::MatrixXd B(static_cast<Eigen::Index>(plan.total_radius()), s);
    Eigen::Index row = 0;
    for (const auto& a : plan.anchors) {
        if (a.where < 1 || static_cast<std::size_t>(a.where) > basis.size())
            throw_input("coefficient_matrix", "anchor vertex out of range");
        for (std::size_t k = 0; k < a.radius; ++k, ++row) {
            for (Eigen::Index j = 0; j < s; ++j) {
                const std::size_t idx = sig.support[static_cast<std::size_t>(j)];
                const double alpha = sig.coefficients[static_cast<std::size_t>(j)] * basis.entry(a.where, idx);
                B(row, j) = std::pow(basis.eigenvalue(idx), static_cast<double>(k)) * alpha;
            }
        }
    }
    return B;
}

struct RankCertificate {
    bool full_rank = false;
    double smallest_singular_value = 0.0;
    double largest_singular_value = 0.0;
};

/// Full column rank iff sigma_min > tol.rank_certificate * sigma_max. A
/// matrix with fewer rows than columns has sigma_min = 0.
inline RankCertificate rank_certificate(const Eigen::MatrixXd& B, std::size_t s, const Tolerances& tol = {}) {
    if (static_cast<std::size_t>(B.cols()) != s) throw_input("rank_certificate", "B must have s columns");
    RankCertificate out;
    if (B.size() == 0) return out;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    const auto& sv = svd.singularValues();
    out.largest_singular_value = sv[0];
    out.smallest_singular_value = B.rows() < B.cols() ? 0.0 : sv[sv.size() - 1];
    out.full_rank = out.smallest_singular_value > tol.rank_certificate * out.largest_singular_value;
    return out;
}

}  // namespace gsp
