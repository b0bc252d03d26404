#pragma once

#include <gsp/error.hpp>
#include <gsp/graph.hpp>
#include <gsp/tolerances.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace gsp {

/// Ascending eigenvalues with orthonormal eigenvectors as columns.
struct SpectralBasis {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd vectors;

    std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
    double eigenvalue(std::size_t j) const { return eigenvalues[static_cast<Eigen::Index>(j - 1)]; }
    /// u_j(v) with 1-based j and v.
    double entry(Vertex v, std::size_t j) const {
        return vectors(v - 1, static_cast<Eigen::Index>(j - 1));
    }
};

namespace detail {

inline constexpr int kMaxJacobiSweeps = 100;

inline double offdiag_norm(const Eigen::MatrixXd& A) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            if (i != j) sum += A(i, j) * A(i, j);
    return std::sqrt(sum);
}

// One Jacobi rotation annihilating A(p,q), accumulated into V.
inline void rotate(Eigen::MatrixXd& A, Eigen::MatrixXd& V, Eigen::Index p, Eigen::Index q) {
    const double apq = A(p, q);
    if (apq == 0.0) return;
    const double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const Eigen::Index n = A.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double akp = A(k, p), akq = A(k, q);
        A(k, p) = c * akp - s * akq;
        A(k, q) = s * akp + c * akq;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const double apk = A(p, k), aqk = A(q, k);
        A(p, k) = c * apk - s * aqk;
        A(q, k) = s * apk + c * aqk;
    }
    A(p, q) = A(q, p) = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double vkp = V(k, p), vkq = V(k, q);
        V(k, p) = c * vkp - s * vkq;
        V(k, q) = s * vkp + c * vkq;
    }
}

inline void fix_sign(Eigen::Ref<Eigen::VectorXd> u, double threshold) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (std::abs(u[i]) > threshold) {
            if (u[i] < 0.0) u = -u;
            return;
        }
    }
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition of a dense symmetric matrix.
///
/// Eigenvectors are sign-normalized so the first entry with magnitude above
/// `tol.sign_entry` is positive. Eigenvalues come out ascending; within a
/// group of tied eigenvalues the normalized eigenvectors are ordered
/// lexicographically so repeated runs agree.
inline SpectralBasis eigendecompose(const Eigen::MatrixXd& L, const Tolerances& tol = {}) {
    if (L.rows() != L.cols()) throw_input("eigendecompose", "matrix is not square");
    const Eigen::Index n = L.rows();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (std::abs(L(i, j) - L(j, i)) > tol.symmetry * std::max(1.0, std::abs(L(i, j))))
                throw_input("eigendecompose", "matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                                                  std::to_string(j + 1) + ")");

    Eigen::MatrixXd A = L;
    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);
    const double target = tol.jacobi_offdiag * L.norm();
    int sweep = 0;
    while (detail::offdiag_norm(A) > target) {
        if (++sweep > detail::kMaxJacobiSweeps) {
            throw_model("eigendecompose", "Jacobi iteration did not converge");
        }
        for (Eigen::Index p = 0; p < n - 1; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) detail::rotate(A, V, p, q);
    }

    for (Eigen::Index j = 0; j < n; ++j) detail::fix_sign(V.col(j), tol.sign_entry);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return A(a, a) < A(b, b); });
    // tie groups: lexicographic on the (sign-normalized) vectors
    auto lex_less = [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(V(i, a) - V(i, b)) > tol.sign_entry) return V(i, a) < V(i, b);
        }
        return false;
    };
    for (std::size_t begin = 0; begin < order.size();) {
        std::size_t end = begin + 1;
        const double lead = A(order[begin], order[begin]);
        while (end < order.size() &&
               A(order[end], order[end]) - lead <= tol.eigen_tie * (1.0 + std::abs(lead)))
            ++end;
        std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                         order.begin() + static_cast<std::ptrdiff_t>(end), lex_less);
        begin = end;
    }

    SpectralBasis basis{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
    for (Eigen::Index j = 0; j < n; ++j) {
        basis.eigenvalues[j] = A(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(j)]);
        basis.vectors.col(j) = V.col(order[static_cast<std::size_t>(j)]);
    }
    return basis;
}

inline SpectralBasis graph_basis(const Graph& g, const Tolerances& tol = {}) {
    return eigendecompose(dense_laplacian(g), tol);
}

/// f = sum_j beta_j u_j with 1-based support indices.
struct SparseSpectralSignal {
    std::vector<std::size_t> support;
    std::vector<double> coefficients;

    std::size_t sparsity() const noexcept { return support.size(); }

    void validate(std::size_t n) const {
        if (support.size() != coefficients.size())
            throw_input("sparse_signal", "support and coefficient lists differ in length");
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (support[i] < 1 || support[i] > n)
                throw_input("sparse_signal", "support index " + std::to_string(support[i]) + " outside 1.." +
                                                 std::to_string(n));
            if (coefficients[i] == 0.0)
                throw_input("sparse_signal", "coefficient for index " + std::to_string(support[i]) + " is zero");
            for (std::size_t k = 0; k < i; ++k)
                if (support[k] == support[i])
                    throw_input("sparse_signal", "duplicate support index " + std::to_string(support[i]));
        }
    }
};

inline Signal synthesize(const SpectralBasis& basis, const SparseSpectralSignal& sig) {
    sig.validate(basis.size());
    Signal f = Signal::Zero(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < sig.support.size(); ++i) {
        f += sig.coefficients[i] * basis.vectors.col(static_cast<Eigen::Index>(sig.support[i] - 1));
    }
    return f;
}

/// Unnormalized Fourier matrix, entries exp(2 pi i k j / n) for k, j in 0..n-1.
inline Eigen::MatrixXcd dft_matrix(std::size_t n) {
    if (n < 1) throw_input("dft_matrix", "n must be positive");
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd F(m, m);
    for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index j = 0; j < m; ++j) {
            // reduce k*j mod n first so large products keep full accuracy
            const auto r = static_cast<double>((k * j) % m);
            F(k, j) = std::polar(1.0, 2.0 * std::numbers::pi * r / static_cast<double>(n));
        }
    }
    return F;
}

/// Rows of `U` at the 1-based labels in `rows`.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> select_rows(
    const Eigen::MatrixBase<Derived>& U, std::span<const Vertex> rows) {
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
        static_cast<Eigen::Index>(rows.size()), U.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < 1 || rows[i] > U.rows())
            throw_input("select_rows", "row label " + std::to_string(rows[i]) + " out of range");
        out.row(static_cast<Eigen::Index>(i)) = U.row(rows[i] - 1);
    }
    return out;
}

}  // namespace gsp
