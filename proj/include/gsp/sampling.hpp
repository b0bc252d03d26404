#pragma once

#include <gsp/error.hpp>
#include <gsp/spectral.hpp>
#include <gsp/tolerances.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace gsp {

/// n choose k, saturating at UINT64_MAX.
inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        const std::uint64_t num = n - k + i;
        if (r > UINT64_MAX / num) return UINT64_MAX;
        r = r * num / i;
    }
    return r;
}

/// Calls fn(combination) for every k-subset of {0..n-1} in lexicographic
/// order until fn returns false. Returns false if stopped early.
template <class Fn>
bool for_each_combination(std::size_t n, std::size_t k, Fn&& fn) {
    if (k > n) return true;
    std::vector<std::size_t> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = i;
    while (true) {
        if (!fn(std::span<const std::size_t>(c))) return false;
        std::size_t i = k;
        while (i > 0 && c[i - 1] == n - k + i - 1) --i;
        if (i == 0) return true;
        ++c[i - 1];
        for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
    }
}

// ---------------------------------------------------------------------------
// l0 decoding

inline constexpr std::size_t kMaxDecodeSparsity = 3;
inline constexpr std::uint64_t kMaxDecodeCandidates = 1'000'000;

struct DecodeResult {
    SparseSpectralSignal signal;
    /// Another support of the same size also interpolates the samples.
    bool ambiguous = false;
    std::vector<std::vector<std::size_t>> alternatives;
};

/// Exhaustive search for the smallest support S (1-based basis indices)
/// such that U_W[:, S] beta = f_W holds to within the residual tolerance.
/// Ties on size are broken by lexicographic support order.
inline DecodeResult l0_decode(const Eigen::MatrixXd& U_W, const Eigen::VectorXd& samples, std::size_t s_max,
                              const Tolerances& tol = {}) {
    const auto n = static_cast<std::size_t>(U_W.cols());
    if (U_W.rows() < 1) throw_input("l0_decode", "sampling set is empty");
    if (samples.size() != U_W.rows()) throw_input("l0_decode", "sample count does not match U_W rows");
    if (s_max > kMaxDecodeSparsity) throw_input("l0_decode", "s_max above the brute-force guard of 3");
    std::uint64_t candidates = 0;
    for (std::size_t s = 0; s <= s_max; ++s) candidates += binomial(n, s);
    if (candidates > kMaxDecodeCandidates) throw_input("l0_decode", "too many candidate supports");

    const double norm = samples.norm();
    DecodeResult out;
    if (norm == 0.0) return out;

    for (std::size_t s = 1; s <= s_max; ++s) {
        bool found = false;
        for_each_combination(n, s, [&](std::span<const std::size_t> cols) {
            Eigen::MatrixXd A(U_W.rows(), static_cast<Eigen::Index>(s));
            for (std::size_t j = 0; j < s; ++j) A.col(static_cast<Eigen::Index>(j)) = U_W.col(static_cast<Eigen::Index>(cols[j]));
            const Eigen::VectorXd beta = A.completeOrthogonalDecomposition().solve(samples);
            if ((A * beta - samples).norm() > tol.decode_residual * norm) return true;
            std::vector<std::size_t> support;
            for (std::size_t c : cols) support.push_back(c + 1);
            if (!found) {
                found = true;
                out.signal.support = support;
                out.signal.coefficients.assign(beta.data(), beta.data() + beta.size());
            } else {
                out.ambiguous = true;
                out.alternatives.push_back(std::move(support));
            }
            return true;
        });
        if (found) return out;
    }
    throw_model("l0_decode", "no support of size <= " + std::to_string(s_max) + " fits the samples");
}

// ---------------------------------------------------------------------------
// Non-uniqueness below 2s samples

struct Collision {
    SparseSpectralSignal f_spectrum;
    SparseSpectralSignal g_spectrum;
    Signal f;
    Signal g;
};

/// Two distinct s-sparse signals that agree on W, |W| <= 2s - 1. Supports
/// S_g disjoint from S_f are tried in lexicographic order; the first one
/// whose kernel yields all-nonzero coefficients wins.
inline Collision colliding_signals(const SpectralBasis& basis, std::span<const Vertex> W,
                                   std::span<const std::size_t> S_f, const Tolerances& tol = {}) {
    const std::size_t n = basis.size();
    const std::size_t s = S_f.size();
    if (s < 1) throw_input("colliding_signals", "support must be nonempty");
    if (W.size() > 2 * s - 1) throw_input("colliding_signals", "|W| must be at most 2s - 1");
    if (2 * s > n) throw_input("colliding_signals", "s must be at most n / 2");
    std::set<std::size_t> in_f;
    for (std::size_t j : S_f) {
        if (j < 1 || j > n) throw_input("colliding_signals", "support index out of range");
        if (!in_f.insert(j).second) throw_input("colliding_signals", "duplicate support index");
    }
    const Eigen::MatrixXd U_W = select_rows(basis.vectors, W);
    std::vector<std::size_t> rest;
    for (std::size_t j = 1; j <= n; ++j)
        if (!in_f.count(j)) rest.push_back(j);

    std::optional<Collision> found;
    for_each_combination(rest.size(), s, [&](std::span<const std::size_t> pick) {
        std::vector<std::size_t> S_g;
        for (std::size_t i : pick) S_g.push_back(rest[i]);
        Eigen::MatrixXd M(U_W.rows(), static_cast<Eigen::Index>(2 * s));
        for (std::size_t j = 0; j < s; ++j) {
            M.col(static_cast<Eigen::Index>(j)) = U_W.col(static_cast<Eigen::Index>(S_f[j] - 1));
            M.col(static_cast<Eigen::Index>(s + j)) = U_W.col(static_cast<Eigen::Index>(S_g[j] - 1));
        }
        Eigen::MatrixXd K = Eigen::MatrixXd::Identity(M.cols(), M.cols());
        if (M.rows() > 0) {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
            const auto& sv = svd.singularValues();
            Eigen::Index rank = 0;
            for (Eigen::Index i = 0; i < sv.size(); ++i)
                if (sv[i] > tol.rank_certificate * sv[0]) ++rank;
            K = svd.matrixV().rightCols(M.cols() - rank);
        }

        std::vector<Eigen::VectorXd> trials;
        for (Eigen::Index c = 0; c < K.cols(); ++c) trials.push_back(K.col(c));
        if (K.cols() > 1) {
            Eigen::VectorXd mix = Eigen::VectorXd::Zero(K.rows());
            for (Eigen::Index c = 0; c < K.cols(); ++c) mix += K.col(c) / static_cast<double>(c + 1);
            trials.push_back(mix);
        }
        for (const auto& x : trials) {
            if (x.cwiseAbs().minCoeff() <= tol.sign_entry * x.norm()) continue;
            Collision col;
            col.f_spectrum.support.assign(S_f.begin(), S_f.end());
            col.g_spectrum.support = S_g;
            for (std::size_t j = 0; j < s; ++j) {
                col.f_spectrum.coefficients.push_back(x[static_cast<Eigen::Index>(j)]);
                col.g_spectrum.coefficients.push_back(-x[static_cast<Eigen::Index>(s + j)]);
            }
            col.f = synthesize(basis, col.f_spectrum);
            col.g = synthesize(basis, col.g_spectrum);
            found = std::move(col);
            return false;
        }
        return true;
    });
    if (!found) throw_model("colliding_signals", "no complementary support yields nonzero coefficients");
    return *found;
}

// ---------------------------------------------------------------------------
// Chebotarev property

inline constexpr Eigen::Index kMaxChebotarevSize = 8;

struct MinorWitness {
    std::vector<std::size_t> rows;  // 0-based
    std::vector<std::size_t> cols;
};

struct ChebotarevVerdict {
    bool holds = true;
    std::optional<MinorWitness> witness;  // first vanishing minor, when !holds
};

/// Checks every square minor. A minor counts as vanishing when |det| is at
/// most tol.minor times the product of the submatrix row norms.
inline ChebotarevVerdict is_chebotarev(const Eigen::MatrixXcd& M, const Tolerances& tol = {}) {
    if (M.rows() != M.cols()) throw_input("is_chebotarev", "matrix must be square");
    if (M.rows() > kMaxChebotarevSize) throw_input("is_chebotarev", "size guard: n must be at most 8");
    const auto n = static_cast<std::size_t>(M.rows());
    ChebotarevVerdict verdict;
    for (std::size_t k = 1; k <= n && verdict.holds; ++k) {
        for_each_combination(n, k, [&](std::span<const std::size_t> rows) {
            return for_each_combination(n, k, [&](std::span<const std::size_t> cols) {
                const auto m = static_cast<Eigen::Index>(k);
                Eigen::MatrixXcd sub(m, m);
                for (Eigen::Index i = 0; i < m; ++i)
                    for (Eigen::Index j = 0; j < m; ++j)
                        sub(i, j) = M(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]),
                                      static_cast<Eigen::Index>(cols[static_cast<std::size_t>(j)]));
                double scale = 1.0;
                for (Eigen::Index i = 0; i < m; ++i) scale *= sub.row(i).norm();
                const double det = std::abs(sub.fullPivLu().determinant());
                if (scale == 0.0 || det <= tol.minor * scale) {
                    verdict.holds = false;
                    verdict.witness = MinorWitness{{rows.begin(), rows.end()}, {cols.begin(), cols.end()}};
                    return false;
                }
                return true;
            });
        });
    }
    return verdict;
}

inline ChebotarevVerdict is_chebotarev(const Eigen::MatrixXd& M, const Tolerances& tol = {}) {
    return is_chebotarev(Eigen::MatrixXcd(M.cast<std::complex<double>>()), tol);
}

/// V(k, j) = nodes_j^k, square.
inline Eigen::MatrixXd vandermonde(std::span<const double> nodes) {
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd V(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double p = 1.0;
        for (Eigen::Index k = 0; k < n; ++k, p *= nodes[static_cast<std::size_t>(j)]) V(k, j) = p;
    }
    return V;
}

// ---------------------------------------------------------------------------
// Uniqueness of s-sparse signals from samples on W

inline constexpr std::uint64_t kMaxUniquenessSupports = 200'000;

/// True iff U[W, T] has full column rank for every column set T of size
/// min(2s, n); W holds 1-based row labels.
template <class Derived>
bool uniqueness_check(const Eigen::MatrixBase<Derived>& U, std::span<const Vertex> W, std::size_t s,
                      const Tolerances& tol = {}) {
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (s < 1) throw_input("uniqueness_check", "sparsity must be at least 1");
    const auto n = static_cast<std::size_t>(U.cols());
    const std::size_t t = std::min(2 * s, n);
    if (W.size() < t) return false;
    if (binomial(n, t) > kMaxUniquenessSupports) throw_input("uniqueness_check", "too many column sets to check");
    const Matrix U_W = select_rows(U, W);
    return for_each_combination(n, t, [&](std::span<const std::size_t> cols) {
        Matrix sub(U_W.rows(), static_cast<Eigen::Index>(t));
        for (std::size_t j = 0; j < t; ++j)
            sub.col(static_cast<Eigen::Index>(j)) = U_W.col(static_cast<Eigen::Index>(cols[j]));
        Eigen::JacobiSVD<Matrix> svd(sub);
        const auto& sv = svd.singularValues();
        return sv[sv.size() - 1] > tol.rank_certificate * sv[0];
    });
}

inline bool uniqueness_check(const SpectralBasis& basis, std::span<const Vertex> W, std::size_t s,
                             const Tolerances& tol = {}) {
    return uniqueness_check(basis.vectors, W, s, tol);
}

}  // namespace gsp
