#include <gsp/generators.hpp>
#include <gsp/sampling.hpp>

#include <gtest/gtest.h>

#include "instances.hpp"

#include <random>

using namespace gsp;

namespace {

Eigen::MatrixXd rows_of(const SpectralBasis& b, const std::vector<Vertex>& W) { return select_rows(b.vectors, W); }

double max_on(const Signal& a, const Signal& b, const std::vector<Vertex>& W) {
    double m = 0.0;
    for (Vertex w : W) m = std::max(m, std::abs(a[w - 1] - b[w - 1]));
    return m;
}

void expect_valid_collision(const SpectralBasis& b, const std::vector<Vertex>& W, const std::vector<std::size_t>& S_f) {
    const Collision c = colliding_signals(b, W, S_f);
    EXPECT_EQ(c.f_spectrum.support, S_f);
    EXPECT_EQ(c.g_spectrum.sparsity(), S_f.size());
    for (double beta : c.f_spectrum.coefficients) EXPECT_NE(beta, 0.0);
    for (double beta : c.g_spectrum.coefficients) EXPECT_NE(beta, 0.0);
    for (std::size_t j : c.g_spectrum.support) EXPECT_EQ(std::count(S_f.begin(), S_f.end(), j), 0);
    EXPECT_LT(max_on(c.f, c.g, W), 1e-10);
    EXPECT_GT((c.f - c.g).norm(), 1e-3 * (c.f.norm() + c.g.norm()));
    // the pair really is what the spectra say
    EXPECT_LT((synthesize(b, c.f_spectrum) - c.f).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((synthesize(b, c.g_spectrum) - c.g).cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace

TEST(Combinatorics, BinomialAndEnumeration) {
    EXPECT_EQ(binomial(5, 2), 10u);
    EXPECT_EQ(binomial(20, 0), 1u);
    EXPECT_EQ(binomial(3, 4), 0u);
    std::vector<std::vector<std::size_t>> seen;
    for_each_combination(4, 2, [&](std::span<const std::size_t> c) {
        seen.emplace_back(c.begin(), c.end());
        return true;
    });
    ASSERT_EQ(seen.size(), 6u);
    EXPECT_EQ(seen.front(), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(seen.back(), (std::vector<std::size_t>{2, 3}));
    int calls = 0;
    EXPECT_FALSE(for_each_combination(5, 3, [&](std::span<const std::size_t>) { return ++calls < 3; }));
    EXPECT_EQ(calls, 3);
}

// ---- l0_decode --------------------------------------------------------------------

TEST(L0Decode, PathExample) {
    const Graph g = path_graph(20);
    const SpectralBasis b = graph_basis(g);
    const Signal f = synthesize(b, {{3, 15}, {1.0, 0.2}});
    const std::vector<Vertex> W{1, 2, 3, 4};
    const DecodeResult r = l0_decode(rows_of(b, W), select_rows(f, W), 2);
    EXPECT_EQ(r.signal.support, (std::vector<std::size_t>{3, 15}));
    ASSERT_EQ(r.signal.coefficients.size(), 2u);
    EXPECT_NEAR(r.signal.coefficients[0], 1.0, 1e-8);
    EXPECT_NEAR(r.signal.coefficients[1], 0.2, 1e-8);
    EXPECT_FALSE(r.ambiguous);
}

TEST(L0Decode, ZeroSamples) {
    const SpectralBasis b = graph_basis(path_graph(6));
    const DecodeResult r = l0_decode(rows_of(b, {1, 2}), Eigen::VectorXd::Zero(2), 2);
    EXPECT_EQ(r.signal.sparsity(), 0u);
}

TEST(L0Decode, CollisionIsFlaggedAmbiguous) {
    const SpectralBasis b = graph_basis(path_graph(10));
    const std::vector<Vertex> W{2, 5, 9};
    const Collision c = colliding_signals(b, W, std::vector<std::size_t>{2, 5});
    const DecodeResult r = l0_decode(rows_of(b, W), select_rows(c.f, W), 2);
    EXPECT_TRUE(r.ambiguous);
    EXPECT_FALSE(r.alternatives.empty());
}

TEST(L0Decode, ErrorsAndGuards) {
    const SpectralBasis b = graph_basis(path_graph(6));
    const Eigen::MatrixXd U = rows_of(b, {1, 2, 3, 4, 5, 6});
    Eigen::VectorXd f = Eigen::VectorXd::Ones(6) + b.vectors.col(2) + b.vectors.col(3) + b.vectors.col(4);
    try {
        l0_decode(U, f, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::model);
    }
    EXPECT_THROW(l0_decode(U, f, 4), Error);
    EXPECT_THROW(l0_decode(U, Eigen::VectorXd::Ones(3), 1), Error);
}

TEST(L0Decode, SoundOnUniquelyDecodableSets) {
    std::mt19937_64 rng(8);
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const std::size_t s = 1 + seed % 2;
        auto inst = instances::make(seed % 2 ? "path" : "er", 8 + seed % 5, s, seed, 1e-6, 0.0);
        if (!inst) continue;
        const std::size_t n = inst->graph.size();
        std::vector<Vertex> W(n);
        std::iota(W.begin(), W.end(), 1);
        std::shuffle(W.begin(), W.end(), rng);
        W.resize(std::min(n, 2 * s + 1 + rng() % 3));
        std::sort(W.begin(), W.end());
        if (!uniqueness_check(inst->basis, W, s)) continue;
        const DecodeResult r = l0_decode(rows_of(inst->basis, W), select_rows(inst->f, W), s);
        EXPECT_EQ(r.signal.support, inst->signal.support);
        for (std::size_t j = 0; j < s; ++j) EXPECT_NEAR(r.signal.coefficients[j], inst->signal.coefficients[j], 1e-8);
        ++checked;
    }
    EXPECT_GE(checked, 10);
}

// ---- colliding_signals --------------------------------------------------------------

TEST(CollidingSignals, SparsityOne) {
    const SpectralBasis b = graph_basis(erdos_renyi_graph(7, 0.5, 2));
    expect_valid_collision(b, {4}, {3});
}

TEST(CollidingSignals, PathAndCircle) {
    expect_valid_collision(graph_basis(path_graph(10)), {2, 5, 9}, {2, 5});
    expect_valid_collision(graph_basis(circle_graph(6)), {1, 2, 3}, {2, 5});
}

TEST(CollidingSignals, SeededCases) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 6 + rng() % 8, s = 1 + rng() % 3;
        const SpectralBasis b = graph_basis(erdos_renyi_graph(n, 0.4, rng()));
        std::vector<Vertex> W(n);
        std::iota(W.begin(), W.end(), 1);
        std::shuffle(W.begin(), W.end(), rng);
        W.resize(2 * s - 1);
        std::vector<std::size_t> S(n);
        std::iota(S.begin(), S.end(), 1);
        std::shuffle(S.begin(), S.end(), rng);
        S.resize(s);
        std::sort(S.begin(), S.end());
        expect_valid_collision(b, W, S);
    }
}

TEST(CollidingSignals, Preconditions) {
    const SpectralBasis b = graph_basis(path_graph(6));
    EXPECT_THROW(colliding_signals(b, std::vector<Vertex>{1, 2, 3, 4}, std::vector<std::size_t>{1, 2}), Error);
    EXPECT_THROW(colliding_signals(b, std::vector<Vertex>{1}, std::vector<std::size_t>{1, 2, 3, 4}), Error);
    EXPECT_THROW(colliding_signals(b, std::vector<Vertex>{1}, std::vector<std::size_t>{}), Error);
}

// ---- is_chebotarev -------------------------------------------------------------------

TEST(Chebotarev, PrimeDftHolds) {
    for (std::size_t p : {2u, 3u, 5u, 7u}) EXPECT_TRUE(is_chebotarev(dft_matrix(p)).holds) << p;
}

TEST(Chebotarev, CompositeDftFails) {
    const auto v4 = is_chebotarev(dft_matrix(4));
    ASSERT_FALSE(v4.holds);
    ASSERT_TRUE(v4.witness);
    EXPECT_EQ(v4.witness->rows, (std::vector<std::size_t>{0, 2}));
    EXPECT_EQ(v4.witness->cols, (std::vector<std::size_t>{0, 2}));

    const auto v6 = is_chebotarev(dft_matrix(6));
    ASSERT_FALSE(v6.holds);
    ASSERT_TRUE(v6.witness);
    const Eigen::MatrixXcd F = dft_matrix(6);
    const auto m = static_cast<Eigen::Index>(v6.witness->rows.size());
    Eigen::MatrixXcd sub(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            sub(i, j) = F(static_cast<Eigen::Index>(v6.witness->rows[i]), static_cast<Eigen::Index>(v6.witness->cols[j]));
    EXPECT_LT(std::abs(sub.determinant()), 1e-10);
}

TEST(Chebotarev, VandermondeWithPositiveNodes) {
    const std::vector<double> three{1, 2, 3}, four{1, 2, 3, 4};
    EXPECT_TRUE(is_chebotarev(vandermonde(three)).holds);
    EXPECT_TRUE(is_chebotarev(vandermonde(four)).holds);
    const std::vector<double> with_zero{0, 1, 2};
    EXPECT_FALSE(is_chebotarev(vandermonde(with_zero)).holds);
}

TEST(Chebotarev, ScaleInvariantAndGuards) {
    EXPECT_TRUE(is_chebotarev(Eigen::MatrixXcd(dft_matrix(5) * 1e-8)).holds);
    EXPECT_FALSE(is_chebotarev(Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2))).holds);
    EXPECT_THROW(is_chebotarev(Eigen::MatrixXd(Eigen::MatrixXd::Ones(9, 9))), Error);
    EXPECT_THROW(is_chebotarev(Eigen::MatrixXd(Eigen::MatrixXd::Ones(2, 3))), Error);
}

// ---- uniqueness_check ------------------------------------------------------------

TEST(Uniqueness, TooFewSamples) {
    const SpectralBasis b = graph_basis(erdos_renyi_graph(8, 0.5, 1));
    for (std::size_t s = 1; s <= 3; ++s) {
        std::vector<Vertex> W(2 * s - 1);
        std::iota(W.begin(), W.end(), 1);
        EXPECT_FALSE(uniqueness_check(b, W, s));
    }
}

TEST(Uniqueness, DftAtTwoS) {
    const Eigen::MatrixXcd F = dft_matrix(5);
    for (std::size_t s = 1; s <= 2; ++s) {
        for_each_combination(5, 2 * s, [&](std::span<const std::size_t> rows) {
            std::vector<Vertex> W;
            for (std::size_t r : rows) W.push_back(static_cast<Vertex>(r + 1));
            EXPECT_TRUE(uniqueness_check(F, W, s));
            return true;
        });
    }
}

TEST(Uniqueness, PathSixSparseExample) {
    const SpectralBasis b = graph_basis(path_graph(20));
    const std::vector<Vertex> W{1, 2, 3, 4, 5, 6, 7, 8, 9};
    EXPECT_FALSE(uniqueness_check(b, W, 6));
}

TEST(Uniqueness, ChebotarevImpliesUniqueness) {
    std::vector<Eigen::MatrixXcd> passing;
    for (std::size_t n : {3u, 5u}) passing.push_back(dft_matrix(n));
    const std::vector<double> nodes{0.5, 1.0, 2.0, 3.5, 5.0, 6.0};
    passing.push_back(vandermonde(nodes).cast<std::complex<double>>());
    for (const auto& M : passing) {
        ASSERT_TRUE(is_chebotarev(M).holds);
        const auto n = static_cast<std::size_t>(M.rows());
        for (std::size_t s = 1; s <= 2 && 2 * s <= n; ++s) {
            for_each_combination(n, 2 * s, [&](std::span<const std::size_t> rows) {
                std::vector<Vertex> W;
                for (std::size_t r : rows) W.push_back(static_cast<Vertex>(r + 1));
                EXPECT_TRUE(uniqueness_check(M, W, s));
                return true;
            });
        }
    }
}
