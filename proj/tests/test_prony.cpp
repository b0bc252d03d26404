#include <gsp/generators.hpp>
#include <gsp/prony.hpp>

#include <gtest/gtest.h>

#include "instances.hpp"
#include "oracles.hpp"

#include <numbers>
#include <random>

using namespace gsp;

namespace {

struct PathExample {
    Graph g = path_graph(20);
    SpectralBasis basis = graph_basis(g);
    Signal f = synthesize(basis, {{3, 15}, {1.0, 0.2}});
    double lambda3 = 2.0 - 2.0 * std::cos(2.0 * std::numbers::pi / 20.0);
    double lambda15 = 2.0 - 2.0 * std::cos(14.0 * std::numbers::pi / 20.0);

    VertexSamples samples(std::size_t radius) const { return restrict_signal(f, neighbourhood(g, 1, radius)); }
};

double round2(double x) { return std::round(x * 100.0) / 100.0; }

}  // namespace

// ---- local_moments ----------------------------------------------------------

TEST(LocalMoments, PathExample) {
    PathExample ex;
    const MomentSequence m = local_moments(ex.g, ex.samples(3), 1, 3);
    ASSERT_EQ(m.values.size(), 4u);
    const double printed[] = {0.34, 0.12, 0.29, 0.92};
    for (int k = 0; k < 4; ++k) EXPECT_EQ(round2(m.values[k]), printed[k]);
    const auto dense = oracle::dense_moments(oracle::laplacian(ex.g), ex.f, 1, 3);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(m.values[k], dense[k], 1e-14);
}

TEST(LocalMoments, ConstantSignalHasZeroHigherMoments) {
    const Graph g = erdos_renyi_graph(10, 0.4, 5);
    VertexSamples samples;
    for (Vertex v = 1; v <= 10; ++v) samples[v] = 2.5;
    const MomentSequence m = local_moments(g, samples, 4, 4);
    EXPECT_EQ(m.values[0], 2.5);
    for (std::size_t k = 1; k < m.values.size(); ++k) EXPECT_EQ(m.values[k], 0.0);
}

TEST(LocalMoments, MatchesDenseMatrixPowers) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Graph g = erdos_renyi_graph(8, 0.4, seed);
        Signal f(8);
        for (auto& x : f) x = normal(rng);
        const Vertex v = static_cast<Vertex>(1 + rng() % 8);
        const std::size_t K = 1 + rng() % 5;
        const auto local = local_moments(g, restrict_signal(f, neighbourhood(g, v, K)), v, K);
        const auto dense = oracle::dense_moments(oracle::laplacian(g), f, v, K);
        for (std::size_t k = 0; k <= K; ++k)
            EXPECT_NEAR(local.values[k], dense[k], 1e-12 * std::max(1.0, std::abs(dense[k])));
    }
}

TEST(LocalMoments, MissingSampleNamesVertices) {
    PathExample ex;
    VertexSamples samples = ex.samples(3);
    samples.erase(4);
    samples.erase(3);
    try {
        local_moments(ex.g, samples, 1, 3);
        FAIL() << "expected missing-sample error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::input);
        EXPECT_EQ(e.stage(), "moments");
        EXPECT_EQ(e.missing(), (std::vector<std::string>{"3", "4"}));
    }
}

TEST(LocalMoments, UsesOnlyTheBall) {
    // Samples far away from the base vertex must not matter.
    PathExample ex;
    VertexSamples samples = ex.samples(3);
    const auto a = local_moments(ex.g, samples, 1, 3);
    samples[10] = 1e6;
    const auto b = local_moments(ex.g, samples, 1, 3);
    EXPECT_EQ(a.values, b.values);
}

// ---- hankel -------------------------------------------------------------------

TEST(Hankel, PathExample) {
    PathExample ex;
    const Eigen::MatrixXd H = hankel(local_moments(ex.g, ex.samples(3), 1, 3), 2);
    ASSERT_EQ(H.rows(), 2);
    ASSERT_EQ(H.cols(), 3);
    const double printed[2][3] = {{0.34, 0.12, 0.29}, {0.12, 0.29, 0.92}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(round2(H(i, j)), printed[i][j]);
}

TEST(Hankel, SparsityOneAndErrors) {
    const std::vector<double> g{1.5, -2.0};
    const Eigen::MatrixXd H = hankel(g, 1);
    EXPECT_EQ(H.rows(), 1);
    EXPECT_EQ(H(0, 0), 1.5);
    EXPECT_EQ(H(0, 1), -2.0);
    EXPECT_THROW(hankel(g, 2), Error);
    EXPECT_THROW(hankel(g, 0), Error);
}

TEST(Hankel, RankCountsDistinctNodes) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> node(0.0, 6.0), weight(0.5, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t distinct = 1 + rng() % 3;
        std::vector<double> nodes;
        while (nodes.size() < distinct) {
            const double x = node(rng);
            bool ok = true;
            for (double y : nodes) ok = ok && std::abs(x - y) > 0.3;
            if (ok) nodes.push_back(x);
        }
        // Repeat one node to check that duplicates do not add rank.
        std::vector<double> all = nodes;
        all.push_back(nodes[0]);
        std::vector<double> g(8, 0.0);
        for (double x : all) {
            const double a = weight(rng);
            for (std::size_t k = 0; k < g.size(); ++k) g[k] += a * std::pow(x, static_cast<double>(k));
        }
        const Eigen::MatrixXd H = hankel(g, 4);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(H);
        const auto& sv = svd.singularValues();
        std::size_t rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > 1e-10 * sv[0];
        EXPECT_EQ(rank, distinct);
    }
}

// ---- prony_polynomial / polynomial_roots ------------------------------------

TEST(PronyPolynomial, PathExampleCompanion) {
    PathExample ex;
    const PronyPolynomial p = prony_polynomial(hankel(local_moments(ex.g, ex.samples(3), 1, 3), 2));
    ASSERT_EQ(p.coefficients.size(), 3);
    EXPECT_EQ(p.effective_sparsity, 2u);
    EXPECT_EQ(p.coefficients[2], 1.0);
    const Eigen::MatrixXd P = companion_matrix(p.coefficients);
    EXPECT_EQ(round2(P(0, 0)), 0.0);
    EXPECT_EQ(round2(P(0, 1)), -0.31);
    EXPECT_EQ(round2(P(1, 0)), 1.0);
    EXPECT_EQ(round2(P(1, 1)), 3.27);
}

TEST(PronyPolynomial, SparsityOne) {
    const double c = 0.7, lambda = 2.5;
    const std::vector<double> g{c, c * lambda};
    const PronyPolynomial p = prony_polynomial(hankel(g, 1));
    EXPECT_NEAR(p.coefficients[0], -lambda, 1e-14);
    EXPECT_EQ(p.coefficients[1], 1.0);
}

TEST(PronyPolynomial, ThreeNodesMatchExpansion) {
    const std::vector<double> nodes{0.5, 1.5, 3.0}, weights{1.0, -0.4, 0.8};
    std::vector<double> g(6, 0.0);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 6; ++k) g[k] += weights[j] * std::pow(nodes[j], static_cast<double>(k));
    const PronyPolynomial p = prony_polynomial(hankel(g, 3));
    const Eigen::VectorXd expected = oracle::poly_from_roots(nodes);  // -2.25, 7.5, -5, 1
    EXPECT_LT((p.coefficients - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(PronyPolynomial, RankShrinkAndZero) {
    std::vector<double> g(6);
    for (std::size_t k = 0; k < 6; ++k) g[k] = 2.0 * std::pow(1.25, static_cast<double>(k)) - std::pow(3.0, static_cast<double>(k));
    const PronyPolynomial p = prony_polynomial(hankel(g, 3));
    EXPECT_EQ(p.effective_sparsity, 2u);
    EXPECT_LT((p.coefficients - oracle::poly_from_roots({1.25, 3.0})).cwiseAbs().maxCoeff(), 1e-10);

    const PronyPolynomial zero = prony_polynomial(Eigen::MatrixXd::Zero(2, 3));
    EXPECT_EQ(zero.effective_sparsity, 0u);
    EXPECT_EQ(zero.coefficients.size(), 1);
    EXPECT_THROW(prony_polynomial(Eigen::MatrixXd::Zero(2, 2)), Error);
}

TEST(PolynomialRoots, PathExampleEigenvalues) {
    PathExample ex;
    const PronyPolynomial p = prony_polynomial(hankel(local_moments(ex.g, ex.samples(3), 1, 3), 2));
    const RootSet r = polynomial_roots(p.coefficients);
    ASSERT_EQ(r.roots.size(), 2u);
    EXPECT_NEAR(r.roots[0], 0.0978869674096929, 1e-10);
    EXPECT_NEAR(r.roots[1], 3.175570504584946, 1e-10);
    EXPECT_NEAR(r.roots[0], ex.lambda3, 1e-10);
    EXPECT_NEAR(r.roots[1], ex.lambda15, 1e-10);
}

TEST(PolynomialRoots, LinearAndErrors) {
    Eigen::VectorXd p(2);
    p << -1.75, 1.0;
    EXPECT_EQ(polynomial_roots(p).roots, std::vector<double>{1.75});
    Eigen::VectorXd complex_pair(3);
    complex_pair << 1.0, 0.0, 1.0;  // x^2 + 1
    try {
        polynomial_roots(complex_pair);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::model);
    }
    EXPECT_THROW(polynomial_roots(Eigen::VectorXd::Ones(1)), Error);
}

TEST(PolynomialRoots, RoundTripOnRandomRootSets) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> root(0.0, 8.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 1 + rng() % 4;
        std::vector<double> roots;
        while (roots.size() < d) {
            const double x = root(rng);
            bool ok = true;
            for (double y : roots) ok = ok && std::abs(x - y) > 0.2;
            if (ok) roots.push_back(x);
        }
        std::sort(roots.begin(), roots.end());
        const RootSet r = polynomial_roots(oracle::poly_from_roots(roots));
        ASSERT_EQ(r.roots.size(), d);
        for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(r.roots[i], roots[i], 1e-9);
    }
}

TEST(PronyPolynomial, RecoversNodesOfExponentialSums) {
    // Nodes in a Laplacian-like range with moderate gaps keep the Hankel
    // matrix well inside the rank cut.
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> node(0.0, 4.0), weight(0.5, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 1 + rng() % 4;
        std::vector<double> nodes;
        while (nodes.size() < d) {
            const double x = node(rng);
            bool ok = true;
            for (double y : nodes) ok = ok && std::abs(x - y) > 0.4;
            if (ok) nodes.push_back(x);
        }
        std::sort(nodes.begin(), nodes.end());
        std::vector<double> g(2 * d, 0.0);
        for (double x : nodes) {
            const double a = weight(rng);
            for (std::size_t k = 0; k < g.size(); ++k) g[k] += a * std::pow(x, static_cast<double>(k));
        }
        const PronyPolynomial p = prony_polynomial(hankel(g, d));
        ASSERT_EQ(p.effective_sparsity, d);
        const RootSet r = polynomial_roots(p.coefficients);
        for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(r.roots[i], nodes[i], 1e-8);
    }
}

TEST(ClusterRoots, MergesNearDuplicates) {
    bool merged = false;
    const std::vector<double> roots{1.0, 1.0 + 1e-12, 2.0};
    const auto c = cluster_roots(roots, Tolerances{}, &merged);
    EXPECT_TRUE(merged);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_NEAR(c[0], 1.0, 1e-12);
}

// ---- local_components ---------------------------------------------------------

TEST(LocalComponents, PathExampleComponents) {
    PathExample ex;
    const std::vector<double> eig{ex.lambda3, ex.lambda15};
    const auto comps = local_components(ex.g, ex.samples(3), 1, eig);
    ASSERT_EQ(comps.size(), 2u);
    for (Vertex w = 1; w <= 3; ++w) {
        EXPECT_NEAR(comps[0].at(w), 1.0 * ex.basis.entry(w, 3), 1e-10);
        EXPECT_NEAR(comps[1].at(w), 0.2 * ex.basis.entry(w, 15), 1e-10);
    }
    EXPECT_EQ(comps[0].size(), 3u);
}

TEST(LocalComponents, SingleEigenvalueReturnsSamples) {
    PathExample ex;
    const std::vector<double> eig{0.3};
    const auto comps = local_components(ex.g, ex.samples(1), 1, eig);
    ASSERT_EQ(comps.size(), 1u);
    EXPECT_EQ(comps[0], ex.samples(1));
}

TEST(LocalComponents, CollidingEigenvaluesRejected) {
    PathExample ex;
    const std::vector<double> eig{1.0, 1.0};
    try {
        local_components(ex.g, ex.samples(3), 1, eig);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::model);
        EXPECT_EQ(e.stage(), "components");
    }
}

// ---- recover_one_neighbourhood ------------------------------------------------

TEST(RecoverOne, PathExampleEndToEnd) {
    PathExample ex;
    const auto r = recover_one_neighbourhood(ex.g, 1, 2, ex.samples(3));
    ASSERT_EQ(r.eigenvalues.size(), 2u);
    EXPECT_NEAR(r.eigenvalues[0], ex.lambda3, 1e-10);
    EXPECT_NEAR(r.eigenvalues[1], ex.lambda15, 1e-10);
    EXPECT_EQ(r.diagnostics.effective_sparsity, 2u);
    EXPECT_LT(r.diagnostics.max_imag_residue, 1e-12);
    EXPECT_EQ(match_support(r.eigenvalues, ex.basis, 1e-6).support(), (std::vector<std::size_t>{3, 15}));
    for (Vertex w = 1; w <= 2; ++w) {
        EXPECT_NEAR(r.components[0].at(w), ex.basis.entry(w, 3), 1e-10);
        EXPECT_NEAR(r.components[1].at(w), 0.2 * ex.basis.entry(w, 15), 1e-10);
    }
}

TEST(RecoverOne, ConstantSignal) {
    const Graph g = erdos_renyi_graph(9, 0.4, 1);
    VertexSamples samples;
    for (Vertex v = 1; v <= 9; ++v) samples[v] = -1.2;
    for (Vertex v : {1, 5, 9}) {
        const auto r = recover_one_neighbourhood(g, v, 1, samples);
        ASSERT_EQ(r.eigenvalues.size(), 1u);
        EXPECT_NEAR(r.eigenvalues[0], 0.0, 1e-14);
        EXPECT_EQ(r.components[0], restrict_signal(Signal::Constant(9, -1.2), neighbourhood(g, v, 1)));
    }
}

TEST(RecoverOne, CirclePairGivesEigenspaceProjection) {
    const Graph g = circle_graph(8);
    const SpectralBasis b = graph_basis(g);
    ASSERT_NEAR(b.eigenvalue(2), b.eigenvalue(3), 1e-12);
    // f = u_2 + u_3 + 0.5 u_1: two distinct eigenvalues, one of them double
    const Signal f = synthesize(b, {{1, 2, 3}, {0.5, 1.0, 1.0}});
    const Signal pair = b.vectors.col(1) * b.vectors.col(1).dot(f) + b.vectors.col(2) * b.vectors.col(2).dot(f);
    const auto r = recover_one_neighbourhood(g, 1, 3, restrict_signal(f, neighbourhood(g, 1, 5)));
    ASSERT_EQ(r.eigenvalues.size(), 2u);
    EXPECT_EQ(r.diagnostics.hankel_rank, 2u);
    EXPECT_NEAR(r.eigenvalues[1], b.eigenvalue(2), 1e-10);
    for (const auto& [w, value] : r.components[1]) EXPECT_NEAR(value, pair[w - 1], 1e-8);
    EXPECT_EQ(r.components[1].size(), neighbourhood(g, 1, 3).size());
    const auto clusters = match_support(r.eigenvalues, b, 1e-6).clusters;
    EXPECT_EQ(clusters[1], (std::vector<std::size_t>{2, 3}));
}

TEST(RecoverOne, ExactnessOnRandomInstances) {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const char* kinds[] = {"path", "circle", "er"};
        const std::string kind = kinds[seed % 3];
        const std::size_t n = 8 + seed % 12;
        const std::size_t s = 1 + seed % 3;
        auto inst = instances::make(kind, n, kind == "circle" ? std::min<std::size_t>(s, 1) : s, seed);
        if (!inst) continue;
        const std::size_t sp = inst->signal.sparsity();
        const auto samples = restrict_signal(inst->f, neighbourhood(inst->graph, inst->base, 2 * sp - 1));
        const auto r = recover_one_neighbourhood(inst->graph, inst->base, sp, samples);
        ASSERT_EQ(r.eigenvalues.size(), sp) << kind << " seed " << seed;
        for (std::size_t i = 0; i < sp; ++i)
            EXPECT_NEAR(r.eigenvalues[i], inst->basis.eigenvalue(inst->signal.support[i]), 1e-8);
        for (Vertex w : neighbourhood(inst->graph, inst->base, sp)) {
            double sum = 0.0;
            for (const auto& c : r.components) sum += c.at(w);
            EXPECT_NEAR(sum, inst->f[w - 1], 1e-8);
        }
        ++checked;
    }
    EXPECT_GE(checked, 40);
}

TEST(RecoverOne, OverestimatedSparsityShrinks) {
    auto inst = instances::make("er", 12, 2, 77);
    ASSERT_TRUE(inst);
    const auto samples = restrict_signal(inst->f, neighbourhood(inst->graph, inst->base, 7));
    const auto r = recover_one_neighbourhood(inst->graph, inst->base, 4, samples);
    EXPECT_EQ(r.diagnostics.requested_sparsity, 4u);
    EXPECT_EQ(r.diagnostics.effective_sparsity, 2u);
    ASSERT_EQ(r.eigenvalues.size(), 2u);
    EXPECT_NEAR(r.eigenvalues[0], inst->basis.eigenvalue(inst->signal.support[0]), 1e-8);
    EXPECT_NEAR(r.eigenvalues[1], inst->basis.eigenvalue(inst->signal.support[1]), 1e-8);
}

TEST(RecoverOne, MissingSamplesReported) {
    PathExample ex;
    try {
        recover_one_neighbourhood(ex.g, 1, 2, ex.samples(2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::input);
        EXPECT_EQ(e.missing(), std::vector<std::string>{"4"});
    }
    EXPECT_THROW(recover_one_neighbourhood(ex.g, 1, 0, ex.samples(3)), Error);
}

TEST(OneSparse, EigenvalueFromOneRing) {
    const Graph g = erdos_renyi_graph(10, 0.4, 4);
    const SpectralBasis b = graph_basis(g);
    const Signal f = synthesize(b, {{6}, {-1.7}});
    Vertex v = 1;
    while (std::abs(f[v - 1]) < 1e-3) ++v;
    EXPECT_NEAR(one_sparse_eigenvalue(g, restrict_signal(f, neighbourhood(g, v, 1)), v), b.eigenvalue(6), 1e-10);
}

// ---- match_support ----------------------------------------------------------------

TEST(MatchSupport, Cases) {
    PathExample ex;
    const std::vector<double> eig{ex.lambda3, ex.lambda15};
    const auto m = match_support(eig, ex.basis, 1e-6);
    EXPECT_TRUE(m.is_plain());
    EXPECT_EQ(m.support(), (std::vector<std::size_t>{3, 15}));

    const std::vector<double> zero{0.0};
    EXPECT_EQ(match_support(zero, graph_basis(erdos_renyi_graph(7, 0.5, 3)), 1e-8).support(),
              std::vector<std::size_t>{1});

    const SpectralBasis c8 = graph_basis(circle_graph(8));
    const std::vector<double> pair{2.0};
    const auto m8 = match_support(pair, c8, 1e-8);
    EXPECT_FALSE(m8.is_plain());
    EXPECT_EQ(m8.clusters[0], (std::vector<std::size_t>{4, 5}));

    const std::vector<double> off{1.0};
    EXPECT_THROW(match_support(off, c8, 1e-8), Error);
}
