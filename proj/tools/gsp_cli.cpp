// gsp: command-line front end for the local sparse recovery library.

#include <gsp/gsp.hpp>
#include <gsp/io.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace gsp;
using gsp::io::json;

namespace {

enum Exit { ok = 0, model_violation = 1, input_error = 2 };

struct Options {
    double tol_scale = 1.0;
    bool verbose = false;

    Tolerances tol() const {
        if (!(tol_scale > 0.0)) throw_input("cli", "--tol-scale must be positive");
        return Tolerances{}.scaled(tol_scale);
    }
};

json read_json(const std::string& path) {
    std::string text;
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream in(path);
        if (!in) throw_input("cli", "cannot open " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw_input("json", (path == "-" ? std::string("stdin") : path) + ": " + e.what());
    }
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

void table(const Options& opt, const std::string& title, const std::vector<double>& values) {
    if (!opt.verbose) return;
    std::cerr << title << '\n';
    for (std::size_t i = 0; i < values.size(); ++i)
        std::cerr << "  " << std::setw(3) << i + 1 << "  " << std::setprecision(15) << values[i] << '\n';
}

Face parse_face(const std::vector<int>& labels) {
    Face f = labels;
    std::sort(f.begin(), f.end());
    return f;
}

// ---- gen ----------------------------------------------------------------------

struct GenArgs {
    std::string kind;
    std::size_t n = 0;
    double p = 0.5;
    std::uint64_t seed = 0;
};

int run_gen(const GenArgs& a) {
    if (a.kind == "strip") {
        emit(io::to_json(triangle_strip(a.n)));
        return ok;
    }
    emit(io::to_json(generate(parse_graph_kind(a.kind), a.n, a.p, a.seed)));
    return ok;
}

// ---- synth ----------------------------------------------------------------------

struct SynthArgs {
    std::string graph = "-";
    std::vector<std::size_t> support;
    std::vector<double> coeffs;
    std::optional<Vertex> around;
    std::size_t radius = 0;
};

int run_synth(const SynthArgs& a, const Options& opt) {
    const Graph g = io::graph_from_json(read_json(a.graph));
    const SpectralBasis b = eigendecompose(dense_laplacian(g), opt.tol());
    const Signal f = synthesize(b, {a.support, a.coeffs});
    if (a.around) {
        emit(io::samples_to_json(restrict_signal(f, neighbourhood(g, *a.around, a.radius))));
    } else {
        emit(io::signal_to_json(f));
    }
    return ok;
}

// ---- recover ----------------------------------------------------------------------

struct RecoverArgs {
    std::string graph, samples, plan, complex, chain, mode = "up";
    Vertex vertex = 1;
    std::vector<int> face;
    std::size_t sparsity = 1;
    bool match = false;
};

int run_recover_one(const RecoverArgs& a, const Options& opt) {
    const Tolerances tol = opt.tol();
    const Graph g = io::graph_from_json(read_json(a.graph));
    auto r = recover_one_neighbourhood(g, a.vertex, a.sparsity, io::samples_from_json(read_json(a.samples)), tol);
    if (a.match) r.matched_support = match_support(r.eigenvalues, graph_basis(g, tol), 1e6 * tol.root_cluster).clusters;
    table(opt, "eigenvalues", r.eigenvalues);
    emit(io::to_json(r));
    return ok;
}

int run_recover_multi(const RecoverArgs& a, const Options& opt) {
    const Tolerances tol = opt.tol();
    const Graph g = io::graph_from_json(read_json(a.graph));
    auto r = recover_multi(g, io::plan_from_json(read_json(a.plan)), a.sparsity,
                           io::samples_from_json(read_json(a.samples)), tol);
    if (a.match) r.matched_support = match_support(r.eigenvalues, graph_basis(g, tol), 1e6 * tol.root_cluster).clusters;
    table(opt, "eigenvalues", r.eigenvalues);
    emit(io::to_json(r));
    return ok;
}

int run_recover_simplicial(const RecoverArgs& a, const Options& opt) {
    const Tolerances tol = opt.tol();
    const SimplicialComplex cx = io::complex_from_json(read_json(a.complex));
    std::size_t k = 0;
    const FaceSamples samples = io::face_samples_from_json(cx, read_json(a.chain), &k);
    if (a.mode == "split") {
        if (!a.plan.empty()) throw_input("cli", "--plan is not supported with --mode split");
        const SplitRecovery r = split_recover(cx, k, parse_face(a.face), a.sparsity, samples, tol);
        table(opt, "UP eigenvalues", r.up.eigenvalues);
        table(opt, "DN eigenvalues", r.down.eigenvalues);
        emit(io::to_json(r));
        if (r.harmonic_detected) {
            std::cerr << "harmonic component detected: residual " << r.max_residual << " on N(sigma, "
                      << r.domain_radius << ")\n";
            return model_violation;
        }
        return ok;
    }
    HodgePart part;
    if (a.mode == "up") part = HodgePart::up;
    else if (a.mode == "down") part = HodgePart::down;
    else if (a.mode == "full") part = HodgePart::full;
    else throw_input("cli", "--mode must be up, down, full or split");
    RecoveryResult<Face> r;
    if (!a.plan.empty()) {
        r = recover_simplicial_multi(cx, k, part, io::face_plan_from_json(read_json(a.plan)), a.sparsity, samples, tol);
    } else {
        r = recover_simplicial_one(cx, k, part, parse_face(a.face), a.sparsity, samples, tol);
    }
    table(opt, "eigenvalues", r.eigenvalues);
    emit(io::to_json(r));
    return ok;
}

// ---- sampling theory --------------------------------------------------------------

struct SamplingArgs {
    std::string graph, samples, matrix;
    std::vector<Vertex> W;
    std::vector<std::size_t> support;
    std::vector<double> nodes;
    std::size_t sparsity = 1, dft = 0;
};

int run_decode(const SamplingArgs& a, const Options& opt) {
    const Tolerances tol = opt.tol();
    const Graph g = io::graph_from_json(read_json(a.graph));
    const VertexSamples samples = io::samples_from_json(read_json(a.samples));
    std::vector<Vertex> W;
    Eigen::VectorXd values(static_cast<Eigen::Index>(samples.size()));
    for (auto [v, value] : samples) {
        g.check(v, "decode");
        values[static_cast<Eigen::Index>(W.size())] = value;
        W.push_back(v);
    }
    const DecodeResult r = l0_decode(select_rows(graph_basis(g, tol).vectors, W), values, a.sparsity, tol);
    if (r.ambiguous) std::cerr << "warning: another support of the same size also fits the samples\n";
    emit({{"signal", io::to_json(r.signal)}, {"ambiguous", r.ambiguous}, {"alternatives", r.alternatives}});
    return ok;
}

int run_collide(const SamplingArgs& a, const Options& opt) {
    const Tolerances tol = opt.tol();
    const Graph g = io::graph_from_json(read_json(a.graph));
    const Collision c = colliding_signals(graph_basis(g, tol), a.W, a.support, tol);
    double gap = 0.0;
    for (Vertex w : a.W) gap = std::max(gap, std::abs(c.f[w - 1] - c.g[w - 1]));
    emit({{"f", io::to_json(c.f_spectrum)},
          {"g", io::to_json(c.g_spectrum)},
          {"max_difference_on_W", gap},
          {"difference_norm", (c.f - c.g).norm()}});
    return ok;
}

Eigen::MatrixXcd chosen_matrix(const SamplingArgs& a) {
    const int given = (a.dft > 0) + !a.nodes.empty() + !a.matrix.empty();
    if (given != 1) throw_input("cli", "give exactly one of --dft, --vandermonde, --matrix");
    if (a.dft > 0) return dft_matrix(a.dft);
    if (!a.nodes.empty()) return vandermonde(a.nodes).cast<std::complex<double>>();
    const auto rows = read_json(a.matrix).get<std::vector<std::vector<double>>>();
    Eigen::MatrixXcd M(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != M.cols()) throw_input("json", "matrix rows differ in length");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return M;
}

int run_chebotarev(const SamplingArgs& a, const Options& opt) {
    const ChebotarevVerdict v = is_chebotarev(chosen_matrix(a), opt.tol());
    json out = {{"holds", v.holds}};
    if (v.witness) out["witness"] = {{"rows", v.witness->rows}, {"cols", v.witness->cols}};
    emit(out);
    return ok;
}

int run_uniqueness(const SamplingArgs& a, const Options& opt) {
    const Tolerances tol = opt.tol();
    bool unique;
    if (a.dft > 0) {
        unique = uniqueness_check(dft_matrix(a.dft), a.W, a.sparsity, tol);
    } else {
        unique = uniqueness_check(graph_basis(io::graph_from_json(read_json(a.graph)), tol), a.W, a.sparsity, tol);
    }
    emit({{"unique", unique}, {"sampling_set_size", a.W.size()}, {"sparsity", a.sparsity}});
    return ok;
}

// ---- repro-example ----------------------------------------------------------------

void write_csv(const std::string& path, const std::string& header, const std::vector<std::string>& rows) {
    std::ofstream out(path);
    if (!out) throw_input("cli", "cannot write " + path);
    out << header << '\n';
    for (const auto& r : rows) out << r << '\n';
}

std::string fmt(double x) {
    std::ostringstream ss;
    ss << std::setprecision(17) << x;
    return ss.str();
}

int run_repro(const std::string& csv, const Options& opt) {
    const Tolerances tol = opt.tol();
    const std::size_t n = 20, s = 2;
    const Vertex v = 1;
    const Graph g = path_graph(n);
    const SpectralBasis b = graph_basis(g, tol);
    const SparseSpectralSignal sig{{3, 15}, {1.0, 0.2}};
    const Signal f = synthesize(b, sig);
    const std::vector<Vertex> W = neighbourhood(g, v, 2 * s - 1);
    const VertexSamples samples = restrict_signal(f, W);

    const MomentSequence m = local_moments(g, samples, v, 2 * s - 1);
    const Eigen::MatrixXd H = hankel(m, s);
    const Eigen::MatrixXd P = companion_matrix(prony_polynomial(H, tol).coefficients);
    auto r = recover_one_neighbourhood(g, v, s, samples, tol);
    r.matched_support = match_support(r.eigenvalues, b, 1e6 * tol.root_cluster).clusters;

    double eig_err = 0.0, comp_err = 0.0;
    for (std::size_t j = 0; j < r.eigenvalues.size() && j < 2; ++j) {
        const std::size_t idx = sig.support[j];
        eig_err = std::max(eig_err, std::abs(r.eigenvalues[j] - b.eigenvalue(idx)));
        for (const auto& [w, value] : r.components[j])
            comp_err = std::max(comp_err, std::abs(value - sig.coefficients[j] * b.entry(w, idx)));
    }
    auto matrix_json = [](const Eigen::MatrixXd& M) {
        json rows = json::array();
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            json row = json::array();
            for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
            rows.push_back(row);
        }
        return rows;
    };
    json out = {{"graph", "path"},
                {"n", n},
                {"vertex", v},
                {"sparsity", s},
                {"signal", io::to_json(sig)},
                {"moments", m.values},
                {"hankel", matrix_json(H)},
                {"companion", matrix_json(P)},
                {"recovery", io::to_json(r)},
                {"max_eigenvalue_error", eig_err},
                {"max_component_error", comp_err}};

    if (opt.verbose) {
        std::cerr << std::fixed << std::setprecision(2) << "g = (";
        for (std::size_t k = 0; k < m.values.size(); ++k) std::cerr << (k ? ", " : "") << m.values[k];
        std::cerr << ")\nH =\n" << H << "\nP =\n" << P << '\n' << std::defaultfloat;
        std::cerr << "max eigenvalue error " << eig_err << ", max component error " << comp_err << '\n';
    }

    if (!csv.empty()) {
        std::vector<std::string> rows;
        for (std::size_t j = 1; j <= n; ++j) {
            double beta = 0.0;
            for (std::size_t i = 0; i < sig.support.size(); ++i)
                if (sig.support[i] == j) beta = sig.coefficients[i];
            rows.push_back(std::to_string(j) + "," + fmt(b.eigenvalue(j)) + "," + fmt(beta));
        }
        write_csv(csv + "_coefficients.csv", "eigenvalue_index,eigenvalue,coefficient", rows);
        rows.clear();
        for (Vertex w = 1; w <= static_cast<Vertex>(n); ++w)
            rows.push_back(std::to_string(w) + "," + fmt(f[w - 1]) + "," + (samples.count(w) ? "1" : "0"));
        write_csv(csv + "_signal.csv", "vertex,value,sampled", rows);
        rows.clear();
        for (std::size_t j = 0; j < r.components.size(); ++j)
            for (const auto& [w, value] : r.components[j])
                rows.push_back(std::to_string(w) + "," + std::to_string(sig.support[j]) + "," + fmt(value));
        write_csv(csv + "_components.csv", "vertex,eigenvalue_index,value", rows);
        out["csv"] = {csv + "_coefficients.csv", csv + "_signal.csv", csv + "_components.csv"};
    }
    emit(out);
    return eig_err < 1e-10 && comp_err < 1e-10 ? ok : model_violation;
}

int report(const Error& e) {
    emit(io::to_json(e));
    return e.kind() == ErrorKind::input ? input_error : model_violation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local sparse recovery of graph and simplicial signals"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--tol-scale", opt.tol_scale, "Multiply every numerical tolerance")->capture_default_str();
    app.add_flag("-v,--verbose", opt.verbose, "Human-readable tables on stderr");

    std::function<int()> action;

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a graph (path, circle, umbrella, er) or a triangle strip");
    gen_cmd->add_option("kind", gen.kind, "path | circle | umbrella | er | strip")->required();
    gen_cmd->add_option("n", gen.n, "Vertex count (triangle count for strip)")->required();
    gen_cmd->add_option("--p", gen.p, "Edge probability (er)")->capture_default_str();
    gen_cmd->add_option("--seed", gen.seed, "Seed (er)")->capture_default_str();
    gen_cmd->callback([&] { action = [&] { return run_gen(gen); }; });

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Synthesize a sparse signal f = sum beta_j u_j");
    synth_cmd->add_option("--graph", synth.graph, "Graph JSON file, - for stdin")->capture_default_str();
    synth_cmd->add_option("--support", synth.support, "1-based eigenvector indices")->delimiter(',')->required();
    synth_cmd->add_option("--coeffs", synth.coeffs, "Coefficients")->delimiter(',')->required();
    synth_cmd->add_option("--around", synth.around, "Emit samples on N(v, radius) instead of the full signal");
    synth_cmd->add_option("--radius", synth.radius, "Radius for --around")->capture_default_str();
    synth_cmd->callback([&] { action = [&] { return run_synth(synth, opt); }; });

    RecoverArgs rec;
    auto* recover_cmd = app.add_subcommand("recover", "Recover eigenvalues and components from local samples");
    recover_cmd->require_subcommand(1);
    recover_cmd->fallthrough();
    auto* one_cmd = recover_cmd->add_subcommand("one", "Single neighbourhood N(v, 2s-1)");
    one_cmd->add_option("--graph", rec.graph, "Graph JSON")->required();
    one_cmd->add_option("--samples", rec.samples, "Samples JSON [{vertex, value}]")->required();
    one_cmd->add_option("--vertex", rec.vertex, "Base vertex")->required();
    one_cmd->add_option("--sparsity", rec.sparsity, "Sparsity bound s")->required();
    one_cmd->add_flag("--match", rec.match, "Match eigenvalues against the full spectrum");
    one_cmd->callback([&] { action = [&] { return run_recover_one(rec, opt); }; });

    auto* multi_cmd = recover_cmd->add_subcommand("multi", "Stacked Hankel over a snapshot plan (eigenvalues only)");
    multi_cmd->add_option("--graph", rec.graph, "Graph JSON")->required();
    multi_cmd->add_option("--samples", rec.samples, "Samples JSON")->required();
    multi_cmd->add_option("--plan", rec.plan, "Plan JSON {anchors: [{vertex, radius}]}")->required();
    multi_cmd->add_option("--sparsity", rec.sparsity, "Sparsity bound s")->required();
    multi_cmd->add_flag("--match", rec.match, "Match eigenvalues against the full spectrum");
    multi_cmd->callback([&] { action = [&] { return run_recover_multi(rec, opt); }; });

    auto* simp_cmd = recover_cmd->add_subcommand("simplicial", "Recovery on k-chains of a simplicial complex");
    simp_cmd->add_option("--complex", rec.complex, "Complex JSON {facets}")->required();
    simp_cmd->add_option("--chain", rec.chain, "Chain JSON {k, faces, values}")->required();
    simp_cmd->add_option("--mode", rec.mode, "up | down | full | split")->capture_default_str();
    simp_cmd->add_option("--face", rec.face, "Base face, e.g. 5,6")->delimiter(',');
    simp_cmd->add_option("--plan", rec.plan, "Face plan JSON {anchors: [{face, radius}]}");
    simp_cmd->add_option("--sparsity", rec.sparsity, "Sparsity bound s")->required();
    simp_cmd->callback([&] {
        action = [&] {
            if (rec.plan.empty() && rec.face.empty()) throw_input("cli", "give --face or --plan");
            return run_recover_simplicial(rec, opt);
        };
    });

    SamplingArgs samp;
    auto* decode_cmd = app.add_subcommand("decode", "Exhaustive l0 decoding from samples");
    decode_cmd->add_option("--graph", samp.graph, "Graph JSON")->required();
    decode_cmd->add_option("--samples", samp.samples, "Samples JSON")->required();
    decode_cmd->add_option("--sparsity", samp.sparsity, "Largest sparsity searched")->required();
    decode_cmd->callback([&] { action = [&] { return run_decode(samp, opt); }; });

    auto* collide_cmd = app.add_subcommand("collide", "Two distinct s-sparse signals agreeing on W, |W| <= 2s-1");
    collide_cmd->add_option("--graph", samp.graph, "Graph JSON")->required();
    collide_cmd->add_option("--W", samp.W, "Sampling set")->delimiter(',')->required();
    collide_cmd->add_option("--support", samp.support, "Support of f")->delimiter(',')->required();
    collide_cmd->callback([&] { action = [&] { return run_collide(samp, opt); }; });

    auto* cheb_cmd = app.add_subcommand("chebotarev", "Check that no square minor vanishes");
    cheb_cmd->add_option("--dft", samp.dft, "Use the n x n DFT matrix");
    cheb_cmd->add_option("--vandermonde", samp.nodes, "Use the Vandermonde matrix on these nodes")->delimiter(',');
    cheb_cmd->add_option("--matrix", samp.matrix, "Real matrix JSON [[...], ...]");
    cheb_cmd->callback([&] { action = [&] { return run_chebotarev(samp, opt); }; });

    auto* uniq_cmd = app.add_subcommand("uniqueness", "Does W determine every s-sparse signal?");
    uniq_cmd->add_option("--graph", samp.graph, "Graph JSON (basis = Laplacian eigenvectors)");
    uniq_cmd->add_option("--dft", samp.dft, "Use the n x n DFT basis instead");
    uniq_cmd->add_option("--W", samp.W, "Sampling set")->delimiter(',')->required();
    uniq_cmd->add_option("--sparsity", samp.sparsity, "Sparsity s")->required();
    uniq_cmd->callback([&] {
        action = [&] {
            if ((samp.dft > 0) == !samp.graph.empty()) throw_input("cli", "give exactly one of --graph, --dft");
            return run_uniqueness(samp, opt);
        };
    });

    std::string csv;
    auto* repro_cmd = app.add_subcommand("repro-example", "Path graph n=20, S={3,15}, beta=(1,0.2), v=1 end to end");
    repro_cmd->add_option("--csv", csv,
                          "Write <prefix>_coefficients.csv (eigenvalue_index,eigenvalue,coefficient), "
                          "<prefix>_signal.csv (vertex,value,sampled) and "
                          "<prefix>_components.csv (vertex,eigenvalue_index,value)");
    repro_cmd->callback([&] { action = [&] { return run_repro(csv, opt); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report(Error(ErrorKind::input, "cli", e.what()));
    }
    try {
        return action();
    } catch (const Error& e) {
        return report(e);
    } catch (const json::exception& e) {
        return report(Error(ErrorKind::input, "json", e.what()));
    }
}
