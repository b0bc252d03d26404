#pragma once

#include <gsp/error.hpp>
#include <gsp/graph.hpp>
#include <gsp/multi_snapshot.hpp>
#include <gsp/prony.hpp>
#include <gsp/simplicial.hpp>
#include <gsp/spectral.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace gsp::io {

using json = nlohmann::json;

namespace detail {

template <class T>
T field(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) throw_input("json", std::string(what) + " is missing \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw_input("json", std::string(what) + ": bad \"" + key + "\": " + e.what());
    }
}

}  // namespace detail

// ---- graphs and signals --------------------------------------------------

inline json to_json(const Graph& g) {
    json edges = json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    return {{"n", g.size()}, {"edges", edges}};
}

inline Graph graph_from_json(const json& j) {
    const auto n = detail::field<std::size_t>(j, "n", "graph");
    const auto raw = detail::field<std::vector<std::vector<Vertex>>>(j, "edges", "graph");
    std::vector<Edge> edges;
    for (const auto& e : raw) {
        if (e.size() != 2) throw_input("json", "graph edges must be pairs");
        edges.emplace_back(e[0], e[1]);
    }
    return Graph(n, edges);
}

inline json signal_to_json(const Signal& f) {
    return {{"values", std::vector<double>(f.data(), f.data() + f.size())}};
}

inline Signal signal_from_json(const json& j) {
    const auto values = detail::field<std::vector<double>>(j, "values", "signal");
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline json to_json(const SparseSpectralSignal& s) {
    return {{"support", s.support}, {"coefficients", s.coefficients}};
}

inline SparseSpectralSignal sparse_signal_from_json(const json& j) {
    return {detail::field<std::vector<std::size_t>>(j, "support", "sparse signal"),
            detail::field<std::vector<double>>(j, "coefficients", "sparse signal")};
}

inline json samples_to_json(const VertexSamples& samples) {
    json out = json::array();
    for (auto [v, value] : samples) out.push_back({{"vertex", v}, {"value", value}});
    return out;
}

inline VertexSamples samples_from_json(const json& j) {
    if (!j.is_array()) throw_input("json", "samples must be a list of {\"vertex\", \"value\"} objects");
    VertexSamples out;
    for (const auto& item : j) {
        const auto v = detail::field<Vertex>(item, "vertex", "sample");
        if (!out.emplace(v, detail::field<double>(item, "value", "sample")).second)
            throw_input("json", "vertex " + std::to_string(v) + " sampled twice");
    }
    return out;
}

inline json to_json(const SnapshotPlan& plan) {
    json anchors = json::array();
    for (const auto& a : plan.anchors) anchors.push_back({{"vertex", a.where}, {"radius", a.radius}});
    return {{"anchors", anchors}};
}

inline SnapshotPlan plan_from_json(const json& j) {
    SnapshotPlan plan;
    for (const auto& a : detail::field<json>(j, "anchors", "plan")) {
        plan.anchors.push_back({detail::field<Vertex>(a, "vertex", "anchor"), detail::field<std::size_t>(a, "radius", "anchor")});
    }
    plan.validate();
    return plan;
}

// ---- simplicial ------------------------------------------------------------

inline json to_json(const SimplicialComplex& cx) { return {{"facets", cx.facets()}}; }

inline SimplicialComplex complex_from_json(const json& j) {
    return SimplicialComplex(detail::field<std::vector<Face>>(j, "facets", "complex"));
}

inline json chain_to_json(const SimplicialComplex& cx, const Chain& c) {
    const auto faces = cx.faces(c.k);
    return {{"k", c.k},
            {"faces", std::vector<Face>(faces.begin(), faces.end())},
            {"values", std::vector<double>(c.values.data(), c.values.data() + c.values.size())}};
}

/// Chain JSON read as (possibly partial) face samples; faces are validated
/// against the complex.
inline FaceSamples face_samples_from_json(const SimplicialComplex& cx, const json& j, std::size_t* k_out = nullptr) {
    const auto k = detail::field<std::size_t>(j, "k", "chain");
    const auto faces = detail::field<std::vector<Face>>(j, "faces", "chain");
    const auto values = detail::field<std::vector<double>>(j, "values", "chain");
    if (faces.size() != values.size()) throw_input("json", "chain faces and values differ in length");
    FaceSamples out;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        if (faces[i].size() != k + 1) throw_input("json", face_label(faces[i]) + " is not a " + std::to_string(k) + "-face");
        face_index(cx, faces[i], "json");
        out[faces[i]] = values[i];
    }
    if (k_out) *k_out = k;
    return out;
}

inline FacePlan face_plan_from_json(const json& j) {
    FacePlan plan;
    for (const auto& a : detail::field<json>(j, "anchors", "plan")) {
        Face f = detail::field<Face>(a, "face", "anchor");
        std::sort(f.begin(), f.end());
        plan.anchors.push_back({std::move(f), detail::field<std::size_t>(a, "radius", "anchor")});
    }
    plan.validate();
    return plan;
}

// ---- results -----------------------------------------------------------------

inline json label_json(Vertex v) { return v; }
inline json label_json(const Face& f) { return f; }
inline const char* label_key(Vertex) { return "vertex"; }
inline const char* label_key(const Face&) { return "face"; }

inline json to_json(const RecoveryDiagnostics& d) {
    return {{"requested_sparsity", d.requested_sparsity},
            {"hankel_rank", d.hankel_rank},
            {"effective_sparsity", d.effective_sparsity},
            {"hankel_singular_values", d.hankel_singular_values},
            {"max_imag_residue", d.max_imag_residue},
            {"merged_roots", d.merged_roots}};
}

template <class Label>
json field_to_json(const std::map<Label, double>& field) {
    json values = json::array();
    for (const auto& [label, value] : field) values.push_back({{label_key(label), label_json(label)}, {"value", value}});
    return values;
}

template <class Label>
json to_json(const RecoveryResult<Label>& r) {
    json components = json::array();
    for (std::size_t j = 0; j < r.components.size(); ++j) {
        components.push_back({{"eigenvalue", r.eigenvalues[j]}, {"values", field_to_json(r.components[j])}});
    }
    json out = {{"eigenvalues", r.eigenvalues}, {"components", components}, {"diagnostics", to_json(r.diagnostics)}};
    if (r.matched_support) out["matched_support"] = *r.matched_support;
    return out;
}

inline json to_json(const SplitRecovery& r) {
    auto raw = [](const std::vector<std::map<Face, double>>& comps) {
        json a = json::array();
        for (const auto& c : comps) a.push_back(field_to_json(c));
        return a;
    };
    return {{"up", to_json(r.up)},
            {"down", to_json(r.down)},
            {"up_raw", raw(r.up_raw)},
            {"down_raw", raw(r.down_raw)},
            {"domain_radius", r.domain_radius},
            {"residual", field_to_json(r.residual)},
            {"max_residual", r.max_residual},
            {"harmonic_detected", r.harmonic_detected}};
}

inline json to_json(const Error& e) {
    json out = {{"error", e.what()},
                {"stage", e.stage()},
                {"kind", e.kind() == ErrorKind::input ? "input" : "model"}};
    if (!e.missing().empty()) out["missing"] = e.missing();
    if (!e.singular_values().empty()) out["singular_values"] = e.singular_values();
    return out;
}

}  // namespace gsp::io
