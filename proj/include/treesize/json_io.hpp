#pragma once

/**
 * @file
 * JSON forms of states, density matrices, trees and reports.
 *
 *   state    {"n": int, "amps": [[re, im], ...]}            big-endian
 *   density  {"n": int, "mat": [[[re, im], ...], ...]}
 *   tree     {"leaf": {"qubit": q, "a": [re, im], "b": [re, im]}}
 *            | {"sum": [tree, ...]} | {"prod": [tree, ...]}
 */

#include <nlohmann/json.hpp>

#include "approx.hpp"
#include "braket.hpp"
#include "mixed.hpp"

namespace treesize {

using Json = nlohmann::ordered_json;

namespace detail {

inline double json_number(const Json &j, const char *what) {
    if (!j.is_number()) {
        throw InputError(std::string(what) + ": expected a number");
    }
    return j.get<double>();
}

} // namespace detail

[[nodiscard]] inline Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

[[nodiscard]] inline Complex complex_from_json(const Json &j) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (!j.is_array() || j.size() != 2) {
        throw InputError("complex number must be [re, im]");
    }
    return {detail::json_number(j[0], "re"), detail::json_number(j[1], "im")};
}

[[nodiscard]] inline Json to_json(const PureState &s) {
    Json amps = Json::array();
    for (const auto &c : s.amps()) {
        amps.push_back(to_json(c));
    }
    return {{"n", s.n_qubits()}, {"amps", std::move(amps)}};
}

[[nodiscard]] inline PureState state_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("amps") || !j["amps"].is_array()) {
        throw InputError("state JSON needs an \"amps\" array");
    }
    Amplitudes a;
    for (const auto &x : j["amps"]) {
        a.push_back(complex_from_json(x));
    }
    auto s = PureState::normalize(a);
    if (j.contains("n") && j["n"] != s.n_qubits()) {
        throw DimensionMismatch("\"n\" does not match the number of amplitudes");
    }
    return s;
}

[[nodiscard]] inline DensityMatrix density_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("mat") || !j["mat"].is_array()) {
        throw InputError("density JSON needs a \"mat\" array");
    }
    const auto &rows = j["mat"];
    std::vector<Complex> m;
    for (const auto &r : rows) {
        if (!r.is_array() || r.size() != rows.size()) {
            throw InvalidDensity("density matrix must be square");
        }
        for (const auto &x : r) {
            m.push_back(complex_from_json(x));
        }
    }
    const int n = qubits_for_length(rows.size());
    if (j.contains("n") && j["n"] != n) {
        throw DimensionMismatch("\"n\" does not match the matrix size");
    }
    return {n, std::move(m)};
}

[[nodiscard]] inline Json to_json(const TreeNode &t) {
    if (t.is_leaf()) {
        const auto &l = t.leaf();
        return {{"leaf", {{"qubit", l.qubit}, {"a", to_json(l.a)}, {"b", to_json(l.b)}}}};
    }
    Json kids = Json::array();
    for (const auto &c : t.children()) {
        kids.push_back(to_json(c));
    }
    return {{t.is_sum() ? "sum" : "prod", std::move(kids)}};
}

[[nodiscard]] inline TreeNode tree_from_json(const Json &j) {
    if (!j.is_object() || j.size() != 1) {
        throw InputError("tree node must have exactly one of \"leaf\", \"sum\", \"prod\"");
    }
    if (j.contains("leaf")) {
        const auto &l = j["leaf"];
        if (!l.contains("qubit") || !l["qubit"].is_number_integer()) {
            throw InputError("leaf needs an integer \"qubit\"");
        }
        return leaf(l["qubit"].get<int>(), complex_from_json(l.at("a")), complex_from_json(l.at("b")));
    }
    const bool sum = j.contains("sum");
    const auto &arr = sum ? j["sum"] : j.contains("prod") ? j["prod"] : j;
    if (!arr.is_array() || arr.size() < 2) {
        throw InputError("sum/prod needs an array of at least two children");
    }
    std::vector<TreeNode> kids;
    for (const auto &c : arr) {
        kids.push_back(tree_from_json(c));
    }
    auto t = sum ? make_sum<AmpLeaf>(std::move(kids)) : make_product<AmpLeaf>(std::move(kids));
    validate(t);
    return t;
}

// ---------------------------------------------------------------------------
// Reports

[[nodiscard]] inline Json optional_int(const std::optional<int> &v) { return v ? Json(*v) : Json(nullptr); }

[[nodiscard]] inline Json to_json(const SloccClass3 &c) {
    Json j = {{"class", to_string(c.kind)}, {"condition", c.evidence.condition}, {"partition", c.evidence.partition}};
    if (c.kind == Kind3::Biseparable) {
        j["singleton_qubit"] = c.partition_qubit;
    }
    j["borderline"] = c.borderline;
    j["schmidt_ratios"] = c.schmidt_ratios;
    return j;
}

[[nodiscard]] inline Json to_json(const TsResult &r) {
    return {{"lower", r.lower},
            {"upper", r.upper},
            {"exact", r.exact},
            {"method", to_string(r.method)},
            {"size", size(r.tree)},
            {"tree", print_braket(r.tree)},
            {"tree_json", to_json(r.tree)}};
}

[[nodiscard]] inline Json to_json(const IrreducibilityVerdict &v) {
    Json j = {{"irreducible", v.irreducible}, {"family", to_string(v.family)}};
    if (v.witness) {
        const auto &w = *v.witness;
        Json m = Json::array();
        for (int r = 0; r < 2; ++r) {
            m.push_back(Json::array({to_json(w.ilo.matrix()(r, 0)), to_json(w.ilo.matrix()(r, 1))}));
        }
        j["witness"] = {{"partition_qubit", w.partition_qubit},
                        {"ilo", {{"qubit", w.ilo.qubit()}, {"matrix", std::move(m)}}},
                        {"lambda_star", to_json(w.lambda_star)},
                        {"escaped_class", to_string(w.escaped_class)}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

[[nodiscard]] inline Json to_json(const WitnessReport &w) {
    return {{"expectation", w.expectation},
            {"expectation_2dp", round_to(w.expectation, 2)},
            {"certified_ts_floor", optional_int(w.certified_ts_floor)},
            {"relation_check", w.relation_check},
            {"relation_discrepancy", w.relation_discrepancy}};
}

[[nodiscard]] inline Json to_json(const WernerTs &w) {
    return {{"ts", w.ts}, {"class", w.cls}, {"boundary", w.boundary}};
}

} // namespace treesize
