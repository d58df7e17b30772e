#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include <ssvp/classify.hpp>
#include <ssvp/error.hpp>
#include <ssvp/flow.hpp>
#include <ssvp/matrix.hpp>
#include <ssvp/pattern.hpp>
#include <ssvp/verify.hpp>

namespace ssvp {

using nlohmann::json;

// ============================================================
// JSON parsing with diagnostics
// ============================================================

/**
 * Parses a JSON document, converting library exceptions (which carry
 * line/column positions) into parse errors of this library.
 */
inline json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(errkind::parse_error, e.what());
    }
}

namespace detail {

inline const json& require_key(const json& j, const char* key, const char* what) {
    if (!j.is_object())
        throw Error(errkind::parse_error, std::string(what) + " must be a JSON object");
    const auto it = j.find(key);
    if (it == j.end())
        throw Error(errkind::parse_error,
                    std::string(what) + " is missing the \"" + key + "\" key");
    return *it;
}

inline int require_dim(const json& j, const char* key, const char* what) {
    const json& v = require_key(j, key, what);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw Error(errkind::parse_error,
                    std::string(what) + " \"" + key + "\" must be a positive integer");
    return v.get<int>();
}

}  // namespace detail

// ============================================================
// Matrices
// ============================================================

/** Serializes to {"rows": m, "cols": n, "data": [row-major reals]}. */
inline json matrix_to_json(const DenseMatrix& M) {
    json data = json::array();
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) data.push_back(M(i, j));
    return json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", std::move(data)}};
}

inline DenseMatrix matrix_from_json(const json& j) {
    const int rows = detail::require_dim(j, "rows", "matrix");
    const int cols = detail::require_dim(j, "cols", "matrix");
    const json& data = detail::require_key(j, "data", "matrix");
    if (!data.is_array() ||
        data.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw Error(errkind::parse_error, "matrix \"data\" must hold rows*cols numbers");
    DenseMatrix M(rows, cols);
    std::size_t k = 0;
    for (int i = 0; i < rows; ++i)
        for (int j2 = 0; j2 < cols; ++j2) {
            const json& v = data[k++];
            if (!v.is_number())
                throw Error(errkind::parse_error, "matrix \"data\" must hold numbers");
            const double x = v.get<double>();
            if (!std::isfinite(x))
                throw Error(errkind::parse_error, "matrix entries must be finite");
            M(i, j2) = x;
        }
    return M;
}

// ============================================================
// Patterns
// ============================================================

/** Serializes to {"rows": m, "cols": n, "cells": [0/1 row-major]}. */
inline json pattern_to_json(const Pattern& P) {
    json cells = json::array();
    for (int v : P.cells()) cells.push_back(v);
    return json{{"rows", P.rows()}, {"cols", P.cols()}, {"cells", std::move(cells)}};
}

inline Pattern pattern_from_json(const json& j) {
    const int rows = detail::require_dim(j, "rows", "pattern");
    const int cols = detail::require_dim(j, "cols", "pattern");
    const json& cells = detail::require_key(j, "cells", "pattern");
    if (!cells.is_array() ||
        cells.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw Error(errkind::parse_error, "pattern \"cells\" must hold rows*cols values");
    std::vector<int> flat;
    flat.reserve(cells.size());
    for (const json& v : cells) {
        if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
            throw Error(errkind::parse_error, "pattern cells must be 0 or 1");
        flat.push_back(v.get<int>());
    }
    return Pattern(rows, cols, std::move(flat));
}

// ============================================================
// Sigma lists
// ============================================================

inline json sigmas_to_json(const SigmaList& s) {
    json out = json::array();
    for (int i = 0; i < static_cast<int>(s.size()); ++i) out.push_back(s[i]);
    return out;
}

inline SigmaList sigmas_from_json(const json& j) {
    if (!j.is_array()) throw Error(errkind::parse_error, "sigma list must be a JSON array");
    std::vector<double> v;
    v.reserve(j.size());
    for (const json& x : j) {
        if (!x.is_number())
            throw Error(errkind::parse_error, "sigma list must hold numbers");
        const double d = x.get<double>();
        if (!std::isfinite(d))
            throw Error(errkind::parse_error, "sigma values must be finite");
        v.push_back(d);
    }
    return SigmaList(std::move(v));
}

// ============================================================
// Solver configuration
// ============================================================

inline json config_to_json(const SolverConfig& c) {
    return json{{"epsilon_seed", c.epsilon_seed},   {"max_iters", c.max_iters},
                {"residual_tol", c.residual_tol},   {"damping", c.damping},
                {"step_backtrack", c.step_backtrack}, {"rng_seed", c.rng_seed}};
}

/**
 * Reads a solver configuration; absent keys keep their defaults and
 * unknown keys are rejected so typos cannot silently change a run.
 */
inline SolverConfig config_from_json(const json& j) {
    if (!j.is_object())
        throw Error(errkind::parse_error, "solver config must be a JSON object");
    SolverConfig c;
    for (const auto& [key, value] : j.items()) {
        if (key == "epsilon_seed" && value.is_number())
            c.epsilon_seed = value.get<double>();
        else if (key == "max_iters" && value.is_number_integer())
            c.max_iters = value.get<int>();
        else if (key == "residual_tol" && value.is_number())
            c.residual_tol = value.get<double>();
        else if (key == "damping" && value.is_number())
            c.damping = value.get<double>();
        else if (key == "step_backtrack" && value.is_number())
            c.step_backtrack = value.get<double>();
        else if (key == "rng_seed" && value.is_number_unsigned())
            c.rng_seed = value.get<std::uint64_t>();
        else
            throw Error(errkind::parse_error,
                        "unknown or ill-typed solver config key \"" + key + "\"");
    }
    return c;
}

// ============================================================
// Reports
// ============================================================

/**
 * Serializes a decision certificate: positive verdicts carry the
 * 1-based pivot rows of the invertible subsystem, negative verdicts
 * carry the violating matrix and its three residuals.
 */
inline json certificate_to_json(const SsvpCertificate& c) {
    json out{{"verdict", c.verdict()}};
    if (c.has_ssvp) {
        out["pivot_rows"] = c.pivot_rows;
    } else {
        out["Y"] = matrix_to_json(c.Y);
        out["residuals"] = {c.residuals[0], c.residuals[1], c.residuals[2]};
    }
    return out;
}

inline json classification_to_json(const ClosedFormVerdict& v) {
    return json{{"verdict", to_string(v.verdict)}, {"rule", v.rule}, {"detail", v.detail}};
}

inline json result_to_json(const RealizationResult& r) {
    return json{{"matrix", matrix_to_json(r.matrix)},
                {"achieved_sigmas", sigmas_to_json(r.achieved_sigmas)},
                {"sigma_error", r.sigma_error},
                {"pattern_ok", r.pattern_ok},
                {"method", r.method},
                {"iterations", r.iterations}};
}

}  // namespace ssvp
