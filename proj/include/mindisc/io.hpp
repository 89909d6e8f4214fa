// Copyright 2026 The mindisc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Problem file format and machine-readable reports.
 *
 * A problem file is a JSON object:
 *
 *     {
 *       "dim": 2,
 *       "spec": {"kind": "trine"},                       // optional
 *       "states": [{"prior": 0.5, "matrix": M}, ...],     // optional if spec
 *       "povm": [M, ...]                                  // optional
 *     }
 *
 * where each matrix M is a list of dim rows, each row a list of dim
 * [re, im] pairs (row-major). When "states" is absent the ensemble is
 * generated from "spec". Spec kinds:
 *
 *     {"kind": "pair", "overlap": c, "priors": [p1, p2]}
 *     {"kind": "trine"}
 *     {"kind": "random", "dim": d, "n": n, "seed": s}
 */
#pragma once

#include "certificate.hpp"
#include "ensemble.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "measurement.hpp"
#include "solver.hpp"

#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mindisc {

/// Malformed problem file: JSON syntax or schema. The message names the
/// position (line/column) or the offending field.
class ParseError : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

using Json = nlohmann::ordered_json;

struct ProblemFile {
    Index dim;
    std::optional<EnsembleSpec> spec;
    Ensemble ensemble;
    std::optional<Povm> povm;
};

namespace io_detail {

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text,
                                                       std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline const Json &field(const Json &obj, const char *key,
                         const std::string &where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(where + ": missing field \"" + key + "\"");
    }
    return obj.at(key);
}

inline double number(const Json &j, const std::string &where) {
    if (!j.is_number()) {
        throw ParseError(where + ": expected a number");
    }
    return j.get<double>();
}

inline std::int64_t integer(const Json &j, const std::string &where) {
    if (!j.is_number_integer()) {
        throw ParseError(where + ": expected an integer");
    }
    return j.get<std::int64_t>();
}

inline ComplexMatrix matrix(const Json &j, Index dim, const std::string &where) {
    if (!j.is_array()) {
        throw ParseError(where + ": expected a list of rows");
    }
    if (static_cast<Index>(j.size()) != dim) {
        throw ParseError(where + ": has " + std::to_string(j.size()) +
                         " rows, expected " + std::to_string(dim));
    }
    ComplexMatrix m(dim, dim);
    for (Index r = 0; r < dim; ++r) {
        const Json &row = j[static_cast<std::size_t>(r)];
        const std::string rw = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
            throw ParseError(rw + ": row must hold " + std::to_string(dim) +
                             " entries (matrix is not square)");
        }
        for (Index c = 0; c < dim; ++c) {
            const Json &e = row[static_cast<std::size_t>(c)];
            const std::string ew = rw + "[" + std::to_string(c) + "]";
            if (!e.is_array() || e.size() != 2) {
                throw ParseError(ew + ": expected an [re, im] pair");
            }
            m(r, c) = Complex(number(e[0], ew + "[0]"), number(e[1], ew + "[1]"));
        }
    }
    return m;
}

inline Json matrix_json(const ComplexMatrix &m) {
    Json rows = Json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Index c = 0; c < m.cols(); ++c) {
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline EnsembleSpec spec(const Json &j) {
    const std::string where = "spec";
    const Json &kind = field(j, "kind", where);
    if (!kind.is_string()) {
        throw ParseError("spec.kind: expected a string");
    }
    const std::string k = kind.get<std::string>();
    if (k == "pair") {
        PurePair p;
        p.overlap = number(field(j, "overlap", where), "spec.overlap");
        if (j.contains("priors")) {
            const Json &pr = j.at("priors");
            if (!pr.is_array() || pr.size() != 2) {
                throw ParseError("spec.priors: expected two numbers");
            }
            p.prior1 = number(pr[0], "spec.priors[0]");
            p.prior2 = number(pr[1], "spec.priors[1]");
        }
        return p;
    }
    if (k == "trine") {
        return Trine{};
    }
    if (k == "random") {
        RandomMixed r;
        r.dim = integer(field(j, "dim", where), "spec.dim");
        const std::int64_t n = integer(field(j, "n", where), "spec.n");
        if (n < 1) {
            throw ValidationError("spec.n: need at least one state");
        }
        r.count = static_cast<std::size_t>(n);
        const std::int64_t seed = integer(field(j, "seed", where), "spec.seed");
        r.seed = static_cast<std::uint64_t>(seed);
        return r;
    }
    throw ParseError("spec.kind: unknown kind \"" + k + "\"");
}

struct SpecJson {
    Json operator()(const PurePair &p) const {
        return Json{{"kind", "pair"},
                    {"overlap", p.overlap},
                    {"priors", Json::array({p.prior1, p.prior2})}};
    }
    Json operator()(const Trine &) const { return Json{{"kind", "trine"}}; }
    Json operator()(const RandomMixed &r) const {
        return Json{{"kind", "random"},
                    {"dim", r.dim},
                    {"n", r.count},
                    {"seed", r.seed}};
    }
};

} // namespace io_detail

[[nodiscard]] inline Json spec_to_json(const EnsembleSpec &s) {
    return std::visit(io_detail::SpecJson{}, s);
}

/// Throws ParseError for syntax/schema problems and the ValidationError
/// family when the contents are not a valid ensemble or measurement.
[[nodiscard]] inline ProblemFile parse_problem(std::string_view text) {
    Json root;
    try {
        root = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error &e) {
        const auto [line, col] = io_detail::line_column(text, e.byte);
        throw ParseError("syntax error at line " + std::to_string(line) +
                         ", column " + std::to_string(col) + ": " + e.what());
    }
    if (!root.is_object()) {
        throw ParseError("top level must be an object");
    }

    std::optional<EnsembleSpec> spec;
    if (root.contains("spec")) {
        spec = io_detail::spec(root.at("spec"));
    }

    std::optional<Ensemble> ens;
    std::optional<Index> dim;
    if (root.contains("dim")) {
        const std::int64_t d = io_detail::integer(root.at("dim"), "dim");
        if (d < 1) {
            throw ParseError("dim: must be positive");
        }
        dim = static_cast<Index>(d);
    }
    if (root.contains("states")) {
        if (!dim) {
            throw ParseError("dim: missing field \"dim\"");
        }
        const Json &states = root.at("states");
        if (!states.is_array() || states.empty()) {
            throw ParseError("states: expected a non-empty list");
        }
        std::vector<double> priors;
        std::vector<DensityMatrix> rhos;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const std::string where = "states[" + std::to_string(i) + "]";
            priors.push_back(io_detail::number(
                io_detail::field(states[i], "prior", where), where + ".prior"));
            const ComplexMatrix m = io_detail::matrix(
                io_detail::field(states[i], "matrix", where), *dim,
                where + ".matrix");
            try {
                rhos.push_back(validate_density(HermitianMatrix(m)));
            } catch (const ValidationError &e) {
                throw ValidationError(where + ": " + e.what());
            }
        }
        ens.emplace(std::move(priors), std::move(rhos));
    } else if (spec) {
        ens.emplace(generate(*spec));
        if (dim && *dim != ens->dim()) {
            throw ValidationError("dim: does not match the generated ensemble");
        }
    } else {
        throw ParseError("states: missing field \"states\" (and no \"spec\")");
    }
    dim = ens->dim();

    std::optional<Povm> povm;
    if (root.contains("povm")) {
        const Json &elems = root.at("povm");
        if (!elems.is_array() || elems.empty()) {
            throw ParseError("povm: expected a non-empty list of matrices");
        }
        std::vector<ComplexMatrix> raw;
        for (std::size_t i = 0; i < elems.size(); ++i) {
            raw.push_back(io_detail::matrix(elems[i], *dim,
                                            "povm[" + std::to_string(i) + "]"));
        }
        povm = validate_povm(raw);
    }
    return ProblemFile{*dim, std::move(spec), std::move(*ens), std::move(povm)};
}

/// Canonical text of a problem file; parse_problem(serialize_problem(p))
/// serializes to the same bytes.
[[nodiscard]] inline std::string serialize_problem(const ProblemFile &p) {
    Json root;
    root["dim"] = p.dim;
    if (p.spec) {
        root["spec"] = spec_to_json(*p.spec);
    }
    Json states = Json::array();
    for (std::size_t i = 0; i < p.ensemble.size(); ++i) {
        states.push_back(Json{{"prior", p.ensemble.prior(i)},
                              {"matrix", io_detail::matrix_json(
                                             p.ensemble.state(i).matrix())}});
    }
    root["states"] = std::move(states);
    if (p.povm) {
        Json elems = Json::array();
        for (const auto &e : p.povm->elements()) {
            elems.push_back(io_detail::matrix_json(e.matrix()));
        }
        root["povm"] = std::move(elems);
    }
    return root.dump(1) + "\n";
}

[[nodiscard]] inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << text;
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

[[nodiscard]] inline Json vector_json(const ComplexVector &v) {
    Json out = Json::array();
    for (Index a = 0; a < v.size(); ++a) {
        out.push_back(Json::array({v(a).real(), v(a).imag()}));
    }
    return out;
}

[[nodiscard]] inline Json certificate_json(const Certificate &c) {
    Json j;
    j["verdict"] = to_string(c.verdict);
    j["tolerance"] = c.tolerance;
    j["strict"] = c.strict;
    j["p_corr"] = c.p_corr;
    j["p_err"] = c.p_err();
    j["gamma_herm_residual"] = c.gamma_herm_residual;
    j["gj_min_eigenvalues"] = c.gj_min_eigenvalues;
    j["eq6_max_residual"] = c.eq6_max_residual;
    j["zero_product_max_residual"] = c.zero_product_max_residual;
    if (c.witness) {
        j["witness"] = Json{{"outcome", c.witness->outcome},
                            {"eigenvalue", c.witness->eigenvalue},
                            {"vector", vector_json(c.witness->vector)}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

[[nodiscard]] inline Json trace_json(const SolveTrace &t) {
    Json j;
    j["converged"] = t.converged;
    j["stop"] = to_string(t.stop);
    j["iterations"] = t.iterations_used;
    j["restarts"] = t.restarts;
    j["initial_p_corr"] = t.initial_p_corr;
    if (t.iterations.empty()) {
        j["final_epsilon"] = nullptr;
        j["final_lambda"] = nullptr;
    } else {
        j["final_epsilon"] = t.iterations.back().epsilon;
        j["final_lambda"] = t.iterations.back().lambda;
    }
    j["lambda_history_length"] = t.iterations.size();
    std::size_t polished = 0;
    for (const auto &step : t.iterations) {
        polished += step.polished ? 1 : 0;
    }
    j["polished_steps"] = polished;
    return j;
}

} // namespace mindisc
