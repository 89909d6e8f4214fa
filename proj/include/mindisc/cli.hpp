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
 * Command-line front end: certify, solve and generate.
 *
 * Exit status contract:
 *   0  optimal / converged / written
 *   1  not optimal (certify) or not converged (solve)
 *   2  validation error (state or measurement violates its invariants)
 *   3  parse error in the problem file
 *   4  I/O error (missing input, unwritable output)
 *   5  numeric failure
 *   64 usage error
 */
#pragma once

#include "certificate.hpp"
#include "ensemble.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "measurement.hpp"
#include "solver.hpp"

#include "CLI11.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mindisc::cli {

enum ExitCode : int {
    kOptimal = 0,
    kNotOptimal = 1,
    kValidation = 2,
    kParse = 3,
    kIo = 4,
    kNumeric = 5,
    kUsage = 64,
};

/// "sha256:<hex>" of the given bytes.
[[nodiscard]] inline std::string digest(const std::string &bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(),
                   nullptr) != 1) {
        throw Error("sha256 digest failed");
    }
    std::ostringstream hex;
    hex << "sha256:" << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) {
        hex << std::setw(2) << static_cast<int>(md[i]);
    }
    return hex.str();
}

struct Streams {
    std::ostream &out;
    std::ostream &err;
};

struct CertifyArgs {
    std::string input;
    double tol = kDefaultCertifyTol;
    bool strict = false;
    bool json_only = false;
    std::string report;
};

struct SolveArgs {
    std::string input;
    double tol = kDefaultCertifyTol;
    std::size_t max_iter = 10000;
    std::uint64_t seed = 0;
    std::string start = "uniform";
    bool no_polish = false;
    std::string output;
    bool json_only = false;
    std::string report;
};

struct GenerateArgs {
    std::string kind;
    Index dim = 2;
    std::size_t n = 2;
    double overlap = 0.0;
    std::vector<double> priors{0.5, 0.5};
    std::uint64_t seed = 0;
    std::string output;
};

namespace detail {

inline void warn_zero_priors(const Ensemble &ens, std::ostream &err) {
    for (std::size_t i = 0; i < ens.size(); ++i) {
        if (ens.prior(i) == 0.0) {
            err << "warning: state " << i << " has zero prior\n";
        }
    }
}

inline void print_certificate(const Certificate &c, std::ostream &out) {
    out << std::setprecision(17);
    out << "verdict:                    " << to_string(c.verdict)
        << (c.strict ? " (strict)" : "") << "\n";
    out << "tolerance:                  " << c.tolerance << "\n";
    out << "P_corr:                     " << c.p_corr << "\n";
    out << "P_err:                      " << c.p_err() << "\n";
    out << "Gamma hermiticity residual: " << c.gamma_herm_residual << "\n";
    out << "min eig(G_j):              ";
    for (double v : c.gj_min_eigenvalues) {
        out << " " << v;
    }
    out << "\n";
    out << "equality residual:          " << c.eq6_max_residual << "\n";
    out << "zero-product residual:      " << c.zero_product_max_residual << "\n";
    if (c.witness) {
        out << "witness: outcome " << c.witness->outcome << ", eigenvalue "
            << c.witness->eigenvalue << ", vector";
        for (Index a = 0; a < c.witness->vector.size(); ++a) {
            out << " (" << c.witness->vector(a).real() << ", "
                << c.witness->vector(a).imag() << ")";
        }
        out << "\n";
    }
}

inline void emit(const Json &report, const std::string &text, bool json_only,
                 const std::string &report_path, std::ostream &out) {
    const std::string block = report.dump(1) + "\n";
    if (!report_path.empty()) {
        write_file(report_path, block);
    }
    if (!json_only) {
        out << text << "\n";
    }
    out << block;
}

template <class F>
int guarded(std::ostream &err, F &&body) {
    try {
        return body();
    } catch (const IoError &e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const ValidationError &e) {
        err << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const DimensionMismatch &e) {
        err << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const InvalidArgument &e) {
        err << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const NumericFailure &e) {
        err << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    }
}

} // namespace detail

inline int cmd_certify(const CertifyArgs &args, Streams io) {
    return detail::guarded(io.err, [&] {
        const std::string bytes = read_file(args.input);
        const ProblemFile p = parse_problem(bytes);
        if (!p.povm) {
            throw ValidationError("certify needs a \"povm\" in the problem file");
        }
        detail::warn_zero_priors(p.ensemble, io.err);
        const Certificate c = certify(p.ensemble, *p.povm, {args.tol, args.strict});

        Json report;
        report["command"] = "certify";
        report["input_digest"] = digest(bytes);
        report["p_corr"] = c.p_corr;
        report["p_err"] = c.p_err();
        report["certificate"] = certificate_json(c);

        std::ostringstream text;
        text << "certify " << args.input << "\n";
        detail::print_certificate(c, text);
        detail::emit(report, text.str(), args.json_only, args.report, io.out);
        return c.optimal() ? kOptimal : kNotOptimal;
    });
}

inline int cmd_solve(const SolveArgs &args, Streams io) {
    return detail::guarded(io.err, [&] {
        const std::string bytes = read_file(args.input);
        ProblemFile p = parse_problem(bytes);
        detail::warn_zero_priors(p.ensemble, io.err);

        SolverConfig cfg;
        cfg.tol = args.tol;
        cfg.max_iter = args.max_iter;
        cfg.seed = args.seed;
        cfg.polish = !args.no_polish;
        std::optional<Povm> start;
        if (args.start == "uniform") {
            cfg.start = StartKind::Uniform;
        } else if (args.start == "srm") {
            cfg.start = StartKind::SquareRoot;
        } else if (args.start == "file") {
            if (!p.povm) {
                throw ValidationError("--start file needs a \"povm\" in the problem file");
            }
            start = *p.povm;
        } else {
            throw InvalidArgument("unknown --start " + args.start);
        }

        const SolveTrace t = solve(p.ensemble, start, cfg);
        const Certificate &c = t.final_certificate;

        const std::string output =
            args.output.empty() ? args.input + ".solution.json" : args.output;
        p.povm = t.solution;
        write_file(output, serialize_problem(p));

        Json report;
        report["command"] = "solve";
        report["input_digest"] = digest(bytes);
        report["config"] = Json{{"tol", cfg.tol},
                                {"max_iter", cfg.max_iter},
                                {"seed", cfg.seed},
                                {"start", args.start},
                                {"polish", cfg.polish},
                                {"stall_threshold", cfg.stall_threshold}};
        report["p_corr"] = c.p_corr;
        report["p_err"] = c.p_err();
        report["certificate"] = certificate_json(c);
        report["solver"] = trace_json(t);

        std::ostringstream text;
        text << "solve " << args.input << "\n";
        text << std::setprecision(17);
        text << "converged:                  " << (t.converged ? "yes" : "no")
             << " (" << to_string(t.stop) << ")\n";
        text << "iterations:                 " << t.iterations_used << "\n";
        text << "restarts:                   " << t.restarts << "\n";
        text << "initial P_corr:             " << t.initial_p_corr << "\n";
        if (!t.iterations.empty()) {
            text << "final epsilon:              " << t.iterations.back().epsilon
                 << "\n";
        }
        text << "solution written to:        " << output << "\n";
        detail::print_certificate(c, text);
        detail::emit(report, text.str(), args.json_only, args.report, io.out);
        return t.converged ? kOptimal : kNotOptimal;
    });
}

inline int cmd_generate(const GenerateArgs &args, Streams io) {
    return detail::guarded(io.err, [&] {
        EnsembleSpec spec;
        if (args.kind == "pair") {
            if (args.priors.size() != 2) {
                throw InvalidArgument("--priors needs two values for kind=pair");
            }
            spec = PurePair{args.overlap, args.priors[0], args.priors[1]};
        } else if (args.kind == "trine") {
            spec = Trine{};
        } else if (args.kind == "random") {
            spec = RandomMixed{args.dim, args.n, args.seed};
        } else {
            throw InvalidArgument("unknown --kind " + args.kind);
        }
        Ensemble ens = generate(spec);
        const Index dim = ens.dim();
        const std::string text =
            serialize_problem(ProblemFile{dim, spec, std::move(ens), std::nullopt});
        if (args.output.empty()) {
            io.out << text;
        } else {
            write_file(args.output, text);
        }
        return kOptimal;
    });
}

/// Parses argv and dispatches. Returns the process exit status.
inline int run(int argc, const char *const *argv, Streams io) {
    CLI::App app{"mindisc: minimum-error measurements for quantum state "
                 "discrimination"};
    app.require_subcommand(1);

    CertifyArgs cert;
    auto *c = app.add_subcommand("certify", "check a measurement for optimality");
    c->add_option("input", cert.input, "problem file with states and povm")
        ->required();
    c->add_option("--tol", cert.tol, "certificate tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    c->add_flag("--strict", cert.strict,
                "also require the equality-condition residuals within tol");
    c->add_flag("--json", cert.json_only, "print only the machine-readable report");
    c->add_option("--report", cert.report, "also write the report to this file");

    SolveArgs sol;
    auto *s = app.add_subcommand("solve", "find a minimum-error measurement");
    s->add_option("input", sol.input, "problem file with states")->required();
    s->add_option("--tol", sol.tol, "certificate tolerance")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    s->add_option("--max-iter", sol.max_iter, "ascent iteration limit")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    s->add_option("--seed", sol.seed, "seed for random restarts")
        ->capture_default_str();
    s->add_option("--start", sol.start, "starting measurement")
        ->capture_default_str()
        ->check(CLI::IsMember({"uniform", "srm", "file"}));
    s->add_flag("--no-polish", sol.no_polish,
                "perturbation steps only, without the fixed-point polish");
    s->add_option("--output", sol.output,
                  "solution problem file (default: <input>.solution.json)");
    s->add_flag("--json", sol.json_only, "print only the machine-readable report");
    s->add_option("--report", sol.report, "also write the report to this file");

    GenerateArgs gen;
    auto *g = app.add_subcommand("generate", "write a test ensemble problem file");
    g->add_option("--kind", gen.kind, "ensemble kind")
        ->required()
        ->check(CLI::IsMember({"pair", "trine", "random"}));
    g->add_option("--dim", gen.dim, "dimension (kind=random)")->capture_default_str();
    g->add_option("--n", gen.n, "number of states (kind=random)")
        ->capture_default_str();
    g->add_option("--overlap", gen.overlap, "|<psi1|psi2>| (kind=pair)")
        ->capture_default_str();
    g->add_option("--priors", gen.priors, "two priors (kind=pair)")
        ->capture_default_str()
        ->delimiter(',');
    g->add_option("--seed", gen.seed, "seed (kind=random)")->capture_default_str();
    g->add_option("--output", gen.output, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e, io.out, io.err);
        }
        io.err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    if (c->parsed()) {
        return cmd_certify(cert, io);
    }
    if (s->parsed()) {
        return cmd_solve(sol, io);
    }
    return cmd_generate(gen, io);
}

} // namespace mindisc::cli
