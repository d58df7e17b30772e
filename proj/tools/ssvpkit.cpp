// ============================================================
// ssvpkit: command-line front end for the SSVP library
// ============================================================
//
// Verbs: check | certify | classify | term-rank | realize |
// superpattern | bifurcate | liberate | tangent.  Reports are JSON on
// standard output.  Exit codes: 0 for positive outcomes, 2 for
// mathematically negative verdicts (lacks-SSVP, infeasible, refused
// preconditions, invalid certificates), 1 for usage, I/O, or solver
// failures.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ssvp/classify.hpp>
#include <ssvp/flow.hpp>
#include <ssvp/io.hpp>
#include <ssvp/matrix.hpp>
#include <ssvp/pattern.hpp>
#include <ssvp/realize.hpp>
#include <ssvp/verify.hpp>

namespace {

using ssvp::DenseMatrix;
using ssvp::Error;
using ssvp::json;
using ssvp::Pattern;
using ssvp::SigmaList;
using ssvp::SolverConfig;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ssvp::errkind::invalid_input, "cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

DenseMatrix load_matrix(const std::string& path) {
    return ssvp::matrix_from_json(ssvp::parse_json_text(read_file(path)));
}

/** Patterns load from JSON objects or the row-per-line text form. */
Pattern load_pattern(const std::string& path) {
    const std::string text = read_file(path);
    const auto pos = text.find_first_not_of(" \t\r\n");
    if (pos != std::string::npos && text[pos] == '{')
        return ssvp::pattern_from_json(ssvp::parse_json_text(text));
    return ssvp::parse_pattern(text);
}

/** Comma-separated decimals, sorted non-increasing with a warning. */
SigmaList parse_sigmas(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double x = std::stod(item, &used);
            while (used < item.size() &&
                   (item[used] == ' ' || item[used] == '\t'))
                ++used;
            if (used != item.size()) throw std::invalid_argument(item);
            v.push_back(x);
        } catch (const std::exception&) {
            throw Error(ssvp::errkind::parse_error,
                        "bad sigma value \"" + item + "\" in list \"" + text + "\"");
        }
    }
    if (v.empty()) throw Error(ssvp::errkind::parse_error, "empty sigma list");
    SigmaList raw(v);
    SigmaList sorted = raw.sorted();
    for (std::size_t i = 0; i < v.size(); ++i)
        if (sorted[static_cast<int>(i)] != raw[static_cast<int>(i)]) {
            std::cerr << "warning: sigma list reordered into non-increasing order\n";
            break;
        }
    return sorted;
}

/** Inline JSON (leading brace) or a path to a JSON file. */
SolverConfig parse_config(const std::string& text) {
    if (text.empty()) return SolverConfig{};
    const auto pos = text.find_first_not_of(" \t\r\n");
    const std::string body =
        (pos != std::string::npos && text[pos] == '{') ? text : read_file(text);
    return ssvp::config_from_json(ssvp::parse_json_text(body));
}

void apply_seed_env(SolverConfig& cfg) {
    const char* env = std::getenv("SSVPKIT_SEED");
    if (env == nullptr || *env == '\0') return;
    try {
        std::size_t used = 0;
        const unsigned long long seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
        cfg.rng_seed = seed;
    } catch (const std::exception&) {
        throw Error(ssvp::errkind::invalid_input,
                    std::string("SSVPKIT_SEED must be an unsigned integer, got \"") + env +
                        "\"");
    }
}

int emit(const json& report, int code) {
    std::cout << report.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Strong Singular Value Property toolkit"};
    app.require_subcommand(1);

    std::string matrix_path, pattern_path, certificate_path, sigma_text, config_text,
        trace_path, family;
    bool exact = false;

    auto add_matrix = [&](CLI::App* sub, bool required = true) {
        auto* opt = sub->add_option("--matrix", matrix_path, "matrix JSON file");
        if (required) opt->required();
    };
    auto add_pattern = [&](CLI::App* sub, bool required = true) {
        auto* opt = sub->add_option("--pattern", pattern_path, "pattern file (JSON or text)");
        if (required) opt->required();
    };
    auto add_solver_flags = [&](CLI::App* sub) {
        sub->add_option("--config", config_text, "solver config (JSON file or inline JSON)");
        sub->add_option("--trace", trace_path, "iteration log file (\"-\" for stderr)");
    };

    CLI::App* check = app.add_subcommand("check", "decide the SSVP for a matrix");
    add_matrix(check);
    add_pattern(check, false);
    check->add_flag("--exact", exact, "force the exact rational rank route");

    CLI::App* certify =
        app.add_subcommand("certify", "validate a claimed violating matrix against A");
    add_matrix(certify);
    certify->add_option("--certificate", certificate_path, "violating matrix JSON file")
        ->required();
    add_pattern(certify, false);

    CLI::App* classify = app.add_subcommand("classify", "closed-form rule classification");
    add_matrix(classify);

    CLI::App* term_rank = app.add_subcommand("term-rank", "maximum matching of a pattern");
    term_rank->add_option("--pattern", pattern_path, "pattern file (JSON or text)")->required();

    CLI::App* realize = app.add_subcommand("realize", "construct a matrix with given sigmas");
    realize->add_option("--family", family, "path | c6 | distinct | cycle | orthonormal")
        ->required();
    realize->add_option("--sigmas", sigma_text, "comma-separated singular values")->required();
    add_pattern(realize, false);
    add_matrix(realize, false);
    add_solver_flags(realize);

    CLI::App* superpattern =
        app.add_subcommand("superpattern", "spread a matrix over a superpattern");
    add_matrix(superpattern);
    add_pattern(superpattern);
    add_solver_flags(superpattern);

    CLI::App* bifurcate =
        app.add_subcommand("bifurcate", "move the singular values at a fixed pattern");
    add_matrix(bifurcate);
    bifurcate->add_option("--sigmas", sigma_text, "comma-separated target values")->required();
    add_solver_flags(bifurcate);

    CLI::App* liberate =
        app.add_subcommand("liberate", "open wanted zero positions along a tangent direction");
    add_matrix(liberate);
    add_pattern(liberate);
    add_solver_flags(liberate);

    CLI::App* tangent = app.add_subcommand("tangent", "tangent space dimension and verdict");
    add_matrix(tangent);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const ssvp::CheckMode mode =
            exact ? ssvp::CheckMode::exact : ssvp::CheckMode::exact_when_rational;

        SolverConfig cfg = parse_config(config_text);
        apply_seed_env(cfg);
        std::ofstream trace_file;
        if (!trace_path.empty()) {
            if (trace_path == "-") {
                cfg.trace = &std::cerr;
            } else {
                trace_file.open(trace_path);
                if (!trace_file)
                    throw Error(ssvp::errkind::invalid_input,
                                "cannot write trace file: " + trace_path);
                cfg.trace = &trace_file;
            }
        }

        if (app.got_subcommand(check)) {
            const DenseMatrix A = load_matrix(matrix_path);
            const ssvp::SsvpCertificate cert =
                pattern_path.empty() ? ssvp::check_ssvp(A, mode)
                                     : ssvp::check_ssvp_wrt(A, load_pattern(pattern_path), mode);
            return emit(ssvp::certificate_to_json(cert), cert.has_ssvp ? 0 : 2);
        }
        if (app.got_subcommand(certify)) {
            const DenseMatrix A = load_matrix(matrix_path);
            const DenseMatrix Y = load_matrix(certificate_path);
            const Pattern S =
                pattern_path.empty() ? ssvp::pattern_of(A) : load_pattern(pattern_path);
            const ssvp::CertificateCheck res = ssvp::validate_certificate(A, Y, S);
            json report{{"valid", res.valid},
                        {"residuals", {res.residuals[0], res.residuals[1], res.residuals[2]}}};
            return emit(report, res.valid ? 0 : 2);
        }
        if (app.got_subcommand(classify)) {
            const ssvp::ClosedFormVerdict v = ssvp::classify_ssvp(load_matrix(matrix_path));
            return emit(ssvp::classification_to_json(v),
                        v.verdict == ssvp::Verdict::lacks_ssvp ? 2 : 0);
        }
        if (app.got_subcommand(term_rank)) {
            const Pattern P = load_pattern(pattern_path);
            const ssvp::TermRankResult tr = ssvp::term_rank_with_matching(P);
            json matching = json::array();
            for (const auto& [r, c] : tr.matching) matching.push_back({r + 1, c + 1});
            return emit(json{{"term_rank", tr.value}, {"matching", matching}}, 0);
        }
        if (app.got_subcommand(realize)) {
            const SigmaList sig = parse_sigmas(sigma_text);
            ssvp::RealizationResult res;
            if (family == "path") {
                res = ssvp::realize_path(sig);
            } else if (family == "c6") {
                res = ssvp::realize_c6(sig, cfg);
            } else if (family == "distinct") {
                if (pattern_path.empty())
                    throw Error(ssvp::errkind::invalid_input,
                                "--family distinct needs --pattern");
                res = ssvp::realize_distinct(load_pattern(pattern_path), sig, cfg);
            } else if (family == "cycle") {
                res = ssvp::realize_cycle_with_zero(static_cast<int>(sig.size()), sig, cfg);
            } else if (family == "orthonormal") {
                if (matrix_path.empty())
                    throw Error(ssvp::errkind::invalid_input,
                                "--family orthonormal needs --matrix");
                res = ssvp::realize_orthonormal_scaled(load_matrix(matrix_path), sig);
            } else {
                throw Error(ssvp::errkind::invalid_input, "unknown family: " + family);
            }
            return emit(ssvp::result_to_json(res), 0);
        }
        if (app.got_subcommand(superpattern)) {
            const ssvp::RealizationResult res = ssvp::superpattern_realize(
                load_matrix(matrix_path), load_pattern(pattern_path), cfg);
            return emit(ssvp::result_to_json(res), 0);
        }
        if (app.got_subcommand(bifurcate)) {
            const ssvp::RealizationResult res =
                ssvp::bifurcate(load_matrix(matrix_path), parse_sigmas(sigma_text), cfg);
            return emit(ssvp::result_to_json(res), 0);
        }
        if (app.got_subcommand(liberate)) {
            const DenseMatrix A = load_matrix(matrix_path);
            const Pattern wanted = load_pattern(pattern_path);
            const DenseMatrix D = ssvp::liberation_direction(A, wanted);
            const ssvp::RealizationResult res = ssvp::liberate(A, D, cfg);
            json report = ssvp::result_to_json(res);
            report["direction"] = ssvp::matrix_to_json(D);
            return emit(report, 0);
        }
        if (app.got_subcommand(tangent)) {
            const DenseMatrix A = load_matrix(matrix_path);
            const ssvp::TangentSpace ts = ssvp::tangent_basis(A);
            const bool has = ssvp::ssvp_via_tangent(A);
            json report{{"dimension", ts.dimension},
                        {"verdict", has ? "has-SSVP" : "lacks-SSVP"}};
            return emit(report, has ? 0 : 2);
        }
        throw Error(ssvp::errkind::invalid_input, "no verb given");
    } catch (const Error& e) {
        const std::string kind = e.kind();
        if (kind == ssvp::errkind::infeasible)
            return emit(json{{"verdict", "infeasible"}, {"reason", e.what()}}, 2);
        if (kind == ssvp::errkind::ssvp_required || kind == ssvp::errkind::ssvp_wrt_required)
            return emit(json{{"verdict", kind}, {"reason", e.what()}}, 2);
        return emit(json{{"verdict", "error"}, {"kind", kind}, {"reason", e.what()}}, 1);
    } catch (const std::exception& e) {
        return emit(json{{"verdict", "error"}, {"kind", "internal"}, {"reason", e.what()}}, 1);
    }
}
