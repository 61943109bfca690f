// pircode: build, verify, certify, bound, and emulate PIR array codes.
//
// Subcommands: construct, verify, certify, bounds, table, emulate, example.
// Exit codes: 0 success, 1 failed verification/emulation, 2 usage or input
// error, 3 internal invariant failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pir/array_code.hpp"
#include "pir/bounds.hpp"
#include "pir/constructions.hpp"
#include "pir/designs.hpp"
#include "pir/emulator.hpp"
#include "pir/errors.hpp"
#include "pir/verifier.hpp"

namespace {

using nlohmann::ordered_json;

std::string rate_str(const pir::Rational& r) {
    return r.str() + " (~" + r.decimal_str() + ")";
}

ordered_json rational_json(const pir::Rational& r) {
    return ordered_json{{"exact", r.str()}, {"approx", r.decimal_str()}};
}

void emit(const ordered_json& doc) { std::cout << doc.dump(1) << "\n"; }

// --- construct --------------------------------------------------------------

struct ConstructArgs {
    std::string family;
    int t = 0;
    int d = 0;
    std::string s_text;
    std::string steiner_path;
    std::string out_path;
    std::string cert_path;
    int max_servers = 1'000'000;
    std::string format = "text";
};

pir::ConstructionOutput run_family(const ConstructArgs& args) {
    pir::ConstructOptions opts{args.max_servers};
    if (args.family == "c1" || args.family == "c2") {
        int t = args.t, d = args.d;
        if (!args.s_text.empty()) {
            // s = 1 + d/t fixes d once t is known; without --t, take t from
            // the denominator of s in lowest terms
            pir::Rational s = pir::Rational::parse(args.s_text);
            if (t == 0) t = pir::checked_int(s.denominator(), "t");
            pir::Rational dr = (s - 1) * t;
            if (!dr.is_integer())
                throw pir::UnsupportedParameters("s = " + s.str() +
                                                 " is not 1 + d/t for integer d at t = " +
                                                 std::to_string(t));
            d = pir::checked_int(dr.numerator(), "d");
        }
        if (t < 2 || d < 1)
            throw pir::UnsupportedParameters("need --t and --d (or --s) with t >= 2, d >= 1");
        if (args.family == "c1") return pir::construction1(t, d, opts);
        pir::SteinerSystem sys = args.steiner_path.empty()
                                     ? pir::make_steiner(d, t + d)
                                     : pir::load_steiner_file(args.steiner_path);
        return pir::construction2(t, d, sys, opts);
    }
    if (args.family == "general") {
        if (args.s_text.empty() || args.t < 2)
            throw pir::UnsupportedParameters("general family needs --s and --t (t >= 2)");
        return pir::general_construction_rational(pir::Rational::parse(args.s_text), args.t,
                                                  opts);
    }
    throw pir::UnsupportedParameters("unknown family '" + args.family +
                                     "' (expected c1, c2, or general)");
}

int cmd_construct(const ConstructArgs& args) {
    auto out = run_family(args);
    pir::Rational rate = out.rate();
    auto report = pir::bound_report(out.family.s, out.family.t,
                                    {{out.family.label, rate}});
    bool attains = rate == report.best_upper;

    if (!args.out_path.empty()) pir::save_code_file(out.code, args.out_path, out.family.label);
    if (!args.cert_path.empty()) pir::save_certificate_file(out.certificate, args.cert_path);

    if (args.format == "json") {
        ordered_json doc;
        doc["family"] = out.family.label;
        doc["p"] = out.code.p();
        doc["t"] = out.code.t();
        doc["s"] = out.family.s.str();
        doc["m"] = out.predicted_m;
        doc["k"] = out.predicted_k;
        doc["rate"] = rational_json(rate);
        doc["best_upper_bound"] = rational_json(report.best_upper);
        doc["tight"] = attains;
        ordered_json eta = ordered_json::array();
        for (const auto& e : out.family.eta) eta.push_back(e.str());
        doc["eta"] = eta;
        emit(doc);
    } else {
        std::cout << "family: " << out.family.label << "  [s=" << out.family.s.str() << "]\n";
        std::cout << "p=" << out.code.p() << " t=" << out.code.t() << " m=" << out.predicted_m
                  << " k=" << out.predicted_k << " rate=" << rate.str() << " (~"
                  << rate.decimal_str() << ")\n";
        if (attains)
            std::cout << "attains the upper bound g(" << out.family.s.str() << ","
                      << out.family.t << ") = " << report.best_upper.str() << " (tight)\n";
        else
            std::cout << "best upper bound " << rate_str(report.best_upper)
                      << "; construction rate is below it\n";
        if (!args.out_path.empty()) std::cout << "wrote code to " << args.out_path << "\n";
        if (!args.cert_path.empty())
            std::cout << "wrote certificate to " << args.cert_path << "\n";
    }
    return 0;
}

// --- verify -----------------------------------------------------------------

int cmd_verify(const std::string& code_path, int exact_limit, long long node_budget,
               const std::string& format) {
    pir::PirArrayCode code = pir::load_code_file(code_path);
    pir::ExactOptions opts;
    opts.exact_limit = exact_limit;
    opts.node_budget = node_budget;
    auto report = pir::exact_k(code, opts);

    if (format == "json") {
        ordered_json doc;
        doc["p"] = code.p();
        doc["t"] = code.t();
        doc["m"] = code.m();
        doc["s"] = code.s().str();
        doc["k"] = report.k;
        doc["exact"] = report.exact;
        doc["rate"] = rational_json(report.rate);
        ordered_json parts = ordered_json::array();
        for (const auto& pr : report.parts)
            parts.push_back(ordered_json{{"part", pr.part + 1},
                                         {"max_disjoint", pr.max_disjoint},
                                         {"exact", pr.exact}});
        doc["parts"] = parts;
        emit(doc);
    } else {
        std::cout << "p=" << code.p() << " t=" << code.t() << " m=" << code.m()
                  << " s=" << code.s().str() << "\n";
        for (const auto& pr : report.parts)
            std::cout << "part x_" << pr.part + 1 << ": max_disjoint=" << pr.max_disjoint
                      << (pr.exact ? " (exact)" : " (lower bound)") << "\n";
        std::cout << "k=" << report.k << (report.exact ? " (exact)" : " (lower bound)")
                  << " rate=" << report.rate.str() << "\n";
        if (code.s() > 1) {
            pir::Rational cap = pir::upper_g_s(code.s());
            if (report.exact && report.rate >= cap)
                throw pir::InternalCheckError("exact rate " + report.rate.str() +
                                              " reaches the strict upper bound " + cap.str());
            std::cout << "upper bound check: " << report.rate.str() << " < " << cap.str()
                      << " ok\n";
        }
    }
    return 0;
}

// --- certify ----------------------------------------------------------------

int cmd_certify(const std::string& code_path, const std::string& cert_path,
                const std::string& format) {
    pir::PirArrayCode code = pir::load_code_file(code_path);
    pir::RecoveryCertificate cert = pir::load_certificate_file(cert_path);
    auto result = pir::check_certificate(code, cert);
    pir::Rational rate(cert.claimed_k, code.m());

    if (format == "json") {
        ordered_json doc;
        doc["ok"] = result.ok;
        doc["claimed_k"] = cert.claimed_k;
        doc["rate"] = rational_json(rate);
        if (!result.ok) {
            const auto& v = *result.violation;
            doc["violation"] = ordered_json{{"part", v.part + 1},
                                            {"set_index", v.set_index},
                                            {"message", v.message}};
        }
        emit(doc);
    } else if (result.ok) {
        std::cout << "certificate ok: claimed_k=" << cert.claimed_k << " rate=" << rate.str()
                  << "\n";
    } else {
        std::cout << "certificate invalid: " << result.violation->message << "\n";
    }
    return result.ok ? 0 : 1;
}

// --- bounds / table ---------------------------------------------------------

std::vector<pir::LabeledBound> constructive_extras(const pir::Rational& s, int t) {
    std::vector<pir::LabeledBound> extras;
    if (s > 2 && t >= 2) {
        try {
            auto counts = pir::general_counts(s, t);
            extras.push_back({"general construction (m=" + counts.m.str() + ")",
                              counts.rate()});
        } catch (const pir::UnsupportedParameters&) {
            // family does not apply at these parameters; formulas stand alone
        }
    }
    return extras;
}

int cmd_bounds(const std::string& s_text, int t, const std::string& format) {
    pir::Rational s = pir::Rational::parse(s_text);
    auto report = pir::bound_report(s, t, constructive_extras(s, t));

    if (format == "json") {
        ordered_json doc;
        doc["s"] = s.str();
        doc["t"] = t;
        auto dump_bounds = [](const std::vector<pir::LabeledBound>& bounds) {
            ordered_json arr = ordered_json::array();
            for (const auto& b : bounds)
                arr.push_back(ordered_json{{"label", b.label}, {"value", rational_json(b.value)}});
            return arr;
        };
        doc["lower"] = dump_bounds(report.lower);
        doc["upper"] = dump_bounds(report.upper);
        if (report.best_lower) doc["best_lower"] = rational_json(*report.best_lower);
        doc["best_upper"] = rational_json(report.best_upper);
        doc["tight"] = report.tight;
        emit(doc);
    } else {
        std::cout << "s=" << s.str() << " t=" << t << "\n";
        std::cout << "lower bounds:\n";
        if (report.lower.empty()) std::cout << "  (none applicable)\n";
        for (const auto& b : report.lower)
            std::cout << "  " << b.label << ": " << rate_str(b.value) << "\n";
        std::cout << "upper bounds:\n";
        for (const auto& b : report.upper)
            std::cout << "  " << b.label << ": " << rate_str(b.value) << "\n";
        if (report.tight)
            std::cout << "tight g=" << report.best_upper.str() << "\n";
        else if (report.best_lower)
            std::cout << "best_lower=" << report.best_lower->str()
                      << " best_upper=" << report.best_upper.str() << " (gap open)\n";
        else
            std::cout << "no lower bound applies; best_upper=" << report.best_upper.str()
                      << "\n";
    }
    return 0;
}

int cmd_table(const std::string& s_list, int t_min, int t_max, const std::string& out_path) {
    std::vector<pir::Rational> s_values;
    std::size_t start = 0;
    while (start <= s_list.size()) {
        std::size_t comma = s_list.find(',', start);
        std::string item = s_list.substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
        if (!item.empty()) s_values.push_back(pir::Rational::parse(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (s_values.empty()) throw pir::UnsupportedParameters("--s list is empty");
    auto rows = pir::bound_table(s_values, t_min, t_max);
    if (out_path.empty()) {
        pir::write_bound_csv(std::cout, rows);
    } else {
        std::ofstream out(out_path);
        if (!out) throw pir::ParseError("cannot write " + out_path);
        pir::write_bound_csv(out, rows);
        std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    }
    return 0;
}

// --- emulate ----------------------------------------------------------------

int cmd_emulate(const std::string& code_path, const std::string& cert_path, int trials,
                std::uint64_t seed, int word_bits, const std::string& format) {
    pir::PirArrayCode code = pir::load_code_file(code_path);
    pir::RecoveryCertificate cert = pir::load_certificate_file(cert_path);
    auto report = pir::emulate_trials(code, cert, trials, seed, word_bits);

    if (format == "json") {
        ordered_json doc;
        doc["trials"] = trials;
        doc["seed"] = seed;
        doc["word_bits"] = word_bits;
        doc["recoveries"] = report.recoveries;
        doc["failures"] = report.failures.size();
        emit(doc);
    } else {
        std::cout << "trials=" << trials << " seed=" << seed << " word_bits=" << word_bits
                  << " recoveries=" << report.recoveries << " failures="
                  << report.failures.size() << "\n";
        for (std::size_t i = 0; i < report.failures.size() && i < 10; ++i) {
            const auto& f = report.failures[i];
            std::cout << "  part x_" << f.part + 1 << " set " << f.set_index << ": got "
                      << f.got << ", want " << f.want << "\n";
        }
    }
    return report.ok() ? 0 : 1;
}

// --- example ----------------------------------------------------------------

int cmd_example(const std::string& out_path, const std::string& cert_path) {
    pir::PirArrayCode code = pir::paper_example();
    if (out_path.empty()) {
        std::cout << pir::save_code(code, "example(7x4, p=12)");
    } else {
        pir::save_code_file(code, out_path, "example(7x4, p=12)");
        std::cout << "wrote code to " << out_path << "\n";
    }
    if (!cert_path.empty()) {
        auto cert = pir::certificate_from_report(pir::exact_k(code));
        pir::save_certificate_file(cert, cert_path);
        std::cout << "wrote certificate to " << cert_path << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PIR array code toolkit"};
    app.require_subcommand(1);

    ConstructArgs cargs;
    auto* construct = app.add_subcommand("construct", "build a code from a known family");
    construct->add_option("--family", cargs.family, "c1, c2, or general")->required();
    construct->add_option("--t", cargs.t, "cells per server");
    construct->add_option("--d", cargs.d, "s = 1 + d/t (families c1/c2)");
    construct->add_option("--s", cargs.s_text, "target s as a rational, e.g. 3 or 7/3");
    construct->add_option("--steiner", cargs.steiner_path, "Steiner system JSON for c2");
    construct->add_option("--out", cargs.out_path, "write the code JSON here");
    construct->add_option("--cert", cargs.cert_path, "write the recovery certificate here");
    construct->add_option("--max-servers", cargs.max_servers, "server count cap");
    construct->add_option("--format", cargs.format, "text or json");

    std::string v_code;
    int v_limit = 20;
    long long v_budget = 10'000'000;
    std::string v_format = "text";
    auto* verify = app.add_subcommand("verify", "compute k by exhaustive verification");
    verify->add_option("--code", v_code, "code JSON file")->required();
    verify->add_option("--exact-limit", v_limit, "max m for exact verification");
    verify->add_option("--node-budget", v_budget, "packing search node budget");
    verify->add_option("--format", v_format, "text or json");

    std::string c_code, c_cert, c_format = "text";
    auto* certify = app.add_subcommand("certify", "check a recovery certificate");
    certify->add_option("--code", c_code, "code JSON file")->required();
    certify->add_option("--cert", c_cert, "certificate JSON file")->required();
    certify->add_option("--format", c_format, "text or json");

    std::string b_s;
    int b_t = 0;
    std::string b_format = "text";
    auto* bounds = app.add_subcommand("bounds", "list known bounds on g(s,t)");
    bounds->add_option("--s", b_s, "storage rate s as a rational")->required();
    bounds->add_option("--t", b_t, "cells per server")->required();
    bounds->add_option("--format", b_format, "text or json");

    std::string t_s, t_out;
    int t_min = 1, t_max = 0;
    auto* table = app.add_subcommand("table", "bound table as CSV");
    table->add_option("--s", t_s, "comma-separated list of s values")->required();
    table->add_option("--t-min", t_min, "first t column");
    table->add_option("--t-max", t_max, "last t column")->required();
    table->add_option("--out", t_out, "CSV output file (default stdout)");

    std::string e_code, e_cert, e_format = "text";
    int e_trials = 1, e_bits = 64;
    std::uint64_t e_seed = 1;
    auto* emulate = app.add_subcommand("emulate", "recover every part from random databases");
    emulate->add_option("--code", e_code, "code JSON file")->required();
    emulate->add_option("--cert", e_cert, "certificate JSON file")->required();
    emulate->add_option("--trials", e_trials, "number of random databases");
    emulate->add_option("--seed", e_seed, "base RNG seed");
    emulate->add_option("--word-bits", e_bits, "bits per part word (1..64)");
    emulate->add_option("--format", e_format, "text or json");

    std::string x_out, x_cert;
    auto* example = app.add_subcommand("example", "emit the built-in 7x4 example code");
    example->add_option("--out", x_out, "write the code JSON here");
    example->add_option("--cert", x_cert, "write its certificate here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (construct->parsed()) return cmd_construct(cargs);
        if (verify->parsed()) return cmd_verify(v_code, v_limit, v_budget, v_format);
        if (certify->parsed()) return cmd_certify(c_code, c_cert, c_format);
        if (bounds->parsed()) return cmd_bounds(b_s, b_t, b_format);
        if (table->parsed()) return cmd_table(t_s, t_min, t_max, t_out);
        if (emulate->parsed()) return cmd_emulate(e_code, e_cert, e_trials, e_seed, e_bits, e_format);
        if (example->parsed()) return cmd_example(x_out, x_cert);
    } catch (const pir::InternalCheckError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const pir::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
