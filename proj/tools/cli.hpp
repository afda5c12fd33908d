#pragma once

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdq/cdq.hpp"

namespace cdq::cli {

enum ExitCode : int { kOk = 0, kFalse = 1, kInputError = 2, kCapExceeded = 3 };

inline Circuit load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse(text.str());
    } catch (const ParseError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline Mode mode_from(const std::string& s) {
    auto m = parse_mode(s);
    if (!m) throw ValidationError("unknown mode '" + s + "'");
    return *m;
}

/// Runs one subcommand. Results go to `out`, diagnostics and traces to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"CNOT-dihedral circuit normalizer"};
    app.require_subcommand(1);

    std::string mode_s = "dihedral";
    auto add_mode = [&](CLI::App* sub) {
        sub->add_option("--mode", mode_s, "dihedral or cnott")->check(CLI::IsMember({"dihedral", "cnott"}));
    };

    std::string file, file2, via, input, what = "group";
    bool trace = false, as_json = false, enumerate = false;
    int qubits = 0;
    std::uint64_t cap = kDefaultClosureCap;

    auto* normalize_cmd = app.add_subcommand("normalize", "print the normal form of a circuit");
    normalize_cmd->add_option("file", file)->required();
    add_mode(normalize_cmd);
    normalize_cmd->add_option("--via", via, "semantic (default) or rewriting")
        ->check(CLI::IsMember({"semantic", "rewriting"}));
    normalize_cmd->add_flag("--trace", trace, "print applied rules to stderr; implies --via rewriting");

    auto* equiv_cmd = app.add_subcommand("equiv", "decide whether two circuits denote the same operator");
    equiv_cmd->add_option("file1", file)->required();
    equiv_cmd->add_option("file2", file2)->required();
    add_mode(equiv_cmd);

    auto* simulate_cmd = app.add_subcommand("simulate", "exact action of a circuit");
    simulate_cmd->add_option("file", file)->required();
    simulate_cmd->add_flag("--json", as_json, "print the whole operator as JSON");
    simulate_cmd->add_option("--input", input, "basis state, one character per qubit");

    auto* phasepoly_cmd = app.add_subcommand("phasepoly", "canonical phase polynomial and affine map");
    phasepoly_cmd->add_option("file", file)->required();

    auto* count_cmd = app.add_subcommand("count", "group orders by formula and by enumeration");
    count_cmd->add_option("--qubits", qubits)->required()->check(CLI::Range(1, 64));
    add_mode(count_cmd);
    count_cmd->add_option("--what", what)->check(CLI::IsMember({"group", "diagonal", "affine"}));
    count_cmd->add_flag("--enumerate", enumerate, "also count by brute force");
    count_cmd->add_option("--cap", cap, "largest set the enumeration may build");

    auto* verify_cmd = app.add_subcommand("verify-relations", "check every rewrite rule semantically");
    add_mode(verify_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kInputError;
    }

    try {
        const Mode mode = mode_from(mode_s);

        if (*normalize_cmd) {
            const Circuit c = load(file);
            if (trace || via == "rewriting") {
                Trace steps;
                const Circuit nf = normalize_by_rewriting(c, mode, trace ? &steps : nullptr);
                for (const auto& s : steps) err << s << '\n';
                out << print(nf);
            } else {
                out << print(normalize(c, mode));
            }
            return kOk;
        }

        if (*equiv_cmd) {
            const Circuit a = load(file);
            const Circuit b = load(file2);
            require_valid(a, mode);
            require_valid(b, mode);
            const bool same = equivalent(a, b);
            out << (same ? "equivalent" : "inequivalent") << '\n';
            return same ? kOk : kFalse;
        }

        if (*simulate_cmd) {
            const Circuit c = load(file);
            require_valid(c, Mode::Dihedral);
            if (!input.empty()) {
                BasisState x = 0;
                if (!from_bitstring(input, c.n, x)) {
                    throw ValidationError("input must be " + std::to_string(c.n) + " characters of 0 and 1");
                }
                const ExactOperator op = evaluate(c);
                const Action a = apply(op, x);
                if (as_json) {
                    out << nlohmann::json{{"phase", a.phase}, {"output", to_bitstring(a.state, c.n)}}.dump() << '\n';
                } else {
                    out << '(' << int(a.phase) << ", " << to_bitstring(a.state, c.n) << ")\n";
                }
            } else {
                out << to_json(evaluate(c)).dump(2) << '\n';
            }
            return kOk;
        }

        if (*phasepoly_cmd) {
            const Circuit c = load(file);
            require_valid(c, Mode::Dihedral);
            auto [poly, affine] = extract(c);
            nlohmann::json j;
            j["diagonal"] = to_json(canonicalize(to_phase_table(poly)));
            j["affine"] = affine_to_json(affine);
            out << j.dump(2) << '\n';
            return kOk;
        }

        if (*count_cmd) {
            CountKind kind = count_kind(mode);
            if (what == "diagonal") kind = CountKind::DiagonalOnly;
            if (what == "affine") kind = CountKind::AffineOnly;
            out << to_json(count(qubits, kind, enumerate, cap)).dump(2) << '\n';
            return kOk;
        }

        if (*verify_cmd) {
            bool all = true;
            for (const RewriteRule* r : rule_table(mode)) {
                const int n = min_arity(*r);
                const bool ok = verify_rule(*r, n) && verify_rule(*r, n + 1);
                all = all && ok;
                out << std::left << std::setw(22) << r->id << (ok ? "pass" : "FAIL") << '\n';
            }
            return all ? kOk : kFalse;
        }
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kCapExceeded;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

} // namespace cdq::cli
