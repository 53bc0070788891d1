// cli.hpp — command-line front end: problem ingestion, algorithm runs, type
// reports, the jacobian-bound harness, trace emission, and the classic
// single-step comparison.
//
// Exit codes are a stable contract: 0 ok, 2 parse, 3 type cap exceeded,
// 4 derivation budget exhausted, 5 usage.
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kohn/audit.hpp"
#include "kohn/driver.hpp"
#include "kohn/oracle.hpp"
#include "kohn/trace_io.hpp"

namespace kohn::cli {

constexpr int kOk = 0;
constexpr int kParseError = 2;
constexpr int kTypeCapError = 3;
constexpr int kBudgetError = 4;
constexpr int kUsageError = 5;

struct ProblemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Problem {
    RingPtr ring;
    std::vector<Polynomial> generators;
    RunConfig config;
};

inline Problem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ProblemError("cannot open problem file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ProblemError("problem file is not valid JSON: " + std::string(e.what()));
    }
    Problem p;
    try {
        auto vars = j.at("variables").get<std::vector<std::string>>();
        if (vars.size() < 2) throw ProblemError("need at least two variables");
        p.ring = make_ring(vars);
        for (const auto& g : j.at("generators")) {
            Polynomial poly = parse_poly(g.get<std::string>(), p.ring);
            if (poly.is_zero()) throw ProblemError("zero generator");
            if (!poly.constant_value().is_zero())
                throw ProblemError("generator does not vanish at the origin: " +
                                   g.get<std::string>());
            p.generators.push_back(std::move(poly));
        }
        if (p.generators.empty()) throw ProblemError("no generators");
        if (j.contains("config")) p.config = RunConfig::from_json(j.at("config"));
    } catch (const ProblemError&) {
        throw;
    } catch (const std::exception& e) {
        throw ProblemError(e.what());
    }
    return p;
}

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> max_retries;
    std::optional<unsigned> type_cap;
    std::optional<unsigned> degree_cap;
    std::string trace_path;
    std::string format = "text";

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "random seed");
        cmd->add_option("--max-retries", max_retries, "genericity retry budget");
        cmd->add_option("--type-cap", type_cap, "search cap for the effective type");
        cmd->add_option("--degree-cap", degree_cap, "oracle truncation degree cap");
        cmd->add_option("--trace", trace_path, "trace output path (jsonl)");
        cmd->add_option("--format", format, "output format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
    }

    RunConfig merge(RunConfig base) const {
        if (seed) base.seed = *seed;
        if (max_retries) base.max_retries = *max_retries;
        if (type_cap) base.type_cap = *type_cap;
        if (degree_cap) base.degree_cap = *degree_cap;
        return base;
    }
};

inline std::string step_label(StepKind k) {
    switch (k) {
        case StepKind::InitJacobian: return "jacobian of defining functions (procedure i)";
        case StepKind::GenJacobianFull: return "jacobian (procedure i)";
        case StepKind::GenJacobianPartial: return "partial jacobian (procedure i)";
        case StepKind::IdealElement: return "ideal element (procedure ii)";
        case StepKind::RootTaking: return "root taking (procedure iii)";
        case StepKind::WeierstrassExtraction: return "weierstrass extraction (induction)";
        case StepKind::EliminationRelation: return "elimination relation (induction)";
        case StepKind::CoordinateChange: return "coordinate change";
        case StepKind::AdjustPreMultiplier: return "pre-multiplier adjustment";
        case StepKind::Termination: return "termination";
    }
    return "?";
}

inline void render_trace_text(const Trace& t, std::ostream& out) {
    for (const auto& s : t.steps) {
        out << "s" << s.id << "  " << step_label(s.kind) << ": " << to_string(s.output);
        if (s.kind != StepKind::CoordinateChange) out << "   [order " << rat_str(s.epsilon) << "]";
        if (!s.inputs.empty()) {
            out << "   from";
            for (const auto& r : s.inputs) out << " " << r;
        }
        out << "\n";
    }
    if (t.status == RunStatus::Terminated) {
        out << "terminated in " << t.steps.size() << " steps; final subellipticity order "
            << rat_str(t.final_epsilon) << "; p* = " << t.p_star << "\n";
    } else {
        out << "failed after " << t.steps.size() << " steps: " << t.failure_reason
            << "; p* = " << t.p_star << "\n";
    }
}

inline int cmd_type(const std::string& file, const CommonFlags& flags, std::ostream& out,
                    std::ostream& err) {
    Problem p = load_problem(file);
    RunConfig cfg = flags.merge(p.config);
    try {
        TypeReport tr = Ideal(p.ring, p.generators).effective_type(cfg.type_cap);
        if (flags.format == "json") {
            nlohmann::json j = {{"p_star", tr.p_star},
                                {"lower", rat_str(tr.lower)},
                                {"upper", tr.upper}};
            out << j.dump() << "\n";
        } else {
            out << "p* = " << tr.p_star << "; p in [" << rat_str(tr.lower) << ", " << tr.upper
                << "]\n";
        }
        return kOk;
    } catch (const TypeCapExceeded& e) {
        err << "effective type not found: " << e.what() << "\n";
        return kTypeCapError;
    }
}

inline int cmd_run(const std::string& file, const CommonFlags& flags, std::ostream& out,
                   std::ostream& err) {
    Problem p = load_problem(file);
    RunConfig cfg = flags.merge(p.config);
    Trace t;
    try {
        t = run_algorithm(p.ring, p.generators, cfg);
    } catch (const TypeCapExceeded& e) {
        err << "type test failed: " << e.what() << "\n";
        return kTypeCapError;
    }
    std::filesystem::path trace_path =
        flags.trace_path.empty()
            ? std::filesystem::path(std::filesystem::path(file).stem().string() + ".trace.jsonl")
            : std::filesystem::path(flags.trace_path);
    write_trace(t, trace_path);
    if (flags.format == "json") {
        nlohmann::json j = {{"status", t.status == RunStatus::Terminated ? "terminated" : "failed"},
                            {"steps", t.steps.size()},
                            {"final_epsilon", t.status == RunStatus::Terminated
                                                  ? nlohmann::json(rat_str(t.final_epsilon))
                                                  : nlohmann::json()},
                            {"p_star", t.p_star},
                            {"trace", trace_path.string()}};
        if (!t.failure_reason.empty()) j["reason"] = t.failure_reason;
        out << j.dump() << "\n";
    } else {
        render_trace_text(t, out);
        out << "trace written to " << trace_path.string() << "\n";
    }
    return t.status == RunStatus::Terminated ? kOk : kBudgetError;
}

struct BoundOptions {
    std::string problem;
    unsigned trials = 0;
    unsigned perturbed = 0;
    unsigned vars = 2;
    unsigned max_exponent = 4;
};

inline int cmd_check_jacobian_bound(const BoundOptions& opt, const CommonFlags& flags,
                                    std::ostream& out, std::ostream& err) {
    unsigned type_cap = flags.type_cap.value_or(24);
    bool all_pass = true;
    auto all_vars = [](const RingPtr& ring) {
        std::vector<size_t> vs(ring->size());
        for (size_t i = 0; i < vs.size(); ++i) vs[i] = i;
        return vs;
    };
    auto check_map = [&](const RingPtr& ring, const std::vector<Polynomial>& map,
                         const std::string& label) {
        Polynomial jac = jacobian_det(map, all_vars(ring));
        if (jac.is_zero()) {
            out << label << ": skipped (zero jacobian, map is not finite-fiber)\n";
            return;
        }
        unsigned lam;
        try {
            lam = Ideal(ring, map).colength(type_cap);
        } catch (const TypeCapExceeded&) {
            out << label << ": skipped (colength not finite up to cap " << type_cap << ")\n";
            return;
        }
        unsigned ord = *jac.vanishing_order();
        bool pass = ord <= lam - 1;
        all_pass = all_pass && pass;
        out << label << ": lambda=" << lam << " ord=" << ord << " " << (pass ? "pass" : "fail")
            << "\n";
    };

    if (!opt.problem.empty()) {
        Problem p = load_problem(opt.problem);
        if (p.generators.size() != p.ring->size())
            throw ProblemError("jacobian bound check needs one generator per variable");
        check_map(p.ring, p.generators, "map");
    }
    if (opt.trials > 0 || opt.perturbed > 0) {
        if (opt.vars < 2 || opt.vars > 4) {
            err << "--vars must be between 2 and 4\n";
            return kUsageError;
        }
        std::vector<std::string> names;
        for (unsigned i = 0; i < opt.vars; ++i) names.push_back("z" + std::to_string(i + 1));
        RingPtr ring = make_ring(names);
        std::mt19937_64 rng(flags.seed.value_or(0));
        std::uniform_int_distribution<unsigned> exp_draw(1, opt.max_exponent);
        for (unsigned trial = 0; trial < opt.trials; ++trial) {
            std::vector<Polynomial> map;
            unsigned expect_lam = 1, expect_ord = 0;
            for (size_t i = 0; i < ring->size(); ++i) {
                unsigned e = exp_draw(rng);
                expect_lam *= e;
                expect_ord += e - 1;
                map.push_back(Polynomial::variable(ring, i).pow(e));
            }
            check_map(ring, map, "monomial " + std::to_string(trial + 1));
            unsigned lam = Ideal(ring, map).colength(type_cap);
            unsigned ord = *jacobian_det(map, all_vars(ring)).vanishing_order();
            if (lam != expect_lam || ord != expect_ord) {
                out << "monomial " << trial + 1 << ": closed-form mismatch\n";
                all_pass = false;
            }
        }
        std::uniform_int_distribution<long> coeff(-2, 2);
        for (unsigned trial = 0; trial < opt.perturbed; ++trial) {
            std::vector<Polynomial> map;
            for (size_t i = 0; i < ring->size(); ++i) {
                Polynomial f = Polynomial::variable(ring, i).pow(exp_draw(rng));
                Exps e(ring->size(), 0);
                for (size_t k = 0; k < ring->size(); ++k)
                    if (k != i) e[k] = 1 + static_cast<unsigned>(rng() % 2);
                f += Polynomial::monomial(ring, e, GaussianRational(make_rat(coeff(rng))));
                map.push_back(std::move(f));
            }
            check_map(ring, map, "perturbed " + std::to_string(trial + 1));
        }
    }
    if (opt.problem.empty() && opt.trials == 0 && opt.perturbed == 0) {
        err << "nothing to check: give a problem file or --trials\n";
        return kUsageError;
    }
    return all_pass ? kOk : 1;
}

inline int cmd_compare_classic(const std::string& file, const CommonFlags& flags,
                               std::ostream& out, std::ostream& err) {
    Problem p = load_problem(file);
    if (p.ring->size() != 2 || p.generators.size() != 2) {
        err << "the classic comparison is defined for two variables and two generators\n";
        return kUsageError;
    }
    RunConfig cfg = flags.merge(p.config);
    ClassicReport rep = classic_compare(p.ring, p.generators, cfg.degree_cap);
    const std::string& zname = p.ring->vars[0];
    if (rep.trivial) {
        out << "degenerate family: the first jacobian is a nonzero constant; both routes "
               "terminate immediately\n";
        return kOk;
    }
    Trace t = run_algorithm(p.ring, p.generators, cfg);
    if (flags.format == "json") {
        nlohmann::json j = {{"classic_radical", to_string(rep.radical_gen)},
                            {"classic_min_power", rep.min_power ? nlohmann::json(*rep.min_power)
                                                                : nlohmann::json()},
                            {"modified_status",
                             t.status == RunStatus::Terminated ? "terminated" : "failed"},
                            {"modified_final_epsilon",
                             t.status == RunStatus::Terminated
                                 ? nlohmann::json(rat_str(t.final_epsilon))
                                 : nlohmann::json()}};
        out << j.dump() << "\n";
    } else {
        out << "classic: radical generator " << to_string(rep.radical_gen) << "\n";
        if (rep.min_power) {
            out << "classic: minimal k with " << zname
                << "^k in the next-step ideal: " << *rep.min_power
                << " (grows with the tail exponent)\n";
        } else {
            out << "classic: no power of " << zname << " found within the cap\n";
        }
        if (t.status == RunStatus::Terminated) {
            out << "modified: terminated in " << t.steps.size() << " steps; final order "
                << rat_str(t.final_epsilon) << " (independent of the tail exponent)\n";
        } else {
            out << "modified: failed: " << t.failure_reason << "\n";
        }
    }
    return kOk;
}

struct OracleOptions {
    std::string problem;
    std::string poly;
};

inline unsigned oracle_cap(const Problem& p, const CommonFlags& flags, unsigned type_cap) {
    if (flags.degree_cap && *flags.degree_cap > 0) return *flags.degree_cap;
    unsigned p_star = Ideal(p.ring, p.generators).effective_type(type_cap).p_star;
    unsigned maxdeg = 0;
    for (const auto& g : p.generators) maxdeg = std::max(maxdeg, g.total_degree());
    return p_star + maxdeg;
}

inline int cmd_oracle(const std::string& which, const OracleOptions& opt,
                      const CommonFlags& flags, std::ostream& out, std::ostream& err) {
    Problem p = load_problem(opt.problem);
    unsigned type_cap = flags.type_cap.value_or(RunConfig{}.type_cap);
    try {
        unsigned d = oracle_cap(p, flags, type_cap);
        if (which == "member") {
            if (opt.poly.empty()) {
                err << "oracle member needs --poly\n";
                return kUsageError;
            }
            Polynomial probe = parse_poly(opt.poly, p.ring);
            out << (oracle::member_linalg(p.generators, probe, d) ? "true" : "false") << "\n";
        } else if (which == "colength") {
            out << oracle::colength_staircase(p.generators, d) << "\n";
        } else {
            out << oracle::type_bruteforce(p.generators, d) << "\n";
        }
        return kOk;
    } catch (const TypeCapExceeded& e) {
        err << e.what() << "\n";
        return kTypeCapError;
    } catch (const oracle::OracleCapExceeded& e) {
        err << e.what() << "\n";
        return kTypeCapError;
    }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact engine for subelliptic multipliers of special-domain boundary data"};
    app.require_subcommand(1);

    CommonFlags type_flags, run_flags, classic_flags, bound_flags, oracle_flags;
    BoundOptions bound_opt;
    OracleOptions oracle_opt;

    auto* type_cmd = app.add_subcommand("type", "effective type p* and the finite-type bracket");
    std::string type_file;
    type_cmd->add_option("problem", type_file, "problem file (json)")->required();
    type_flags.attach(type_cmd);

    auto* run_cmd = app.add_subcommand("run", "run the multiplier algorithm and emit a trace");
    std::string run_file;
    run_cmd->add_option("problem", run_file, "problem file (json)")->required();
    run_flags.attach(run_cmd);

    auto* bound_cmd =
        app.add_subcommand("check-jacobian-bound", "check ord(Jac) <= colength - 1 on maps");
    bound_cmd->add_option("problem", bound_opt.problem,
                          "problem file with one generator per variable");
    bound_cmd->add_option("--trials", bound_opt.trials, "random diagonal monomial maps");
    bound_cmd->add_option("--perturbed", bound_opt.perturbed, "random perturbed maps");
    bound_cmd->add_option("--vars", bound_opt.vars, "variables for random maps (default 2)");
    bound_cmd->add_option("--max-exponent", bound_opt.max_exponent, "exponent bound (default 4)");
    bound_flags.attach(bound_cmd);

    auto* classic_cmd = app.add_subcommand(
        "compare-classic", "one classic radical step vs the modified algorithm");
    std::string classic_file;
    classic_cmd->add_option("problem", classic_file, "problem file (json)")->required();
    classic_flags.attach(classic_cmd);

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force cross-checks");
    oracle_cmd->require_subcommand(1);
    auto* om = oracle_cmd->add_subcommand("member", "degree-truncated membership");
    auto* oc = oracle_cmd->add_subcommand("colength", "staircase colength");
    auto* ot = oracle_cmd->add_subcommand("type", "brute-force effective type");
    for (auto* sub : {om, oc, ot})
        sub->add_option("problem", oracle_opt.problem, "problem file (json)")->required();
    om->add_option("--poly", oracle_opt.poly, "probe polynomial");
    oracle_flags.attach(om);
    oracle_flags.attach(oc);
    oracle_flags.attach(ot);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (type_cmd->parsed()) return cmd_type(type_file, type_flags, out, err);
        if (run_cmd->parsed()) return cmd_run(run_file, run_flags, out, err);
        if (bound_cmd->parsed()) return cmd_check_jacobian_bound(bound_opt, bound_flags, out, err);
        if (classic_cmd->parsed())
            return cmd_compare_classic(classic_file, classic_flags, out, err);
        if (oracle_cmd->parsed()) {
            std::string which = om->parsed() ? "member" : oc->parsed() ? "colength" : "type";
            CommonFlags& fl = oracle_flags;
            return cmd_oracle(which, oracle_opt, fl, out, err);
        }
    } catch (const ProblemError& e) {
        err << "problem file error: " << e.what() << "\n";
        return kParseError;
    } catch (const ParseError& e) {
        err << "polynomial parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return kParseError;
    }
    return kUsageError;
}

}  // namespace kohn::cli
