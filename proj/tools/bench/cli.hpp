#pragma once

// Argument parsing and run dispatch for kronmode_bench.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kronmode/kronmode.hpp"
#include "report_io.hpp"
#include "selftest.hpp"

namespace kronmode::bench {

enum class Command { heat, pipeflow, schrodinger_ti, schrodinger_td, gpe, sweep, selftest };
enum class OutputFormat { csv, json, table };

/// Fully resolved parameters of one problem run.
struct RunSpec {
    std::string problem;
    std::size_t n = 0;
    std::size_t k = 0;
    int p = 2;
    double T = 1.0;
    std::size_t steps = 1;
    double tau = 0.1;  // gpe only
    std::string precision = "double";
    NormKind norm = NormKind::max;
    std::size_t reference_k = 120;        // schrodinger-ti
    std::size_t reference_steps = 2048;   // schrodinger-td

    friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

struct CliConfig {
    Command command = Command::selftest;
    std::vector<RunSpec> plan;  // empty for selftest
    OutputFormat output = OutputFormat::table;
    std::string out_path;  // empty: stdout
    std::uint64_t seed = 12345;
    std::size_t threads = 0;  // 0: KRONMODE_THREADS or 1
};

struct ParseResult {
    std::optional<CliConfig> config;
    int exit_code = 0;
    std::string message;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

struct ProblemDefaults {
    std::size_t n, k;
    double T;
    std::size_t steps;
};

[[nodiscard]] inline ProblemDefaults defaults_for(const std::string& problem) {
    if (problem == "heat") return {40, 0, 1.0, 1};
    if (problem == "pipeflow") return {32, 0, 4.0, 1};
    if (problem == "schrodinger-ti") return {0, 40, 1.0, 1};
    if (problem == "schrodinger-td") return {0, 20, 1.0, 50};
    if (problem == "gpe") return {32, 0, 1.0, 10};
    throw config_error("unknown problem '" + problem + "'");
}

namespace detail {

struct RawOptions {
    std::vector<std::string> n, k, p, steps;
    std::string problem;
    std::string T, tau, precision = "double", norm = "max";
    std::string reference_k, reference_steps;
};

inline std::size_t parse_count(const std::string& flag, const std::string& s, std::size_t min) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty()) throw config_error(flag + ": expected an integer, got '" + s + "'");
    if (v < static_cast<long long>(min))
        throw config_error(flag + ": must be at least " + std::to_string(min) + ", got " + s);
    return static_cast<std::size_t>(v);
}

inline double parse_positive(const std::string& flag, const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty()) throw config_error(flag + ": expected a number, got '" + s + "'");
    if (!(v > 0) || !std::isfinite(v)) throw config_error(flag + ": must be positive and finite, got " + s);
    return v;
}

inline int parse_order(const std::string& s) {
    if (s == "inf") return problems::spectral_p;
    const auto p = parse_count("--p", s, 2);
    if (p % 2 != 0 || p > 12) throw config_error("--p: must be an even order in [2, 12] or 'inf', got " + s);
    return static_cast<int>(p);
}

template <typename T, typename F>
std::vector<T> parse_list(const std::vector<std::string>& raw, std::vector<T> fallback, bool allow_many,
                          const std::string& flag, F&& f) {
    if (raw.empty()) return fallback;
    if (!allow_many && raw.size() > 1) throw config_error(flag + ": lists are only accepted by 'sweep'");
    std::vector<T> out;
    for (const auto& s : raw) out.push_back(f(s));
    return out;
}

inline std::vector<RunSpec> build_plan(const std::string& problem, const RawOptions& o, bool sweep) {
    const auto d = defaults_for(problem);
    const bool uses_n = problem == "heat" || problem == "pipeflow" || problem == "gpe";
    const bool uses_k = !uses_n;
    const bool uses_steps = problem == "heat" || problem == "pipeflow" || problem == "schrodinger-td";
    const auto reject = [&](bool given, const char* flag) {
        if (given) throw config_error(std::string(flag) + ": not applicable to '" + problem + "'");
    };
    reject(!uses_n && !o.n.empty(), "--n");
    reject(!uses_k && !o.k.empty(), "--k");
    reject(problem != "heat" && !o.p.empty(), "--p");
    reject(!uses_steps && !o.steps.empty(), "--steps");
    reject(problem != "gpe" && !o.tau.empty(), "--tau");
    reject(problem != "schrodinger-ti" && !o.reference_k.empty(), "--reference-k");
    reject(problem != "schrodinger-td" && !o.reference_steps.empty(), "--reference-steps");

    const bool fd_problem = problem == "heat" || problem == "pipeflow";
    if (!fd_problem && o.precision != "double")
        throw config_error("--precision: '" + problem + "' supports double only");
    if (o.precision != "single" && o.precision != "double")
        throw config_error("--precision: expected single or double, got '" + o.precision + "'");

    RunSpec base;
    base.problem = problem;
    base.precision = o.precision;
    base.T = o.T.empty() ? d.T : parse_positive("--T", o.T);
    if (problem == "gpe") {
        base.norm = NormKind::weighted_two;
        if (o.norm != "max" && o.norm != "weighted_two")
            throw config_error("--norm: 'gpe' reports the weighted two-norm drift");
        base.tau = o.tau.empty() ? 0.1 : parse_positive("--tau", o.tau);
        const double ratio = base.T / base.tau;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
            throw config_error("--T: must be a multiple of --tau");
    } else {
        try {
            base.norm = parse_norm(o.norm);
        } catch (const config_error&) {
            throw config_error("--norm: expected max or two, got '" + o.norm + "'");
        }
        if (base.norm == NormKind::weighted_two) throw config_error("--norm: weighted_two is only used by 'gpe'");
    }
    if (!o.reference_k.empty()) base.reference_k = parse_count("--reference-k", o.reference_k, 8);
    if (!o.reference_steps.empty()) base.reference_steps = parse_count("--reference-steps", o.reference_steps, 1);

    const std::size_t n_min = problem == "heat" ? 8 : 16;
    const auto ns = parse_list<std::size_t>(o.n, {d.n}, sweep, "--n",
                                            [&](const std::string& s) { return parse_count("--n", s, n_min); });
    const auto ks = parse_list<std::size_t>(
        o.k, {d.k}, sweep, "--k", [&](const std::string& s) {
            const auto k = parse_count("--k", s, 8);
            if (k > hermite::max_quadrature_size) throw config_error("--k: must not exceed 500");
            return k;
        });
    const auto ps = parse_list<int>(o.p, {2}, sweep, "--p", parse_order);
    const auto steps = parse_list<std::size_t>(o.steps, {d.steps}, sweep, "--steps",
                                               [](const std::string& s) { return parse_count("--steps", s, 1); });
    if (problem == "schrodinger-ti" && base.reference_k <= *std::max_element(ks.begin(), ks.end()))
        throw config_error("--reference-k: must exceed --k");

    std::vector<RunSpec> plan;
    for (auto n : ns)
        for (auto k : ks)
            for (auto p : ps)
                for (auto st : steps) {
                    RunSpec r = base;
                    r.n = uses_n ? n : 0;
                    r.k = uses_k ? k : 0;
                    r.p = p;
                    r.steps = problem == "gpe" ? static_cast<std::size_t>(std::llround(base.T / base.tau))
                              : uses_steps     ? st
                                               : 1;
                    plan.push_back(r);
                }
    return plan;
}

}  // namespace detail

/// Parses argv (program name excluded). Never throws; usage problems come
/// back as exit_code 2 with a message naming the flag.
[[nodiscard]] inline ParseResult parse_args(const std::vector<std::string>& args) {
    CLI::App app{"Exact dimension-splitting benchmarks for Kronecker-sum evolution equations", "kronmode_bench"};
    app.require_subcommand(1);

    CliConfig cfg;
    std::string output = "table";
    std::size_t threads = 0;
    app.add_option("--output", output, "Report format: csv, json or table")
        ->check(CLI::IsMember({"csv", "json", "table"}))
        ->capture_default_str();
    app.add_option("--out", cfg.out_path, "Write the report to this file instead of stdout");
    app.add_option("--seed", cfg.seed, "Seed for randomized checks")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (default: KRONMODE_THREADS, else 1)")
        ->check(CLI::PositiveNumber);

    detail::RawOptions raw;
    const auto add_common = [&](CLI::App* sub, bool lists) {
        sub->fallthrough();
        const char* nd = lists ? "Grid points per direction (comma-separated list)" : "Grid points per direction";
        sub->add_option("--n", raw.n, nd)->delimiter(lists ? ',' : '\0')->allow_extra_args(false);
        sub->add_option("--k", raw.k, "Hermite basis size per direction")
            ->delimiter(lists ? ',' : '\0')
            ->allow_extra_args(false);
        sub->add_option("--p", raw.p, "Finite-difference order (even) or 'inf' for Fourier")
            ->delimiter(lists ? ',' : '\0')
            ->allow_extra_args(false);
        sub->add_option("--steps", raw.steps, "Number of time steps")
            ->delimiter(lists ? ',' : '\0')
            ->allow_extra_args(false);
        sub->add_option("--T", raw.T, "Final time");
        sub->add_option("--tau", raw.tau, "Time step (gpe, default 0.1)");
        sub->add_option("--precision", raw.precision, "single or double")->capture_default_str();
        sub->add_option("--norm", raw.norm, "Error norm: max or two")->capture_default_str();
        sub->add_option("--reference-k", raw.reference_k, "Reference basis size (schrodinger-ti, default 120)");
        sub->add_option("--reference-steps", raw.reference_steps,
                        "Reference step count (schrodinger-td, default 2048)");
    };

    struct Sub {
        const char* name;
        Command cmd;
        const char* help;
    };
    const std::vector<Sub> subs{
        {"heat", Command::heat, "3D periodic heat equation (defaults n=40 p=2 T=1 steps=1)"},
        {"pipeflow", Command::pipeflow, "Pipe diffusion-advection vs Krylov reference (defaults n=32 T=4 steps=1)"},
        {"schrodinger-ti", Command::schrodinger_ti, "Hermite pseudospectral, time-independent (defaults k=40 T=1)"},
        {"schrodinger-td", Command::schrodinger_td, "Hermite Magnus midpoint (defaults k=20 T=1 steps=50)"},
        {"gpe", Command::gpe, "Gross-Pitaevskii Strang splitting (defaults n=32 T=1 tau=0.1)"},
        {"sweep", Command::sweep, "Runs the Cartesian product of list-valued --n/--k/--p/--steps"},
    };
    std::vector<CLI::App*> handles;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        add_common(sub, s.cmd == Command::sweep);
        if (s.cmd == Command::sweep)
            sub->add_option("--problem", raw.problem, "heat, pipeflow, schrodinger-ti, schrodinger-td or gpe")
                ->required()
                ->check(CLI::IsMember({"heat", "pipeflow", "schrodinger-ti", "schrodinger-td", "gpe"}));
        handles.push_back(sub);
    }
    auto* selftest = app.add_subcommand("selftest", "Runs the oracle-equivalence checks");
    selftest->fallthrough();
    handles.push_back(selftest);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return {std::nullopt, exit_ok, app.help()};
    } catch (const CLI::CallForAllHelp&) {
        return {std::nullopt, exit_ok, app.help("", CLI::AppFormatMode::All)};
    } catch (const CLI::ParseError& e) {
        return {std::nullopt, exit_usage, std::string(e.what()) + "\nRun with --help for usage."};
    }

    for (std::size_t i = 0; i < handles.size(); ++i) {
        if (!handles[i]->parsed()) continue;
        if (handles[i] == selftest) {
            cfg.command = Command::selftest;
        } else {
            cfg.command = subs[i].cmd;
        }
    }
    cfg.output = output == "csv" ? OutputFormat::csv : output == "json" ? OutputFormat::json : OutputFormat::table;
    cfg.threads = threads;

    try {
        if (cfg.command == Command::sweep) {
            cfg.plan = detail::build_plan(raw.problem, raw, true);
        } else if (cfg.command != Command::selftest) {
            std::string name;
            for (const auto& s : subs)
                if (s.cmd == cfg.command) name = s.name;
            cfg.plan = detail::build_plan(name, raw, false);
        }
    } catch (const config_error& e) {
        return {std::nullopt, exit_usage, e.what()};
    }
    return {std::move(cfg), exit_ok, {}};
}

[[nodiscard]] inline ParseResult parse_args(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return parse_args(args);
}

/// Runs one resolved run description.
[[nodiscard]] inline RunReport execute(const RunSpec& r) {
    const bool single = r.precision == "single";
    if (r.problem == "heat")
        return single ? problems::heat3d_run<float>(r.n, r.p, r.T, r.steps, r.norm)
                      : problems::heat3d_run<double>(r.n, r.p, r.T, r.steps, r.norm);
    if (r.problem == "pipeflow")
        return single ? problems::pipeflow_run<float>(r.n, r.T, r.steps, r.norm)
                      : problems::pipeflow_run<double>(r.n, r.T, r.steps, r.norm);
    if (r.problem == "schrodinger-ti") {
        problems::HkpOptions o;
        o.reference_k = r.reference_k;
        o.norm = r.norm;
        return problems::hkp_run(r.k, r.T, o);
    }
    if (r.problem == "schrodinger-td") {
        problems::HkmpOptions o;
        o.reference_steps = r.reference_steps;
        o.norm = r.norm;
        return problems::hkmp_run(r.k, r.T, r.steps, o);
    }
    if (r.problem == "gpe") return problems::gpe_run(r.n, r.T, r.tau);
    throw config_error("unknown problem '" + r.problem + "'");
}

inline void write_reports(std::ostream& os, OutputFormat fmt, const std::vector<RunReport>& reports, bool as_array) {
    switch (fmt) {
        case OutputFormat::csv:
            write_csv(os, reports);
            break;
        case OutputFormat::table:
            write_table(os, reports);
            break;
        case OutputFormat::json: {
            const nlohmann::json j = as_array ? nlohmann::json(reports) : nlohmann::json(reports.front());
            os << j.dump(2) << '\n';
            break;
        }
    }
}

/// Executes the plan and writes the reports. Returns the process exit code.
[[nodiscard]] inline int run(const CliConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    if (cfg.threads > 0) set_num_threads(cfg.threads);
    try {
        if (cfg.command == Command::selftest) {
            const bool ok = print_selftest(out, run_selftest(cfg.seed));
            return ok ? exit_ok : exit_failure;
        }
        if (cfg.plan.empty()) throw config_error("empty run plan");
        std::vector<RunReport> reports(cfg.plan.size());
        // entries run concurrently; slots keep the input order
        parallel_for(cfg.plan.size(), [&](std::size_t i) { reports[i] = execute(cfg.plan[i]); });

        const bool as_array = cfg.command == Command::sweep;
        if (cfg.out_path.empty()) {
            write_reports(out, cfg.output, reports, as_array);
        } else {
            std::ofstream f(cfg.out_path);
            if (!f) throw std::ios_base::failure("cannot open '" + cfg.out_path + "' for writing");
            write_reports(f, cfg.output, reports, as_array);
            f.flush();
            if (!f) throw std::ios_base::failure("write to '" + cfg.out_path + "' failed");
        }
        return exit_ok;
    } catch (const config_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::ios_base::failure& e) {
        err << "I/O error: " << e.what() << '\n';
        return exit_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

}  // namespace kronmode::bench
