#pragma once

// CSV / JSON / table serialization of RunReport.

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kronmode/problems/report.hpp"

namespace kronmode::bench {

using problems::RunReport;

inline constexpr const char* csv_header =
    "problem,n,k,p,steps,tau,precision,norm,rel_error,time_exp_s,time_mumode_s,time_other_s,total_s";

/// Scientific notation with 16 significant digits.
[[nodiscard]] inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15e", v);
    return buf;
}

[[nodiscard]] inline std::string format_p(const std::optional<int>& p) {
    if (!p) return "";
    if (*p == problems::spectral_p) return "inf";
    return std::to_string(*p);
}

[[nodiscard]] inline NormKind parse_norm(const std::string& s) {
    if (s == "max") return NormKind::max;
    if (s == "two") return NormKind::two;
    if (s == "weighted_two") return NormKind::weighted_two;
    throw config_error("unknown norm '" + s + "'");
}

[[nodiscard]] inline std::string csv_row(const RunReport& r) {
    std::ostringstream os;
    os << r.problem << ',' << (r.n ? std::to_string(*r.n) : "") << ','
       << (r.k ? std::to_string(*r.k) : "") << ',' << format_p(r.p) << ',' << r.steps << ','
       << format_real(r.tau) << ',' << r.precision << ',' << to_string(r.norm) << ','
       << format_real(r.rel_error) << ',' << format_real(r.time_exp_s) << ','
       << format_real(r.time_mumode_s) << ',' << format_real(r.time_other_s) << ','
       << format_real(r.total_s);
    return os.str();
}

inline void write_csv(std::ostream& os, const std::vector<RunReport>& reports) {
    os << csv_header << '\n';
    for (const auto& r : reports) os << csv_row(r) << '\n';
}

inline void write_table(std::ostream& os, const std::vector<RunReport>& reports) {
    os << std::left << std::setw(16) << "problem" << std::right << std::setw(6) << "n" << std::setw(6) << "k"
       << std::setw(5) << "p" << std::setw(7) << "steps" << std::setw(12) << "tau" << std::setw(8) << "prec"
       << std::setw(14) << "rel_error" << std::setw(11) << "exp[s]" << std::setw(11) << "mumode[s]"
       << std::setw(11) << "other[s]" << std::setw(11) << "total[s]" << '\n';
    for (const auto& r : reports) {
        os << std::left << std::setw(16) << r.problem << std::right << std::setw(6)
           << (r.n ? std::to_string(*r.n) : "-") << std::setw(6) << (r.k ? std::to_string(*r.k) : "-")
           << std::setw(5) << (r.p ? format_p(r.p) : "-") << std::setw(7) << r.steps << std::setw(12)
           << std::setprecision(4) << std::scientific << r.tau << std::setw(8) << r.precision << std::setw(14)
           << std::setprecision(6) << r.rel_error << std::setprecision(3) << std::setw(11) << r.time_exp_s
           << std::setw(11) << r.time_mumode_s << std::setw(11) << r.time_other_s << std::setw(11) << r.total_s
           << std::defaultfloat << '\n';
    }
}

}  // namespace kronmode::bench

namespace kronmode::problems {

inline void to_json(nlohmann::json& j, const RunReport& r) {
    j = nlohmann::json{{"problem", r.problem},
                       {"shape", r.shape},
                       {"n", r.n ? nlohmann::json(*r.n) : nlohmann::json(nullptr)},
                       {"k", r.k ? nlohmann::json(*r.k) : nlohmann::json(nullptr)},
                       {"p", r.p ? nlohmann::json(bench::format_p(r.p)) : nlohmann::json(nullptr)},
                       {"steps", r.steps},
                       {"tau", r.tau},
                       {"precision", r.precision},
                       {"norm", to_string(r.norm)},
                       {"rel_error", r.rel_error},
                       {"norm_drift", r.norm_drift ? nlohmann::json(*r.norm_drift) : nlohmann::json(nullptr)},
                       {"time_exp_s", r.time_exp_s},
                       {"time_mumode_s", r.time_mumode_s},
                       {"time_other_s", r.time_other_s},
                       {"total_s", r.total_s}};
}

inline void from_json(const nlohmann::json& j, RunReport& r) {
    j.at("problem").get_to(r.problem);
    j.at("shape").get_to(r.shape);
    r.n = j.at("n").is_null() ? std::nullopt : std::optional<std::size_t>(j.at("n").get<std::size_t>());
    r.k = j.at("k").is_null() ? std::nullopt : std::optional<std::size_t>(j.at("k").get<std::size_t>());
    if (j.at("p").is_null()) {
        r.p.reset();
    } else {
        const auto p = j.at("p").get<std::string>();
        r.p = p == "inf" ? spectral_p : std::stoi(p);
    }
    j.at("steps").get_to(r.steps);
    j.at("tau").get_to(r.tau);
    j.at("precision").get_to(r.precision);
    r.norm = bench::parse_norm(j.at("norm").get<std::string>());
    j.at("rel_error").get_to(r.rel_error);
    r.norm_drift = j.at("norm_drift").is_null() ? std::nullopt
                                                : std::optional<double>(j.at("norm_drift").get<double>());
    j.at("time_exp_s").get_to(r.time_exp_s);
    j.at("time_mumode_s").get_to(r.time_mumode_s);
    j.at("time_other_s").get_to(r.time_other_s);
    j.at("total_s").get_to(r.total_s);
}

}  // namespace kronmode::problems
