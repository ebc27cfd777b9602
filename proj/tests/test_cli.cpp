#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "bench/cli.hpp"

using namespace kronmode;
using namespace kronmode::bench;

namespace {

ParseResult parse(std::initializer_list<const char*> args) {
    std::vector<std::string> v(args.begin(), args.end());
    return parse_args(v);
}

// Splits CSV rows and drops the timing columns.
std::vector<std::string> deterministic_fields(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        std::string kept;
        for (int col = 0; std::getline(row, cell, ','); ++col)
            if (col < 9) kept += cell + ",";
        out.push_back(kept);
    }
    return out;
}

int run_exe(const std::string& args) {
    const std::string cmd = std::string(KRONMODE_BENCH_EXE) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(ParseArgs, HeatConfig) {
    const auto r = parse({"heat", "--n", "40", "--p", "2", "--T", "1", "--steps", "1"});
    ASSERT_TRUE(r.config) << r.message;
    EXPECT_EQ(r.config->command, Command::heat);
    ASSERT_EQ(r.config->plan.size(), 1u);
    const auto& s = r.config->plan[0];
    EXPECT_EQ(s.problem, "heat");
    EXPECT_EQ(s.n, 40u);
    EXPECT_EQ(s.p, 2);
    EXPECT_EQ(s.T, 1.0);
    EXPECT_EQ(s.steps, 1u);
    EXPECT_EQ(s.precision, "double");
}

TEST(ParseArgs, NegativeSizeIsUsageError) {
    const auto a = parse({"--n", "-3"});
    EXPECT_FALSE(a.config);
    EXPECT_EQ(a.exit_code, exit_usage);
    const auto b = parse({"heat", "--n", "-3"});
    EXPECT_FALSE(b.config);
    EXPECT_EQ(b.exit_code, exit_usage);
    EXPECT_NE(b.message.find("--n"), std::string::npos) << b.message;
}

TEST(ParseArgs, SweepPlan) {
    const auto r = parse({"sweep", "--problem", "heat", "--n", "40,55,70,85,100"});
    ASSERT_TRUE(r.config) << r.message;
    EXPECT_EQ(r.config->command, Command::sweep);
    ASSERT_EQ(r.config->plan.size(), 5u);
    const std::vector<std::size_t> ns{40, 55, 70, 85, 100};
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(r.config->plan[i].problem, "heat");
        EXPECT_EQ(r.config->plan[i].n, ns[i]);
        EXPECT_EQ(r.config->plan[i].p, 2);
        EXPECT_EQ(r.config->plan[i].T, 1.0);
        EXPECT_EQ(r.config->plan[i].steps, 1u);
    }
}

TEST(ParseArgs, InvalidValuesNameTheFlag) {
    const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
        {{"heat", "--p", "3"}, "--p"},
        {{"heat", "--T", "-1"}, "--T"},
        {{"heat", "--steps", "0"}, "--steps"},
        {{"heat", "--n", "abc"}, "--n"},
        {{"heat", "--n", "40,55"}, "--n"},
        {{"heat", "--precision", "half"}, "--precision"},
        {{"heat", "--norm", "l1"}, "--norm"},
        {{"heat", "--k", "20"}, "--k"},
        {{"gpe", "--precision", "single"}, "--precision"},
        {{"gpe", "--T", "1.05"}, "--T"},
        {{"schrodinger-ti", "--k", "600"}, "--k"},
        {{"--output", "xml", "heat"}, "--output"},
    };
    for (const auto& [args, flag] : cases) {
        const auto r = parse_args(args);
        EXPECT_FALSE(r.config) << args[0] << " " << args[1];
        EXPECT_EQ(r.exit_code, exit_usage);
        EXPECT_NE(r.message.find(flag), std::string::npos) << r.message;
    }
}

TEST(ParseArgs, UnknownFlagsRejected) {
    const auto r = parse({"heat", "--bogus", "1"});
    EXPECT_FALSE(r.config);
    EXPECT_EQ(r.exit_code, exit_usage);
    EXPECT_NE(r.message.find("--bogus"), std::string::npos);
}

TEST(ParseArgs, HelpDocumentsDefaults) {
    const auto r = parse({"--help"});
    EXPECT_FALSE(r.config);
    EXPECT_EQ(r.exit_code, exit_ok);
    EXPECT_NE(r.message.find("heat"), std::string::npos);
    EXPECT_NE(r.message.find("KRONMODE_THREADS"), std::string::npos);
}

TEST(ParseArgs, GlobalOptionsAfterSubcommand) {
    const auto r = parse({"heat", "--output", "csv", "--seed", "7", "--threads", "2", "--out", "x.csv"});
    ASSERT_TRUE(r.config) << r.message;
    EXPECT_EQ(r.config->output, OutputFormat::csv);
    EXPECT_EQ(r.config->seed, 7u);
    EXPECT_EQ(r.config->threads, 2u);
    EXPECT_EQ(r.config->out_path, "x.csv");
}

TEST(ParseArgs, SpectralOrderAndDefaults) {
    const auto r = parse({"heat", "--p", "inf"});
    ASSERT_TRUE(r.config);
    EXPECT_EQ(r.config->plan[0].p, problems::spectral_p);
    const auto g = parse({"gpe"});
    ASSERT_TRUE(g.config);
    EXPECT_EQ(g.config->plan[0].steps, 10u);
    EXPECT_EQ(g.config->plan[0].norm, NormKind::weighted_two);
    const auto td = parse({"schrodinger-td"});
    ASSERT_TRUE(td.config);
    EXPECT_EQ(td.config->plan[0].k, 20u);
}

TEST(Csv, HeaderMatchesGoldenFile) {
    std::ifstream f(std::string(KRONMODE_GOLDEN_DIR) + "/csv_header.txt");
    ASSERT_TRUE(f);
    std::string golden;
    std::getline(f, golden);
    std::ostringstream os;
    write_csv(os, {});
    EXPECT_EQ(os.str(), golden + "\n");
}

TEST(Csv, RowFormatting) {
    RunReport r;
    r.problem = "schrodinger-ti";
    r.k = 40;
    r.steps = 1;
    r.tau = 1.0;
    r.norm = NormKind::max;
    r.rel_error = 0.1;
    EXPECT_EQ(csv_row(r),
              "schrodinger-ti,,40,,1,1.000000000000000e+00,double,max,1.000000000000000e-01,"
              "0.000000000000000e+00,0.000000000000000e+00,0.000000000000000e+00,0.000000000000000e+00");
    r.p = problems::spectral_p;
    EXPECT_NE(csv_row(r).find(",inf,"), std::string::npos);
}

TEST(Csv, DoublesRoundTrip) {
    for (double v : {2.056589082646670e-03, 1.0 / 3.0, 6.02214076e23, 5e-324}) {
        EXPECT_EQ(std::strtod(format_real(v).c_str(), nullptr), v);
    }
}

TEST(Json, RoundTripsThroughSchema) {
    const auto rep = problems::heat3d_run(16, 4, 0.5, 3);
    const nlohmann::json j = rep;
    for (const char* key : {"problem", "shape", "n", "k", "p", "steps", "tau", "precision", "norm", "rel_error",
                            "norm_drift", "time_exp_s", "time_mumode_s", "time_other_s", "total_s"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_TRUE(j["k"].is_null());
    EXPECT_TRUE(j["rel_error"].is_number_float());
    const auto back = j.get<RunReport>();
    EXPECT_EQ(back, rep);
    const auto reparsed = nlohmann::json::parse(j.dump()).get<RunReport>();
    EXPECT_EQ(reparsed, rep);
}

TEST(Run, HeatSweepCsv) {
    const auto r = parse({"sweep", "--problem", "heat", "--n", "40,55,70,85,100", "--output", "csv"});
    ASSERT_TRUE(r.config);
    std::ostringstream out, err;
    ASSERT_EQ(run(*r.config, out, err), exit_ok) << err.str();
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    const std::vector<double> published{2.06e-3, 1.09e-3, 6.71e-4, 4.55e-4, 3.29e-4};
    for (double expected : published) {
        ASSERT_TRUE(std::getline(in, line));
        std::istringstream row(line);
        std::string cell;
        for (int col = 0; col <= 8; ++col) std::getline(row, cell, ',');
        EXPECT_NEAR(std::stod(cell) / expected, 1.0, 0.01) << line;
    }
}

TEST(Run, DeterministicNumericFields) {
    const auto r = parse({"sweep", "--problem", "pipeflow", "--n", "16,24", "--steps", "1,4", "--output", "csv",
                          "--threads", "1"});
    ASSERT_TRUE(r.config);
    std::ostringstream a, b, err;
    ASSERT_EQ(run(*r.config, a, err), exit_ok);
    ASSERT_EQ(run(*r.config, b, err), exit_ok);
    EXPECT_EQ(deterministic_fields(a.str()), deterministic_fields(b.str()));
    EXPECT_EQ(deterministic_fields(a.str()).size(), 5u);
}

TEST(Run, ParallelSweepKeepsInputOrder) {
    const auto r = parse({"sweep", "--problem", "heat", "--n", "24,8,16", "--output", "csv", "--threads", "3"});
    ASSERT_TRUE(r.config);
    std::ostringstream out, err;
    ASSERT_EQ(run(*r.config, out, err), exit_ok);
    const auto rows = deterministic_fields(out.str());
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1].substr(0, 8), "heat,24,");
    EXPECT_EQ(rows[2].substr(0, 7), "heat,8,");
    EXPECT_EQ(rows[3].substr(0, 8), "heat,16,");
    set_num_threads(1);
}

TEST(Run, JsonOutputShapes) {
    std::ostringstream single, sweep, err;
    ASSERT_EQ(run(*parse({"heat", "--n", "8", "--output", "json"}).config, single, err), exit_ok);
    EXPECT_TRUE(nlohmann::json::parse(single.str()).is_object());
    ASSERT_EQ(run(*parse({"sweep", "--problem", "heat", "--n", "8,10", "--output", "json"}).config, sweep, err),
              exit_ok);
    const auto arr = nlohmann::json::parse(sweep.str());
    ASSERT_TRUE(arr.is_array());
    EXPECT_EQ(arr.size(), 2u);
    EXPECT_EQ(arr[1].get<RunReport>().n, 10u);
}

TEST(Run, WritesOutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "kronmode_cli_test.csv";
    const auto r = parse_args(std::vector<std::string>{"heat", "--n", "8", "--output", "csv", "--out", path.string()});
    ASSERT_TRUE(r.config);
    std::ostringstream out, err;
    ASSERT_EQ(run(*r.config, out, err), exit_ok);
    std::ifstream f(path);
    std::string header;
    std::getline(f, header);
    EXPECT_EQ(header, csv_header);
    std::filesystem::remove(path);
}

TEST(Run, IoFailureExitsOne) {
    const auto r = parse({"heat", "--n", "8", "--out", "/nonexistent-dir/x.csv"});
    ASSERT_TRUE(r.config);
    std::ostringstream out, err;
    EXPECT_EQ(run(*r.config, out, err), exit_failure);
    EXPECT_NE(err.str().find("nonexistent-dir"), std::string::npos);
}

TEST(Run, Selftest) {
    std::ostringstream out, err;
    EXPECT_EQ(run(*parse({"selftest"}).config, out, err), exit_ok) << out.str();
    EXPECT_NE(out.str().find("checks passed"), std::string::npos);
}

TEST(Executable, ExitCodes) {
    EXPECT_EQ(run_exe("heat --n 8"), 0);
    EXPECT_EQ(run_exe("heat --n -3"), 2);
    EXPECT_EQ(run_exe("--n -3"), 2);
    EXPECT_EQ(run_exe("heat --unknown"), 2);
    EXPECT_EQ(run_exe("heat --n 8 --out /nonexistent-dir/x.csv"), 1);
    EXPECT_EQ(run_exe("--help"), 0);
}
