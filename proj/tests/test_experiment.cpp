#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shapebench/errors.hpp"
#include "shapebench/experiment.hpp"
#include "shapebench/metrics.hpp"

using namespace shapebench;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::path("tmp_experiment_tests") / name;
    fs::remove_all(dir);
    return dir;
}

ExperimentConfig small_config(const std::string& out_dir) {
    const json doc{
        {"space", {{"n", 4}, {"bound", 11.5}}},
        {"objective", "synthetic"},
        {"algorithms",
         json::array(
             {json{{"ga",
                    {{"init_pop", 10}, {"gen_pop", 4}, {"num_gen", 2}, {"budget", 30}}}},
              json{{"rs", {{"budget", 12}}}}, json{{"gs", {{"budget", 20}}}}})},
        {"repetitions", 3},
        {"master_seed", 42},
        {"benchmark", "analytic"},
        {"output_dir", out_dir}};
    return load_config(doc);
}

}  // namespace

TEST_CASE("a small experiment writes the full artifact bundle") {
    const fs::path dir = scratch_dir("bundle");
    const ExperimentResult result = run_experiment(small_config(dir.string()));

    CHECK(result.benchmark.y_star == 760.0);
    REQUIRE(result.runs.size() == 9);
    for (const RunOutcome& r : result.runs) CHECK(r.ok());

    for (const char* name :
         {"runs.csv", "metrics.csv", "summary.csv", "metadata.json",
          "boxplot_success_rate_pct.svg", "boxplot_ape_pct.svg", "boxplot_effort_evals.svg"}) {
        CHECK(fs::exists(dir / name));
    }
    for (const char* algo : {"ga", "rs", "gs"}) {
        for (int rep = 1; rep <= 3; ++rep) {
            CHECK(fs::exists(dir / "traces" /
                             (std::string(algo) + "_" + std::to_string(rep) + ".csv")));
        }
    }

    const auto runs = lines_of(slurp(dir / "runs.csv"));
    REQUIRE(runs.size() == 10);  // header + 9 data rows
    CHECK(runs[0] == "algo,rep,seed,evals_used,best_kwh,x1,x2,x3,x4,status,error");
    // Rows are sorted by (algo, rep): ga, gs, rs.
    CHECK(fields_of(runs[1])[0] == "ga");
    CHECK(fields_of(runs[4])[0] == "gs");
    CHECK(fields_of(runs[7])[0] == "rs");
    for (std::size_t i = 1; i < runs.size(); ++i) {
        const auto f = fields_of(runs[i]);
        REQUIRE(f.size() == 11);
        CHECK(f[9] == "ok");
        CHECK(f[10] == "");
        if (f[0] == "ga") CHECK(f[3] == "14");  // 10 + 2 * 2
        if (f[0] == "rs") CHECK(f[3] == "12");
        if (f[0] == "gs") CHECK(f[3] == "20");
    }

    const auto metrics = lines_of(slurp(dir / "metrics.csv"));
    REQUIRE(metrics.size() == 13);  // header + 9 rows + 3 aggregates
    CHECK(metrics[0] == "algo,rep,success_rate_pct,effort_evals,effort_censored,best_kwh,ape_pct");
    int aggregates = 0;
    for (std::size_t i = 1; i < metrics.size(); ++i) {
        const auto f = fields_of(metrics[i]);
        REQUIRE(f.size() == 7);
        if (f[1] == "all") {
            ++aggregates;
            CHECK(f[2] == "");
            CHECK(f[6] != "");
        }
    }
    CHECK(aggregates == 3);

    const auto summary = lines_of(slurp(dir / "summary.csv"));
    REQUIRE(summary.size() == 10);  // header + 3 algos x 3 measures
    CHECK(summary[0] == "algo,measure,min,q1,median,q3,max,mean,std");

    const json meta = json::parse(slurp(dir / "metadata.json"));
    CHECK(meta.at("benchmark").at("y_star_kwh") == 760.0);
    CHECK(meta.at("tool_version").is_string());
    CHECK(meta.at("seed_derivation").at("runs").size() == 9);
    CHECK_NOTHROW(load_config(meta.at("config")));  // the echo is itself a valid config

    fs::remove_all(dir);
}

TEST_CASE("experiments are byte-identical across repeats and worker counts") {
    const fs::path a = scratch_dir("det_a");
    const fs::path b = scratch_dir("det_b");
    const fs::path c = scratch_dir("det_c");

    run_experiment(small_config(a.string()));
    run_experiment(small_config(b.string()));
    ExperimentConfig parallel = small_config(c.string());
    parallel.workers = 4;
    run_experiment(parallel);

    for (const char* name : {"runs.csv", "metrics.csv", "summary.csv"}) {
        const std::string reference = slurp(a / name);
        CHECK(slurp(b / name) == reference);
        CHECK(slurp(c / name) == reference);
    }
    CHECK(slurp(a / "traces/ga_2.csv") == slurp(c / "traces/ga_2.csv"));
    CHECK(slurp(a / "traces/rs_3.csv") == slurp(c / "traces/rs_3.csv"));

    fs::remove_all(a);
    fs::remove_all(b);
    fs::remove_all(c);
}

TEST_CASE("a different master seed changes the results") {
    const fs::path a = scratch_dir("seed_a");
    const fs::path b = scratch_dir("seed_b");
    run_experiment(small_config(a.string()));
    ExperimentConfig other = small_config(b.string());
    other.master_seed = 43;
    run_experiment(other);
    CHECK(slurp(a / "runs.csv") != slurp(b / "runs.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("single-repetition summaries have zero spread") {
    const fs::path dir = scratch_dir("single");
    ExperimentConfig cfg = small_config(dir.string());
    cfg.repetitions = 1;
    run_experiment(cfg);

    const auto summary = lines_of(slurp(dir / "summary.csv"));
    REQUIRE(summary.size() == 10);
    for (std::size_t i = 1; i < summary.size(); ++i) {
        const auto f = fields_of(summary[i]);
        REQUIRE(f.size() == 9);
        CHECK(f[2] == f[6]);   // min == max
        CHECK(f[8] == "0");    // std
    }
    fs::remove_all(dir);
}

TEST_CASE("metrics rows are recomputable from trace files") {
    const fs::path dir = scratch_dir("audit");
    run_experiment(small_config(dir.string()));

    const json meta = json::parse(slurp(dir / "metadata.json"));
    Benchmark bench;
    bench.y_star = meta.at("benchmark").at("y_star_kwh").get<double>();
    const double tol = meta.at("config").at("metrics").at("success_tol").get<double>();
    const int k = meta.at("config").at("metrics").at("k").get<int>();

    const auto metrics = lines_of(slurp(dir / "metrics.csv"));
    std::map<std::string, std::vector<double>> apes;
    for (std::size_t i = 1; i < metrics.size(); ++i) {
        const auto f = fields_of(metrics[i]);
        if (f[1] == "all") {
            // The aggregate row's ape column is the MAPE of the per-rep rows.
            double mean = 0.0;
            for (double a : apes[f[0]]) mean += a;
            mean /= static_cast<double>(apes[f[0]].size());
            CHECK(std::stod(f[6]) == doctest::Approx(mean).epsilon(1e-12));
            continue;
        }
        apes[f[0]].push_back(std::stod(f[6]));

        // Rebuild the trace from its file and recompute every metric.
        const auto trace_lines = lines_of(slurp(dir / "traces" / (f[0] + "_" + f[1] + ".csv")));
        RunTrace trace;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t row = 1; row < trace_lines.size(); ++row) {
            const auto cols = fields_of(trace_lines[row]);
            REQUIRE(cols.size() == 7);  // index, x1..x4, f, best_so_far
            EvalRecord rec;
            rec.index = std::stoll(cols[0]);
            rec.f = std::stod(cols[5]);
            best = std::min(best, rec.f);
            rec.best_so_far = best;
            CHECK(std::stod(cols[6]) == best);
            trace.records.push_back(rec);
        }
        CHECK(std::stoll(fields_of(trace_lines.back())[0]) ==
              static_cast<std::int64_t>(trace.records.size()));

        CHECK(std::stod(f[2]) == doctest::Approx(success_rate(trace, bench, tol)).epsilon(1e-12));
        const EffortResult effort = computational_effort(trace, bench, tol, k);
        CHECK(std::stoll(f[3]) == effort.evals);
        CHECK(f[4] == (effort.censored ? "1" : "0"));
        CHECK(std::stod(f[5]) == trace.best().f);
    }
    fs::remove_all(dir);
}

TEST_CASE("external-objective runs mirror the synthetic ones") {
    const fs::path syn_dir = scratch_dir("ext_syn");
    const fs::path ext_dir = scratch_dir("ext_ext");

    json doc{{"space", {{"n", 4}, {"bound", 11.5}}},
             {"objective", "synthetic"},
             {"algorithms", json::array({json{{"rs", {{"budget", 6}}}}})},
             {"repetitions", 2},
             {"master_seed", 7},
             {"benchmark", "exhaustive_grid"},
             {"output_dir", syn_dir.string()}};
    run_experiment(load_config(doc));

    doc["objective"] = {{"kind", "external"}, {"command", {SHAPEBENCH_WORKER_PATH}}};
    doc["output_dir"] = ext_dir.string();
    run_experiment(load_config(doc));

    CHECK(slurp(syn_dir / "runs.csv") == slurp(ext_dir / "runs.csv"));
    CHECK(slurp(syn_dir / "metrics.csv") == slurp(ext_dir / "metrics.csv"));
    CHECK(slurp(syn_dir / "traces/rs_1.csv") == slurp(ext_dir / "traces/rs_1.csv"));

    fs::remove_all(syn_dir);
    fs::remove_all(ext_dir);
}

TEST_CASE("failed external runs are recorded while the experiment proceeds") {
    const fs::path dir = scratch_dir("failures");
    fs::create_directories(dir);
    const fs::path counter = dir / "quota_counter.txt";

    // The 85-point benchmark grid fits the quota exactly; every later
    // evaluation gets an error reply, so all runs fail while the experiment
    // itself completes.
    const json doc{
        {"space", {{"n", 4}, {"bound", 3.2}}},
        {"objective",
         {{"kind", "external"},
          {"command", {SHAPEBENCH_WORKER_PATH, "quota", counter.string(), "85"}}}},
        {"algorithms", json::array({json{{"rs", {{"budget", 5}}}}})},
        {"repetitions", 2},
        {"master_seed", 11},
        {"benchmark", "exhaustive_grid"},
        {"output_dir", (dir / "out").string()}};
    const ExperimentResult result = run_experiment(load_config(doc));

    REQUIRE(result.runs.size() == 2);
    for (const RunOutcome& r : result.runs) {
        CHECK_FALSE(r.ok());
        CHECK(!r.error.empty());
    }

    const auto runs = lines_of(slurp(dir / "out" / "runs.csv"));
    REQUIRE(runs.size() == 3);
    for (std::size_t i = 1; i < runs.size(); ++i) {
        const auto f = fields_of(runs[i]);
        REQUIRE(f.size() == 11);
        CHECK(f[9] == "failed");
        CHECK(f[10] != "");
        CHECK(f[4] == "");  // no best value
    }

    const auto metrics = lines_of(slurp(dir / "out" / "metrics.csv"));
    CHECK(metrics.size() == 1);  // header only: no successful repetitions
    CHECK_FALSE(fs::exists(dir / "out" / "traces" / "rs_1.csv"));
    CHECK_FALSE(fs::exists(dir / "out" / "boxplot_ape_pct.svg"));
    CHECK(fs::exists(dir / "out" / "metadata.json"));

    fs::remove_all(dir);
}

TEST_CASE("benchmark estimation failure aborts the experiment") {
    const fs::path dir = scratch_dir("abort");
    const json doc{{"space", {{"n", 4}, {"bound", 3.2}}},
                   {"objective",
                    {{"kind", "external"}, {"command", {SHAPEBENCH_WORKER_PATH, "error"}}}},
                   {"algorithms", {"rs"}},
                   {"repetitions", 1},
                   {"master_seed", 1},
                   {"benchmark", "exhaustive_grid"},
                   {"output_dir", (dir / "out").string()}};
    CHECK_THROWS_AS(run_experiment(load_config(doc)), ProtocolError);
    fs::remove_all(dir);
}
