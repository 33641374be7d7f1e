#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kScratch = "tmp_cli_tests";

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliResult run_cli(const std::string& args) {
    fs::create_directories(kScratch);
    const fs::path out = kScratch / "stdout.txt";
    const fs::path err = kScratch / "stderr.txt";
    const std::string cmd = std::string(SHAPEBENCH_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_config(const std::string& name, const json& doc) {
    fs::create_directories(kScratch);
    const fs::path path = kScratch / name;
    std::ofstream out(path);
    out << doc.dump(2);
    return path;
}

json base_doc() {
    return json{{"space", {{"n", 4}, {"bound", 11.5}}},
                {"objective", "synthetic"},
                {"algorithms",
                 json::array({json{{"ga",
                                    {{"init_pop", 10},
                                     {"gen_pop", 4},
                                     {"num_gen", 2},
                                     {"budget", 30}}}},
                              json{{"rs", {{"budget", 10}}}},
                              json{{"gs", {{"budget", 15}}}}})},
                {"repetitions", 2},
                {"master_seed", 42},
                {"benchmark", "analytic"}};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("eval prints the objective value at a point") {
    const fs::path cfg = write_config("eval.json", base_doc());
    const CliResult r = run_cli("eval --config " + cfg.string() + " --x '3.2,-1.6,-4.8,3.2'");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "760\n");

    const CliResult wrong = run_cli("eval --config " + cfg.string() + " --x '1,2'");
    CHECK(wrong.exit_code == 1);
    CHECK(contains(wrong.err, "--x"));

    const CliResult junk = run_cli("eval --config " + cfg.string() + " --x 'a,b,c,d'");
    CHECK(junk.exit_code == 1);
}

TEST_CASE("eval works through the external protocol worker") {
    json doc = base_doc();
    doc["objective"] = {{"kind", "external"}, {"command", {SHAPEBENCH_WORKER_PATH}}};
    doc["benchmark"] = "exhaustive_grid";  // analytic needs the synthetic objective
    const fs::path cfg = write_config("eval_ext.json", doc);
    const CliResult r = run_cli("eval --config " + cfg.string() + " --x '3.2,-1.6,-4.8,3.2'");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "760\n");
}

TEST_CASE("landscape validates the axes") {
    const fs::path cfg = write_config("land.json", base_doc());
    const CliResult r = run_cli("landscape --config " + cfg.string() +
                                " --axes 1,1 --resolution 10");
    CHECK(r.exit_code == 1);
    CHECK(contains(r.err, "axes must differ"));
}

TEST_CASE("landscape exports a slice with a metadata sidecar") {
    const fs::path cfg = write_config("land_ok.json", base_doc());
    const fs::path csv = kScratch / "slice.csv";
    const CliResult r = run_cli("landscape --config " + cfg.string() +
                                " --axes 1,2 --resolution 12 --out " + csv.string());
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.out, "local_minima:"));

    const auto body = slurp(csv);
    CHECK(contains(body, "xi,xj,f_kwh\n"));
    CHECK(std::count(body.begin(), body.end(), '\n') == 145);  // header + 12 * 12 cells

    const json meta = json::parse(slurp(kScratch / "slice.meta.json"));
    CHECK(meta.at("resolution") == 12);
    CHECK(meta.at("fill") == "equal_split");
    CHECK(meta.at("local_minima").is_number_integer());
}

TEST_CASE("benchmark reports the reference optimum") {
    const fs::path cfg = write_config("bench.json", base_doc());
    for (const std::string method : {"analytic", "grid"}) {
        const CliResult r = run_cli("benchmark --config " + cfg.string() + " --method " + method);
        REQUIRE(r.exit_code == 0);
        CHECK(contains(r.out, "y_star_kwh: 760\n"));
        CHECK(contains(r.out, "x_star: 3.2,-1.6,"));
    }
    const CliResult bogus = run_cli("benchmark --config " + cfg.string() + " --method sorcery");
    CHECK(bogus.exit_code == 1);
}

TEST_CASE("run produces the artifact bundle") {
    const fs::path out_dir = kScratch / "run_out";
    fs::remove_all(out_dir);
    const fs::path cfg = write_config("run.json", base_doc());
    const CliResult r = run_cli("run --config " + cfg.string() + " --out " + out_dir.string());
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.out, "benchmark: y* = 760 kWh"));
    CHECK(contains(r.out, "runs: 6 ok, 0 failed"));

    for (const char* name :
         {"runs.csv", "metrics.csv", "summary.csv", "metadata.json",
          "boxplot_success_rate_pct.svg", "boxplot_ape_pct.svg", "boxplot_effort_evals.svg"}) {
        CHECK(fs::exists(out_dir / name));
    }
    CHECK(fs::exists(out_dir / "traces" / "ga_1.csv"));
}

TEST_CASE("config problems exit with status 1") {
    json doc = base_doc();
    doc["grid_step"] = 1.6;
    const fs::path cfg = write_config("bad.json", doc);
    const CliResult r = run_cli("run --config " + cfg.string());
    CHECK(r.exit_code == 1);
    CHECK(contains(r.err, "unknown key"));

    const CliResult missing = run_cli("run --config /nonexistent/conf.json");
    CHECK(missing.exit_code == 1);

    const CliResult no_sub = run_cli("");
    CHECK(no_sub.exit_code == 1);
}

TEST_CASE("the version flag reports and exits cleanly") {
    const CliResult r = run_cli("--version");
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "0.1.0"));
}
