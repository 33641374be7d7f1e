#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "shapebench/errors.hpp"
#include "shapebench/experiment.hpp"
#include "shapebench/landscape.hpp"
#include "shapebench/text.hpp"
#include "shapebench/version.hpp"

namespace {

using namespace shapebench;
namespace fs = std::filesystem;

std::string join_components(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ',';
        out += fmt_double(v[i]);
    }
    return out;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

int cmd_run(ExperimentConfig cfg) {
    const ExperimentResult result = run_experiment(cfg);
    int failed = 0;
    for (const RunOutcome& r : result.runs) {
        if (!r.ok()) ++failed;
    }
    std::cout << "benchmark: y* = " << fmt_double(result.benchmark.y_star) << " kWh via "
              << to_string(result.benchmark.source) << " (" << result.benchmark.evals_used
              << " evaluations)\n";
    std::cout << "runs: " << (result.runs.size() - static_cast<std::size_t>(failed)) << " ok, "
              << failed << " failed\n";
    std::cout << "outputs: " << result.output_dir.string() << "\n";
    return failed == 0 ? 0 : 2;
}

int cmd_benchmark(const ExperimentConfig& cfg, const std::string& method_name) {
    BenchmarkSource method;
    if (method_name == "long-ga") {
        method = BenchmarkSource::long_ga;
    } else if (method_name == "grid") {
        method = BenchmarkSource::exhaustive_grid;
    } else if (method_name == "analytic") {
        method = BenchmarkSource::analytic;
    } else {
        throw ConfigError("--method must be one of long-ga, grid, analytic");
    }
    if (method == BenchmarkSource::analytic && !cfg.objective.is_synthetic()) {
        throw ConfigError("--method analytic needs the synthetic objective");
    }
    const Benchmark b =
        estimate_benchmark(cfg.space, [&] { return make_objective(cfg.objective); }, method,
                           cfg.master_seed, cfg.objective.synthetic());
    std::cout << "y_star_kwh: " << fmt_double(b.y_star) << "\n";
    std::cout << "x_star: " << join_components(b.x_star.values) << "\n";
    std::cout << "evals_used: " << b.evals_used << "\n";
    std::cout << "source: " << to_string(b.source) << "\n";
    return 0;
}

std::pair<int, int> parse_axes(const std::string& s) {
    const auto comma = s.find(',');
    if (comma != std::string::npos) {
        try {
            return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
        } catch (const std::exception&) {
        }
    }
    throw ConfigError("--axes must be two 1-based indices \"i,j\"");
}

int cmd_landscape(const ExperimentConfig& cfg, const std::string& axes_str, int resolution,
                  const std::string& out_path) {
    const auto [ai, aj] = parse_axes(axes_str);
    if (ai == aj) throw ConfigError("axes must differ");
    if (ai < 1 || ai > cfg.space.n || aj < 1 || aj > cfg.space.n) {
        throw ConfigError("--axes indices must be in [1, " + std::to_string(cfg.space.n) + "]");
    }
    if (resolution < 2) throw ConfigError("--resolution must be >= 2");

    const auto obj = make_objective(cfg.objective);
    const SliceTable slice = slice_grid(cfg.space, *obj, ai - 1, aj - 1, resolution);
    const int minima = count_local_minima(slice);

    std::ostringstream csv;
    csv << "xi,xj,f_kwh\n";
    for (const SliceCell& c : slice.cells) {
        csv << fmt_double(c.xi) << ',' << fmt_double(c.xj) << ',';
        if (c.f) csv << fmt_double(*c.f);
        csv << '\n';
    }
    write_file(out_path, csv.str());

    const nlohmann::json meta{{"axes", {ai, aj}},
                              {"axes_indexing", "1-based"},
                              {"resolution", resolution},
                              {"fill", to_string(slice.fill)},
                              {"local_minima", minima},
                              {"evaluations", obj->eval_count()}};
    fs::path meta_path(out_path);
    meta_path.replace_extension(".meta.json");
    write_file(meta_path, meta.dump(2) + "\n");

    std::cout << "local_minima: " << minima << "\n";
    std::cout << "outputs: " << out_path << " " << meta_path.string() << "\n";
    return 0;
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& x_str) {
    const auto values = parse_double_list(x_str);
    if (!values) throw ConfigError("--x must be a comma-separated list of numbers");
    if (static_cast<int>(values->size()) != cfg.space.n) {
        throw ConfigError("--x must have " + std::to_string(cfg.space.n) + " components");
    }
    const ShapeVector x{*values};
    if (!is_feasible(cfg.space, x)) {
        std::cerr << "note: x is outside the feasible region\n";
    }
    const auto obj = make_objective(cfg.objective);
    std::cout << fmt_double(obj->evaluate(x)) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shape-vector optimization benchmark harness"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string config_path, out_dir, method = "grid", axes = "1,2", x_str, out_path;
    std::uint64_t seed = 0;
    int resolution = 50, workers = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "Run the full experiment");
    run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "Output directory (overrides config)");
    run_cmd->add_option("--seed", seed, "Master seed (overrides config)");
    run_cmd->add_option("--workers", workers, "Concurrent runs (overrides config)");

    CLI::App* bench_cmd = app.add_subcommand("benchmark", "Estimate the reference optimum");
    bench_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
    bench_cmd->add_option("--method", method, "long-ga | grid | analytic")->required();

    CLI::App* land_cmd = app.add_subcommand("landscape", "Export a 2-D objective slice");
    land_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
    land_cmd->add_option("--axes", axes, "Two 1-based axis indices, e.g. 1,2")->required();
    land_cmd->add_option("--resolution", resolution, "Points per axis")->required();
    land_cmd->add_option("--out", out_path, "Slice CSV path")->default_val("landscape.csv");

    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate the objective at one point");
    eval_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
    eval_cmd->add_option("--x", x_str, "Comma-separated components")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        ExperimentConfig cfg = load_config_file(config_path);
        if (run_cmd->parsed()) {
            if (run_cmd->count("--out") > 0) cfg.output_dir = out_dir;
            if (run_cmd->count("--seed") > 0) cfg.master_seed = seed;
            if (run_cmd->count("--workers") > 0) cfg.workers = workers;
            cfg.validate();
            return cmd_run(std::move(cfg));
        }
        if (bench_cmd->parsed()) return cmd_benchmark(cfg, method);
        if (land_cmd->parsed()) return cmd_landscape(cfg, axes, resolution, out_path);
        return cmd_eval(cfg, x_str);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
