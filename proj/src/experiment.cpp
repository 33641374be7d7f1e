#include "shapebench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "shapebench/errors.hpp"
#include "shapebench/rng.hpp"
#include "shapebench/svg.hpp"
#include "shapebench/text.hpp"
#include "shapebench/version.hpp"

namespace shapebench {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

RunOutcome execute_run(const ExperimentConfig& cfg, const AlgorithmEntry& algo, int rep) {
    RunOutcome out;
    out.algo = algo.id;
    out.rep = rep;
    out.seed = derive_stream_seed(cfg.master_seed, algo.id, static_cast<std::uint64_t>(rep));
    std::unique_ptr<Objective> obj;
    try {
        obj = make_objective(cfg.objective);
        RunTrace trace = std::visit(
            overloaded{[&](const GaConfig& c) { return run_ga(c, cfg.space, *obj, out.seed); },
                       [&](const RsConfig& c) { return run_rs(c, cfg.space, *obj, out.seed); },
                       [&](const GsConfig& c) { return run_gs(c, cfg.space, *obj, out.seed); }},
            algo.config);
        out.evals_used = static_cast<std::int64_t>(trace.length());
        out.trace = std::move(trace);
    } catch (const std::exception& e) {
        out.error = e.what();
        out.evals_used = obj ? obj->eval_count() : 0;
    }
    return out;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string runs_csv(const ExperimentConfig& cfg, const std::vector<RunOutcome>& runs) {
    std::ostringstream o;
    o << "algo,rep,seed,evals_used,best_kwh";
    for (int i = 1; i <= cfg.space.n; ++i) o << ",x" << i;
    o << ",status,error\n";
    for (const RunOutcome& r : runs) {
        o << r.algo << ',' << r.rep << ',' << r.seed << ',' << r.evals_used << ',';
        if (r.ok()) {
            const EvalRecord& best = r.trace->best();
            o << fmt_double(best.f);
            for (double x : best.x.values) o << ',' << fmt_double(x);
            o << ",ok,";
        } else {
            for (int i = 0; i <= cfg.space.n; ++i) o << ',';
            o << "failed," << csv_escape(r.error);
        }
        o << '\n';
    }
    return o.str();
}

struct RunMetrics {
    const RunOutcome* run = nullptr;
    double success_rate_pct = 0.0;
    EffortResult effort;
    Kwh best_kwh = 0.0;
    double ape_pct = 0.0;
};

std::map<std::string, std::vector<RunMetrics>> per_algo_metrics(
    const ExperimentConfig& cfg, const Benchmark& bench, const std::vector<RunOutcome>& runs) {
    std::map<std::string, std::vector<RunMetrics>> by_algo;
    for (const RunOutcome& r : runs) {
        if (!r.ok()) continue;
        RunMetrics m;
        m.run = &r;
        m.success_rate_pct = success_rate(*r.trace, bench, cfg.metrics.success_tol);
        m.effort = computational_effort(*r.trace, bench, cfg.metrics.success_tol, cfg.metrics.k);
        m.best_kwh = r.trace->best().f;
        m.ape_pct = 100.0 * std::abs(bench.y_star - m.best_kwh) / bench.y_star;
        by_algo[r.algo].push_back(m);
    }
    return by_algo;
}

// Per-repetition rows, then one aggregate row per algorithm (rep = "all")
// whose ape_pct column carries the MAPE across its repetitions.
std::string metrics_csv(const Benchmark& bench,
                        const std::map<std::string, std::vector<RunMetrics>>& by_algo) {
    std::ostringstream o;
    o << "algo,rep,success_rate_pct,effort_evals,effort_censored,best_kwh,ape_pct\n";
    for (const auto& [algo, rows] : by_algo) {
        std::vector<Kwh> bests;
        for (const RunMetrics& m : rows) {
            o << algo << ',' << m.run->rep << ',' << fmt_double(m.success_rate_pct) << ','
              << m.effort.evals << ',' << (m.effort.censored ? 1 : 0) << ','
              << fmt_double(m.best_kwh) << ',' << fmt_double(m.ape_pct) << '\n';
            bests.push_back(m.best_kwh);
        }
        o << algo << ",all,,,,," << fmt_double(mape(bests, bench)) << '\n';
    }
    return o.str();
}

const char* const kMeasures[] = {"success_rate_pct", "ape_pct", "effort_evals"};

std::vector<double> measure_values(const std::vector<RunMetrics>& rows,
                                   const std::string& measure) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const RunMetrics& m : rows) {
        if (measure == "success_rate_pct") v.push_back(m.success_rate_pct);
        else if (measure == "ape_pct") v.push_back(m.ape_pct);
        else v.push_back(static_cast<double>(m.effort.evals));
    }
    return v;
}

std::string summary_csv(const std::map<std::string, std::vector<RunMetrics>>& by_algo) {
    std::ostringstream o;
    o << "algo,measure,min,q1,median,q3,max,mean,std\n";
    for (const auto& [algo, rows] : by_algo) {
        for (const char* measure : kMeasures) {
            const BoxplotStats s = boxplot_stats(measure_values(rows, measure));
            o << algo << ',' << measure << ',' << fmt_double(s.min) << ',' << fmt_double(s.q1)
              << ',' << fmt_double(s.median) << ',' << fmt_double(s.q3) << ','
              << fmt_double(s.max) << ',' << fmt_double(s.mean) << ',' << fmt_double(s.std_dev)
              << '\n';
        }
    }
    return o.str();
}

std::string trace_csv(const ExperimentConfig& cfg, const RunTrace& trace) {
    std::ostringstream o;
    o << "index";
    for (int i = 1; i <= cfg.space.n; ++i) o << ",x" << i;
    o << ",f_kwh,best_so_far_kwh\n";
    for (const EvalRecord& r : trace.records) {
        o << r.index;
        for (double x : r.x.values) o << ',' << fmt_double(x);
        o << ',' << fmt_double(r.f) << ',' << fmt_double(r.best_so_far) << '\n';
    }
    return o.str();
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string metadata_json(const ExperimentConfig& cfg, const Benchmark& bench,
                          const std::vector<RunOutcome>& runs) {
    json seeds = json::array();
    for (const RunOutcome& r : runs) {
        seeds.push_back(json{{"algo", r.algo}, {"rep", r.rep}, {"seed", r.seed}});
    }
    const json doc{
        {"tool_version", kToolVersion},
        {"generated_at", utc_timestamp()},
        {"config", cfg.to_json()},
        {"benchmark",
         json{{"y_star_kwh", bench.y_star},
              {"x_star", bench.x_star.values},
              {"source", to_string(bench.source)},
              {"evals_used", bench.evals_used}}},
        {"seed_derivation",
         json{{"function",
               "h = splitmix64(master_seed); h = splitmix64(h ^ fnv1a64(algo_id)); "
               "rep_seed = splitmix64(h ^ rep); rep is the 1-based repetition index"},
              {"generator", "mt19937_64 seeded with rep_seed; doubles via (x >> 11) * 2^-53; "
                            "bounded ints via rejection"},
              {"runs", seeds}}}};
    return doc.dump(2) + "\n";
}

void write_boxplots(const fs::path& dir,
                    const std::map<std::string, std::vector<RunMetrics>>& by_algo) {
    const std::map<std::string, std::string> titles{
        {"success_rate_pct", "Success rate per repetition"},
        {"ape_pct", "Absolute percentage error of best values"},
        {"effort_evals", "Computational effort (evaluations to k successes)"}};
    for (const char* measure : kMeasures) {
        std::vector<BoxplotSeries> series;
        for (const auto& [algo, rows] : by_algo) {
            series.push_back(BoxplotSeries{algo, boxplot_stats(measure_values(rows, measure))});
        }
        if (series.empty()) continue;
        write_text_file(dir / ("boxplot_" + std::string(measure) + ".svg"),
                        boxplot_svg(titles.at(measure), measure, series));
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir / "traces");

    const SyntheticParams* analytic = cfg.objective.synthetic();
    ExperimentResult result;
    result.output_dir = out_dir;
    result.benchmark =
        estimate_benchmark(cfg.space, [&] { return make_objective(cfg.objective); },
                           cfg.benchmark_method, cfg.master_seed, analytic);

    struct Task {
        const AlgorithmEntry* algo;
        int rep;
    };
    std::vector<Task> tasks;
    for (const AlgorithmEntry& a : cfg.algorithms) {
        for (int rep = 1; rep <= cfg.repetitions; ++rep) tasks.push_back(Task{&a, rep});
    }

    std::vector<RunOutcome> outcomes(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
            outcomes[i] = execute_run(cfg, *tasks[i].algo, tasks[i].rep);
        }
    };
    const int workers = std::min<int>(cfg.workers, static_cast<int>(tasks.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    std::sort(outcomes.begin(), outcomes.end(), [](const RunOutcome& a, const RunOutcome& b) {
        return a.algo != b.algo ? a.algo < b.algo : a.rep < b.rep;
    });
    result.runs = std::move(outcomes);

    const auto by_algo = per_algo_metrics(cfg, result.benchmark, result.runs);
    write_text_file(out_dir / "runs.csv", runs_csv(cfg, result.runs));
    write_text_file(out_dir / "metrics.csv", metrics_csv(result.benchmark, by_algo));
    write_text_file(out_dir / "summary.csv", summary_csv(by_algo));
    for (const RunOutcome& r : result.runs) {
        if (!r.ok()) continue;  // failed runs leave no trace file
        write_text_file(out_dir / "traces" / (r.algo + "_" + std::to_string(r.rep) + ".csv"),
                        trace_csv(cfg, *r.trace));
    }
    write_text_file(out_dir / "metadata.json", metadata_json(cfg, result.benchmark, result.runs));
    write_boxplots(out_dir, by_algo);
    return result;
}

}  // namespace shapebench
