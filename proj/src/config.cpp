#include "shapebench/experiment.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <string>
#include <utility>

#include "shapebench/errors.hpp"

namespace shapebench {
namespace {

using nlohmann::json;

// Reads one JSON object with typed accessors; every message names the key it
// refers to as "<ctx><key>", e.g. "space.bound".
struct Reader {
    const json& obj;
    std::string ctx;

    std::string where(const std::string& key) const { return "\"" + ctx + key + "\""; }

    void allow_only(std::initializer_list<const char*> allowed) const {
        for (const auto& item : obj.items()) {
            bool known = false;
            for (const char* k : allowed) {
                if (item.key() == k) {
                    known = true;
                    break;
                }
            }
            if (!known) throw ConfigError("unknown key " + where(item.key()));
        }
    }

    const json* find(const char* key) const {
        auto it = obj.find(key);
        return it == obj.end() ? nullptr : &*it;
    }

    double number(const char* key, double fallback) const {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_number()) throw ConfigError(where(key) + " must be a number");
        return v->get<double>();
    }

    std::int64_t integer(const char* key, std::int64_t fallback) const {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_number_integer()) throw ConfigError(where(key) + " must be an integer");
        return v->get<std::int64_t>();
    }

    int small_integer(const char* key, int fallback) const {
        const std::int64_t v = integer(key, fallback);
        if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
            throw ConfigError(where(key) + " out of range");
        }
        return static_cast<int>(v);
    }

    std::uint64_t seed(const char* key, std::uint64_t fallback) const {
        const json* v = find(key);
        if (!v) return fallback;
        if (v->is_number_unsigned()) return v->get<std::uint64_t>();
        if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
            return static_cast<std::uint64_t>(v->get<std::int64_t>());
        }
        throw ConfigError(where(key) + " must be a non-negative integer");
    }

    bool boolean(const char* key, bool fallback) const {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_boolean()) throw ConfigError(where(key) + " must be true or false");
        return v->get<bool>();
    }

    std::string text(const char* key, std::string fallback) const {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_string()) throw ConfigError(where(key) + " must be a string");
        return v->get<std::string>();
    }

    std::vector<double> number_list(const char* key) const {
        const json* v = find(key);
        if (!v || !v->is_array()) throw ConfigError(where(key) + " must be an array of numbers");
        std::vector<double> out;
        out.reserve(v->size());
        for (const json& e : *v) {
            if (!e.is_number()) throw ConfigError(where(key) + " must be an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::vector<std::string> string_list(const char* key) const {
        const json* v = find(key);
        if (!v || !v->is_array()) throw ConfigError(where(key) + " must be an array of strings");
        std::vector<std::string> out;
        out.reserve(v->size());
        for (const json& e : *v) {
            if (!e.is_string()) throw ConfigError(where(key) + " must be an array of strings");
            out.push_back(e.get<std::string>());
        }
        return out;
    }
};

SpaceSpec parse_space(const json& j) {
    if (!j.is_object()) throw ConfigError("\"space\" must be an object");
    Reader r{j, "space."};
    r.allow_only({"n", "bound", "zero_sum_tol", "grid"});
    GridSpec grid;
    if (const json* g = r.find("grid")) {
        if (!g->is_object()) throw ConfigError("\"space.grid\" must be an object");
        Reader gr{*g, "space.grid."};
        gr.allow_only({"step", "anchor"});
        grid.step = gr.number("step", grid.step);
        grid.anchor = gr.number("anchor", grid.anchor);
    }
    std::optional<double> tol;
    if (r.find("zero_sum_tol")) tol = r.number("zero_sum_tol", 0.0);
    return make_space(r.small_integer("n", 4), r.number("bound", 11.5), grid, tol);
}

ObjectiveChoice parse_objective(const json& j, const SpaceSpec& space) {
    ObjectiveChoice out;
    std::string kind;
    json body = json::object();
    if (j.is_string()) {
        kind = j.get<std::string>();
    } else if (j.is_object()) {
        Reader r{j, "objective."};
        kind = r.text("kind", "");
        if (kind.empty()) throw ConfigError("missing required key \"objective.kind\"");
        body = j;
    } else {
        throw ConfigError("\"objective\" must be a kind name or an object with \"kind\"");
    }

    Reader r{body, "objective."};
    if (kind == "synthetic") {
        r.allow_only({"kind", "baseline_kwh", "quad_weight", "rugged_amplitude",
                      "rugged_frequency", "target", "noise_sigma", "noise_seed", "memoize"});
        SyntheticParams p;
        p.target = SyntheticParams::default_target(space.n);
        p.baseline_kwh = r.number("baseline_kwh", p.baseline_kwh);
        p.quad_weight = r.number("quad_weight", p.quad_weight);
        p.rugged_amplitude = r.number("rugged_amplitude", p.rugged_amplitude);
        p.rugged_frequency = r.number("rugged_frequency", p.rugged_frequency);
        if (r.find("target")) p.target = ShapeVector{r.number_list("target")};
        p.noise_sigma = r.number("noise_sigma", p.noise_sigma);
        p.noise_seed = r.seed("noise_seed", p.noise_seed);
        out.choice = std::move(p);
    } else if (kind == "external") {
        r.allow_only({"kind", "command", "timeout_sec", "restart_on_crash", "memoize"});
        ExternalObjectiveConfig cfg;
        cfg.command = r.string_list("command");
        cfg.timeout_sec = r.number("timeout_sec", cfg.timeout_sec);
        cfg.restart_on_crash = r.boolean("restart_on_crash", cfg.restart_on_crash);
        out.choice = std::move(cfg);
    } else {
        throw ConfigError("unknown objective \"" + kind + "\"");
    }
    out.memoize = r.boolean("memoize", false);
    return out;
}

GaConfig parse_ga(const json& body) {
    Reader r{body, "ga."};
    r.allow_only({"init_pop", "gen_pop", "num_gen", "num_elit", "mutation_rate", "budget"});
    GaConfig cfg;
    cfg.init_pop = r.small_integer("init_pop", cfg.init_pop);
    cfg.gen_pop = r.small_integer("gen_pop", cfg.gen_pop);
    cfg.num_gen = r.small_integer("num_gen", cfg.num_gen);
    cfg.num_elit = r.small_integer("num_elit", cfg.num_elit);
    cfg.mutation_rate = r.number("mutation_rate", cfg.mutation_rate);
    cfg.budget = r.integer("budget", cfg.budget);
    return cfg;
}

RsConfig parse_rs(const json& body) {
    Reader r{body, "rs."};
    r.allow_only({"budget"});
    RsConfig cfg;
    cfg.budget = r.integer("budget", cfg.budget);
    return cfg;
}

GsConfig parse_gs(const json& body) {
    Reader r{body, "gs."};
    r.allow_only({"budget", "without_replacement"});
    GsConfig cfg;
    cfg.budget = r.integer("budget", cfg.budget);
    cfg.without_replacement = r.boolean("without_replacement", cfg.without_replacement);
    return cfg;
}

AlgorithmEntry parse_algorithm(const json& entry, std::size_t pos) {
    const std::string ctx = "algorithms[" + std::to_string(pos) + "]";
    std::string id;
    json body = json::object();
    if (entry.is_string()) {
        id = entry.get<std::string>();
    } else if (entry.is_object() && entry.size() == 1) {
        auto it = entry.begin();
        id = it.key();
        body = it.value();
        if (!body.is_object()) {
            throw ConfigError("\"" + ctx + "." + id + "\" must be a settings object");
        }
    } else {
        throw ConfigError("\"" + ctx + "\" must be an algorithm name or {name: settings}");
    }

    AlgorithmEntry out;
    out.id = id;
    if (id == "ga") {
        out.config = parse_ga(body);
    } else if (id == "rs") {
        out.config = parse_rs(body);
    } else if (id == "gs") {
        out.config = parse_gs(body);
    } else {
        throw ConfigError("unknown algorithm \"" + id + "\" in \"" + ctx + "\"");
    }
    return out;
}

json space_to_json(const SpaceSpec& s) {
    return json{{"n", s.n},
                {"bound", s.bound},
                {"zero_sum_tol", s.zero_sum_tol},
                {"grid", json{{"step", s.grid.step}, {"anchor", s.grid.anchor}}}};
}

json objective_to_json(const ObjectiveChoice& o) {
    json j;
    if (const SyntheticParams* p = o.synthetic()) {
        j = json{{"kind", "synthetic"},
                 {"baseline_kwh", p->baseline_kwh},
                 {"quad_weight", p->quad_weight},
                 {"rugged_amplitude", p->rugged_amplitude},
                 {"rugged_frequency", p->rugged_frequency},
                 {"target", p->target.values},
                 {"noise_sigma", p->noise_sigma},
                 {"noise_seed", p->noise_seed}};
    } else {
        const auto& e = std::get<ExternalObjectiveConfig>(o.choice);
        j = json{{"kind", "external"},
                 {"command", e.command},
                 {"timeout_sec", e.timeout_sec},
                 {"restart_on_crash", e.restart_on_crash}};
    }
    j["memoize"] = o.memoize;
    return j;
}

json algorithm_to_json(const AlgorithmEntry& a) {
    json settings;
    if (const GaConfig* ga = std::get_if<GaConfig>(&a.config)) {
        settings = json{{"init_pop", ga->init_pop},     {"gen_pop", ga->gen_pop},
                        {"num_gen", ga->num_gen},       {"num_elit", ga->num_elit},
                        {"mutation_rate", ga->mutation_rate}, {"budget", ga->budget}};
    } else if (const RsConfig* rs = std::get_if<RsConfig>(&a.config)) {
        settings = json{{"budget", rs->budget}};
    } else {
        const auto& gs = std::get<GsConfig>(a.config);
        settings = json{{"budget", gs.budget}, {"without_replacement", gs.without_replacement}};
    }
    return json{{a.id, settings}};
}

// Owns the wrapped objective so make_objective can hand back one handle.
class OwningMemoizedObjective final : public Objective {
public:
    explicit OwningMemoizedObjective(std::unique_ptr<Objective> inner)
        : inner_(std::move(inner)), memo_(*inner_) {}

private:
    Kwh do_evaluate(const ShapeVector& x) override { return memo_.evaluate(x); }

    std::unique_ptr<Objective> inner_;
    MemoizingObjective memo_;
};

}  // namespace

std::int64_t AlgorithmEntry::budget() const {
    return std::visit([](const auto& cfg) { return cfg.budget; }, config);
}

void ExperimentConfig::validate() const {
    space.validate();
    if (repetitions < 1) throw ConfigError("\"repetitions\" must be >= 1");
    if (workers < 1) throw ConfigError("\"workers\" must be >= 1");
    if (output_dir.empty()) throw ConfigError("\"output_dir\" must not be empty");
    metrics.validate();

    if (algorithms.empty()) throw ConfigError("\"algorithms\" must list at least one algorithm");
    std::set<std::string> seen;
    for (const AlgorithmEntry& a : algorithms) {
        if (!seen.insert(a.id).second) {
            throw ConfigError("duplicate algorithm \"" + a.id + "\" in \"algorithms\"");
        }
        std::visit([](const auto& cfg) { cfg.validate(); }, a.config);
    }

    if (const SyntheticParams* p = objective.synthetic()) {
        p->validate(space);
    } else {
        std::get<ExternalObjectiveConfig>(objective.choice).validate();
    }
    if (benchmark_method == BenchmarkSource::analytic && !objective.is_synthetic()) {
        throw ConfigError("\"benchmark\": analytic needs the synthetic objective");
    }
}

nlohmann::json ExperimentConfig::to_json() const {
    json algos = json::array();
    for (const AlgorithmEntry& a : algorithms) algos.push_back(algorithm_to_json(a));
    return json{{"space", space_to_json(space)},
                {"objective", objective_to_json(objective)},
                {"algorithms", algos},
                {"repetitions", repetitions},
                {"master_seed", master_seed},
                {"benchmark", to_string(benchmark_method)},
                {"metrics", json{{"success_tol", metrics.success_tol}, {"k", metrics.k}}},
                {"output_dir", output_dir},
                {"workers", workers}};
}

ExperimentConfig load_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    Reader top{doc, ""};
    top.allow_only({"space", "objective", "algorithms", "repetitions", "master_seed",
                    "benchmark", "metrics", "output_dir", "workers"});
    for (const char* required : {"objective", "algorithms", "master_seed"}) {
        if (!top.find(required)) {
            throw ConfigError(std::string("missing required key \"") + required + "\"");
        }
    }

    ExperimentConfig cfg;
    if (const json* s = top.find("space")) {
        cfg.space = parse_space(*s);
    } else {
        cfg.space = make_space(4, 11.5);
    }
    cfg.objective = parse_objective(doc.at("objective"), cfg.space);

    const json& algos = doc.at("algorithms");
    if (!algos.is_array()) throw ConfigError("\"algorithms\" must be an array");
    for (std::size_t i = 0; i < algos.size(); ++i) {
        cfg.algorithms.push_back(parse_algorithm(algos[i], i));
    }

    cfg.repetitions = top.small_integer("repetitions", cfg.repetitions);
    cfg.master_seed = top.seed("master_seed", 0);
    const std::string method = top.text("benchmark", to_string(cfg.benchmark_method));
    if (auto parsed = benchmark_source_from_string(method)) {
        cfg.benchmark_method = *parsed;
    } else {
        throw ConfigError("\"benchmark\" must be one of long_ga, exhaustive_grid, analytic");
    }
    if (const json* m = top.find("metrics")) {
        if (!m->is_object()) throw ConfigError("\"metrics\" must be an object");
        Reader mr{*m, "metrics."};
        mr.allow_only({"success_tol", "k"});
        cfg.metrics.success_tol = mr.number("success_tol", cfg.metrics.success_tol);
        cfg.metrics.k = mr.small_integer("k", cfg.metrics.k);
    }
    cfg.output_dir = top.text("output_dir", cfg.output_dir);
    cfg.workers = top.small_integer("workers", cfg.workers);

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return load_config(doc);
}

std::unique_ptr<Objective> make_objective(const ObjectiveChoice& choice) {
    std::unique_ptr<Objective> obj;
    if (const SyntheticParams* p = choice.synthetic()) {
        obj = std::make_unique<SyntheticObjective>(*p);
    } else {
        obj = std::make_unique<ExternalObjective>(std::get<ExternalObjectiveConfig>(choice.choice));
    }
    if (choice.memoize) obj = std::make_unique<OwningMemoizedObjective>(std::move(obj));
    return obj;
}

}  // namespace shapebench
