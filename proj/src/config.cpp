#include "hazardgrid/bench.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace hazardgrid {

using nlohmann::json;

ExperimentConfig::ExperimentConfig()
{
    for (FloodKind k : all_flood_kinds)
        floods[k] = default_flood_params(k);
}

const FloodParams& ExperimentConfig::flood_params(FloodKind kind) const
{
    auto it = floods.find(kind);
    if (it == floods.end())
        throw ConfigError("no flood parameters for '" + std::string(to_string(kind)) + "'");
    return it->second;
}

void ExperimentConfig::validate() const
{
    auto positive = [](int v, const char* name) {
        if (v < 1)
            throw ConfigError(std::string(name) + " must be >= 1");
    };
    positive(maps_per_density, "maps_per_density");
    positive(starts_sampled, "starts_sampled");
    positive(goals_sampled, "goals_sampled");
    positive(episodes_per_epoch, "episodes_per_epoch");
    positive(total_episodes, "total_episodes");
    positive(repetitions, "repetitions");
    if (total_episodes % episodes_per_epoch != 0)
        throw ConfigError("total_episodes must be a multiple of episodes_per_epoch");
    if (step_budget < 0)
        throw ConfigError("step_budget must be >= 0 (0 selects budget_factor * (w + h))");
    if (budget_factor < 1)
        throw ConfigError("budget_factor must be >= 1");
    if (map_sizes.empty() || densities.empty() || flood_kinds.empty())
        throw ConfigError("map_sizes, densities and flood_kinds must be non-empty");
    for (int s : map_sizes)
        if (s < GridMap::min_side)
            throw ConfigError("map size " + std::to_string(s) + " is below " + std::to_string(GridMap::min_side));
    if (std::set<int>(map_sizes.begin(), map_sizes.end()).size() != map_sizes.size() ||
        std::set<Density>(densities.begin(), densities.end()).size() != densities.size() ||
        std::set<FloodKind>(flood_kinds.begin(), flood_kinds.end()).size() != flood_kinds.size())
        throw ConfigError("map_sizes, densities and flood_kinds must not repeat entries");
    if (engine.sonar_cap < 0)
        throw ConfigError("engine.sonar_cap must be >= 0");
    if (!(engine.step_penalty >= 0.0 && engine.step_penalty <= 1.0))
        throw ConfigError("engine.step_penalty must lie in [0, 1]");
    learner.validate();
    for (FloodKind k : flood_kinds)
        flood_params(k).validate(k);
}

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where)
{
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            ok = ok || key == k;
        if (!ok)
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out)
{
    if (auto it = obj.find(key); it != obj.end())
        out = it->get<T>();
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text)
{
    ExperimentConfig cfg;
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");

    try {
        reject_unknown(doc,
                       {"master_seed", "map_sizes", "maps_per_density", "densities", "flood_kinds", "starts_sampled",
                        "goals_sampled", "episodes_per_epoch", "total_episodes", "repetitions", "step_budget", "budget_factor",
                        "greedy_eval", "learner", "engine", "floods"},
                       "config");
        read(doc, "master_seed", cfg.master_seed);
        read(doc, "map_sizes", cfg.map_sizes);
        read(doc, "maps_per_density", cfg.maps_per_density);
        read(doc, "starts_sampled", cfg.starts_sampled);
        read(doc, "goals_sampled", cfg.goals_sampled);
        read(doc, "episodes_per_epoch", cfg.episodes_per_epoch);
        read(doc, "total_episodes", cfg.total_episodes);
        read(doc, "repetitions", cfg.repetitions);
        read(doc, "step_budget", cfg.step_budget);
        read(doc, "budget_factor", cfg.budget_factor);
        read(doc, "greedy_eval", cfg.greedy_eval);
        if (auto it = doc.find("densities"); it != doc.end()) {
            cfg.densities.clear();
            for (const auto& d : *it)
                cfg.densities.push_back(parse_density(d.get<std::string>()));
        }
        if (auto it = doc.find("flood_kinds"); it != doc.end()) {
            cfg.flood_kinds.clear();
            for (const auto& k : *it)
                cfg.flood_kinds.push_back(parse_flood_kind(k.get<std::string>()));
        }
        if (auto it = doc.find("learner"); it != doc.end()) {
            const json& l = *it;
            reject_unknown(l,
                           {"alpha", "gamma", "epsilon0", "epsilon_decay", "epsilon_min", "update_rule", "interleave",
                            "alpha_schedule", "decay_mode"},
                           "learner");
            read(l, "alpha", cfg.learner.alpha);
            read(l, "gamma", cfg.learner.gamma);
            read(l, "epsilon0", cfg.learner.epsilon0);
            read(l, "epsilon_decay", cfg.learner.epsilon_decay);
            read(l, "epsilon_min", cfg.learner.epsilon_min);
            if (l.contains("update_rule"))
                cfg.learner.update_rule = parse_update_rule(l["update_rule"].get<std::string>());
            if (l.contains("interleave"))
                cfg.learner.interleave = parse_interleave(l["interleave"].get<std::string>());
            if (l.contains("alpha_schedule"))
                cfg.learner.alpha_schedule = parse_alpha_schedule(l["alpha_schedule"].get<std::string>());
            if (l.contains("decay_mode"))
                cfg.learner.decay_mode = parse_decay_mode(l["decay_mode"].get<std::string>());
        }
        if (auto it = doc.find("engine"); it != doc.end()) {
            reject_unknown(*it, {"sonar_cap", "key_flood_tag", "step_penalty"}, "engine");
            read(*it, "sonar_cap", cfg.engine.sonar_cap);
            read(*it, "key_flood_tag", cfg.engine.key_flood_tag);
            read(*it, "step_penalty", cfg.engine.step_penalty);
        }
        if (auto it = doc.find("floods"); it != doc.end()) {
            for (const auto& [name, block] : it->items()) {
                const FloodKind kind = parse_flood_kind(name);
                reject_unknown(block, {"r0", "delta_r", "delta_d", "spawn_prob", "max_spawn"}, "floods." + name);
                FloodParams& p = cfg.floods[kind];
                read(block, "r0", p.r0);
                read(block, "delta_r", p.delta_r);
                read(block, "delta_d", p.delta_d);
                read(block, "spawn_prob", p.spawn_prob);
                read(block, "max_spawn", p.max_spawn);
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field has the wrong type: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg)
{
    json doc;
    doc["master_seed"] = cfg.master_seed;
    doc["map_sizes"] = cfg.map_sizes;
    doc["maps_per_density"] = cfg.maps_per_density;
    doc["densities"] = json::array();
    for (Density d : cfg.densities)
        doc["densities"].push_back(std::string(to_string(d)));
    doc["flood_kinds"] = json::array();
    for (FloodKind k : cfg.flood_kinds)
        doc["flood_kinds"].push_back(std::string(to_string(k)));
    doc["starts_sampled"] = cfg.starts_sampled;
    doc["goals_sampled"] = cfg.goals_sampled;
    doc["episodes_per_epoch"] = cfg.episodes_per_epoch;
    doc["total_episodes"] = cfg.total_episodes;
    doc["repetitions"] = cfg.repetitions;
    doc["step_budget"] = cfg.step_budget;
    doc["budget_factor"] = cfg.budget_factor;
    doc["greedy_eval"] = cfg.greedy_eval;
    doc["learner"] = {
        {"alpha", cfg.learner.alpha},
        {"gamma", cfg.learner.gamma},
        {"epsilon0", cfg.learner.epsilon0},
        {"epsilon_decay", cfg.learner.epsilon_decay},
        {"epsilon_min", cfg.learner.epsilon_min},
        {"update_rule", std::string(to_string(cfg.learner.update_rule))},
        {"interleave", std::string(to_string(cfg.learner.interleave))},
        {"alpha_schedule", std::string(to_string(cfg.learner.alpha_schedule))},
        {"decay_mode", std::string(to_string(cfg.learner.decay_mode))},
    };
    doc["engine"] = {
        {"sonar_cap", cfg.engine.sonar_cap},
        {"key_flood_tag", cfg.engine.key_flood_tag},
        {"step_penalty", cfg.engine.step_penalty},
    };
    for (const auto& [kind, p] : cfg.floods)
        doc["floods"][std::string(to_string(kind))] = {
            {"r0", p.r0}, {"delta_r", p.delta_r}, {"delta_d", p.delta_d}, {"spawn_prob", p.spawn_prob}, {"max_spawn", p.max_spawn},
        };
    return doc.dump(2) + "\n";
}

} // namespace hazardgrid
