#include "tollsim/scenario.hpp"

#include "json_util.hpp"

namespace tollsim {

namespace fs = std::filesystem;
using detail::json;

fs::path ScenarioConfig::resolve(const fs::path& p) const
{
    if (p.empty() || p.is_absolute())
        return p;
    return (base_dir / p).lexically_normal();
}

ScenarioConfig config_from_json(const json& doc, const fs::path& base_dir)
{
    if (!doc.is_object())
        throw ConfigError("config: document must be an object");
    ScenarioConfig c;
    c.base_dir = base_dir;
    const std::string locus = "config";
    try {
        c.network = detail::required<std::string>(doc, "network", locus);
        c.population = detail::required<std::string>(doc, "population", locus);
        c.transit = detail::optional_field<std::string>(doc, "transit", "", locus);
        c.iterations = detail::optional_field<int>(doc, "iterations", c.iterations, locus);
        c.scale = detail::optional_field<double>(doc, "scale", c.scale, locus);
        c.seed = detail::optional_field<std::uint64_t>(doc, "seed", c.seed, locus);
        c.output = detail::optional_field<std::string>(doc, "output", c.output.string(), locus);
        c.threads = detail::optional_field<unsigned>(doc, "threads", c.threads, locus);
        c.cordon = detail::optional_field<std::vector<std::string>>(doc, "cordon", {}, locus);
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
    if (auto it = doc.find("scoring"); it != doc.end())
        c.scoring = *it;
    if (auto it = doc.find("toll"); it != doc.end())
        c.toll = *it;
    if (auto it = doc.find("strategy"); it != doc.end())
        c.strategy = *it;
    if (c.cordon.empty() && c.toll.is_object())
        if (auto r = c.toll.find("region"); r != c.toll.end() && r->is_array())
            c.cordon = r->get<std::vector<std::string>>();
    if (c.iterations < 1)
        throw ConfigError("config: iterations must be at least 1");
    if (!(c.scale > 0.0 && c.scale <= 1.0))
        throw ConfigError("config: scale must lie in (0, 1]");
    return c;
}

ScenarioConfig load_config(const fs::path& path)
{
    std::string text;
    try {
        text = detail::read_text_file(path);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    json doc;
    try {
        doc = detail::parse_json(text, path.string());
    } catch (const ParseError& e) {
        throw ConfigError(e.what());
    }
    auto base = path.parent_path();
    if (base.empty())
        base = ".";
    return config_from_json(doc, fs::absolute(base).lexically_normal());
}

json config_to_json(const ScenarioConfig& c)
{
    json doc = {{"network", c.resolve(c.network).string()},
                {"population", c.resolve(c.population).string()},
                {"iterations", c.iterations},
                {"scale", c.scale},
                {"seed", c.seed},
                {"output", c.resolve(c.output).string()},
                {"threads", c.threads}};
    if (!c.transit.empty())
        doc["transit"] = c.resolve(c.transit).string();
    if (!c.cordon.empty())
        doc["cordon"] = c.cordon;
    doc["scoring"] = scoring_params_to_json(scoring_params_from_json(c.scoring));
    doc["strategy"] = strategy_config_to_json(strategy_config_from_json(c.strategy));
    doc["toll"] = c.toll.is_null() ? json{{"enabled", false}} : c.toll;
    return doc;
}

void apply_toll_overrides(ScenarioConfig& c, const TollOverrides& o)
{
    if (o.no_toll) {
        if (!c.toll.is_object())
            c.toll = json::object();
        c.toll["enabled"] = false;
        return;
    }
    if (o.preset || o.amount) {
        if (!c.toll.is_object())
            throw ConfigError("toll overrides need a toll section with a region");
        c.toll["enabled"] = true;
    }
    if (o.preset) {
        c.toll["preset"] = *o.preset;
        c.toll.erase("periods");
    }
    if (o.amount)
        c.toll["override_amount"] = *o.amount;
}

LoadedScenario load_scenario(const ScenarioConfig& c)
{
    LoadedScenario out{Scenario{load_network(c.resolve(c.network)), {}, {}, {}, {}, {}, {}}, {}};
    auto& sc = out.scenario;
    if (!c.transit.empty())
        sc.transit = load_transit(c.resolve(c.transit), sc.net);
    out.population = load_population(c.resolve(c.population), sc.net);
    sc.scoring = scoring_params_from_json(c.scoring);
    sc.strategy = strategy_config_from_json(c.strategy);
    sc.toll = toll_scheme_from_json(c.toll, sc.net);
    if (!c.cordon.empty()) {
        try {
            sc.cordon = build_cordon(sc.net, c.cordon);
        } catch (const ValidationError& e) {
            throw ConfigError(std::string("cordon: ") + e.what());
        }
    } else if (sc.toll && sc.toll->cordon()) {
        sc.cordon = sc.toll->cordon();
    }
    sc.mobsim.scale = c.scale;
    return out;
}

}  // namespace tollsim
