#include "pbbf/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pbbf {

using nlohmann::json;

namespace {

template <typename Enum>
Enum parse_enum(const json& j, const char* key, std::initializer_list<std::pair<const char*, Enum>> options)
{
    if (!j.is_string()) {
        throw ConfigError(std::string(key) + " must be a string");
    }
    const auto text = j.get<std::string>();
    std::string allowed;
    for (const auto& [name, value] : options) {
        if (text == name) {
            return value;
        }
        allowed += allowed.empty() ? name : std::string(", ") + name;
    }
    throw ConfigError(std::string(key) + ": '" + text + "' is not one of " + allowed);
}

template <typename T>
T get_as(const json& j, const char* key)
{
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "scenario",        "scheme",          "objective",       "constraint",
        "beta",            "snr_db_grid",     "normalized_doppler_grid",
        "num_relays",      "distances",       "num_realizations", "num_frames",
        "seed",            "forgetting_factor", "pm_estimation_mode", "num_pilots",
        "num_data",        "cdf_frames",      "cdf_thresholds",  "trajectories_written",
        "schemes",         "betas",           "warmup_frames",   "data_frames",
        "min_realizations", "target_errors",  "max_bits",        "batch_size",
        "num_oscillators", "workers"};
    return keys;
}

}  // namespace

std::string to_string(Scenario s)
{
    return s == Scenario::idealized ? "idealized" : "realistic";
}

std::string to_string(Scheme s)
{
    return s == Scheme::take_reject ? "tr" : "pm";
}

std::string to_string(Objective o)
{
    return o == Objective::power ? "power" : "snr";
}

std::string to_string(ConstraintKind c)
{
    return c == ConstraintKind::sum_power ? "sum_power" : "per_relay";
}

std::string to_string(PmEstimation m)
{
    return m == PmEstimation::split ? "split" : "whole";
}

ExperimentConfig parse_config(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto& item : j.items()) {
        if (!item.key().empty() && item.key()[0] == '_') {
            continue;
        }
        if (!known_keys().contains(item.key())) {
            throw ConfigError("unknown config key '" + item.key() + "'");
        }
    }

    ExperimentConfig c;
    auto has = [&](const char* k) { return j.contains(k); };
    if (has("scenario")) {
        c.scenario = parse_enum<Scenario>(j["scenario"], "scenario",
                                          {{"idealized", Scenario::idealized},
                                           {"realistic", Scenario::realistic}});
    }
    if (has("scheme")) {
        c.scheme = parse_enum<Scheme>(j["scheme"], "scheme",
                                      {{"tr", Scheme::take_reject}, {"pm", Scheme::plus_minus}});
    }
    if (has("objective")) {
        c.objective = parse_enum<Objective>(j["objective"], "objective",
                                            {{"power", Objective::power}, {"snr", Objective::snr}});
    }
    if (has("constraint")) {
        c.constraint = parse_enum<ConstraintKind>(
            j["constraint"], "constraint",
            {{"sum_power", ConstraintKind::sum_power}, {"per_relay", ConstraintKind::per_relay}});
    }
    if (has("pm_estimation_mode")) {
        c.pm_estimation = parse_enum<PmEstimation>(
            j["pm_estimation_mode"], "pm_estimation_mode",
            {{"split", PmEstimation::split}, {"whole", PmEstimation::whole}});
    }
    if (has("beta")) c.beta = get_as<double>(j["beta"], "beta");
    if (has("snr_db_grid")) c.snr_db_grid = get_as<std::vector<double>>(j["snr_db_grid"], "snr_db_grid");
    if (has("normalized_doppler_grid")) {
        c.normalized_doppler_grid =
            get_as<std::vector<double>>(j["normalized_doppler_grid"], "normalized_doppler_grid");
    }
    if (has("num_relays")) c.num_relays = get_as<int>(j["num_relays"], "num_relays");
    if (has("distances")) {
        c.distances = get_as<std::vector<double>>(j["distances"], "distances");
    } else if (c.num_relays != static_cast<int>(c.distances.size())) {
        c.distances.assign(static_cast<std::size_t>(std::max(c.num_relays, 0)), 1.0);
    }
    if (has("num_realizations")) c.num_realizations = get_as<int>(j["num_realizations"], "num_realizations");
    if (has("num_frames")) c.num_frames = get_as<int>(j["num_frames"], "num_frames");
    if (has("seed")) c.seed = get_as<std::uint64_t>(j["seed"], "seed");
    if (has("forgetting_factor")) c.forgetting_factor = get_as<double>(j["forgetting_factor"], "forgetting_factor");
    if (has("num_pilots")) c.frame.num_pilots = get_as<int>(j["num_pilots"], "num_pilots");
    if (has("num_data")) c.frame.num_data = get_as<int>(j["num_data"], "num_data");
    if (has("cdf_frames")) c.cdf_frames = get_as<std::vector<int>>(j["cdf_frames"], "cdf_frames");
    if (has("cdf_thresholds")) c.cdf_thresholds = get_as<std::vector<double>>(j["cdf_thresholds"], "cdf_thresholds");
    if (has("trajectories_written")) c.trajectories_written = get_as<int>(j["trajectories_written"], "trajectories_written");
    if (has("schemes")) {
        c.schemes.clear();
        for (const auto& name : get_as<std::vector<std::string>>(j["schemes"], "schemes")) {
            try {
                c.schemes.push_back(beamforming_scheme_from_string(name));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("schemes: ") + e.what());
            }
        }
    }
    if (has("betas")) c.betas = get_as<std::vector<double>>(j["betas"], "betas");
    if (has("warmup_frames")) c.warmup_frames = get_as<int>(j["warmup_frames"], "warmup_frames");
    if (has("data_frames")) c.data_frames = get_as<int>(j["data_frames"], "data_frames");
    if (has("min_realizations")) c.min_realizations = get_as<int>(j["min_realizations"], "min_realizations");
    if (has("target_errors")) c.target_errors = get_as<std::int64_t>(j["target_errors"], "target_errors");
    if (has("max_bits")) c.max_bits = get_as<std::int64_t>(j["max_bits"], "max_bits");
    if (has("batch_size")) c.batch_size = get_as<int>(j["batch_size"], "batch_size");
    if (has("num_oscillators")) c.num_oscillators = get_as<int>(j["num_oscillators"], "num_oscillators");
    if (has("workers")) c.workers = get_as<int>(j["workers"], "workers");

    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c)
{
    json j;
    j["scenario"] = to_string(c.scenario);
    j["scheme"] = to_string(c.scheme);
    j["objective"] = to_string(c.objective);
    j["constraint"] = to_string(c.constraint);
    j["beta"] = c.beta;
    j["snr_db_grid"] = c.snr_db_grid;
    j["normalized_doppler_grid"] = c.normalized_doppler_grid;
    j["num_relays"] = c.num_relays;
    j["distances"] = c.distances;
    j["num_realizations"] = c.num_realizations;
    j["num_frames"] = c.num_frames;
    j["seed"] = c.seed;
    j["forgetting_factor"] = c.forgetting_factor;
    j["pm_estimation_mode"] = to_string(c.pm_estimation);
    j["num_pilots"] = c.frame.num_pilots;
    j["num_data"] = c.frame.num_data;
    j["cdf_frames"] = c.cdf_frames;
    j["cdf_thresholds"] = c.cdf_thresholds;
    j["trajectories_written"] = c.trajectories_written;
    std::vector<std::string> schemes;
    for (auto s : c.schemes) {
        schemes.push_back(to_string(s));
    }
    j["schemes"] = schemes;
    j["betas"] = c.betas;
    j["warmup_frames"] = c.warmup_frames;
    j["data_frames"] = c.data_frames;
    j["min_realizations"] = c.min_realizations;
    j["target_errors"] = c.target_errors;
    j["max_bits"] = c.max_bits;
    j["batch_size"] = c.batch_size;
    j["num_oscillators"] = c.num_oscillators;
    // workers omitted: outputs are identical for any worker count.
    return j.dump(2) + "\n";
}

}  // namespace pbbf
