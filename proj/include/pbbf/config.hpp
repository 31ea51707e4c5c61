#pragma once

#include <stdexcept>
#include <string>

#include "pbbf/experiments.hpp"

namespace pbbf {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// JSON <-> ExperimentConfig. Missing keys keep their defaults; unknown keys
// are rejected, except keys starting with '_' which are treated as comments.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string dump_config(const ExperimentConfig& cfg);

std::string to_string(Scenario s);
std::string to_string(Scheme s);
std::string to_string(Objective o);
std::string to_string(ConstraintKind c);
std::string to_string(PmEstimation m);

}  // namespace pbbf
