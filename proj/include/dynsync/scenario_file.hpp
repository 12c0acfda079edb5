#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dynsync/adversary.hpp"
#include "dynsync/batch.hpp"
#include "dynsync/engine.hpp"

namespace dynsync {

// Raised for malformed scenario documents; key() is the dotted path of the
// offending entry ("graph.density", "algorithm", ...).
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}

    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct OutputSpec {
    std::string dir = ".";
    std::string trace = "trace.json";
    std::string trace_csv = "trace.csv";
    std::string summary = "summary.csv";
    std::string batch = "batch.csv";

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct BatchSpec {
    std::size_t seeds = 0;
    int parallel = 1;
    double threshold = 0.0;
};

struct ScenarioFile {
    Scenario scenario;
    CheckPlan plan;
    std::optional<ConnectivityClass> declared_class;
    OutputSpec output;
    BatchSpec batch;
};

// Horizon used when the document has none.
Round default_horizon(std::size_t n, Round s_max);

ScenarioFile parse_scenario(const nlohmann::json& doc);
// Raw document; unreadable files and malformed JSON raise SchemaError.
nlohmann::json read_scenario_document(const std::filesystem::path& path);
ScenarioFile load_scenario(const std::filesystem::path& path);

// Canonical scenario echo: explicit node list, explicit start map, resolved
// graph seed. Parses back to an equal Scenario.
nlohmann::ordered_json scenario_to_json(const Scenario& s);

// The class a generator is built to satisfy, if it is a bounded one.
std::optional<ConnectivityClass> natural_class(const AdversaryParams& params);

} // namespace dynsync
