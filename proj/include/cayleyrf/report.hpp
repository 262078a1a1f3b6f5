#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "cayleyrf/exact.hpp"
#include "cayleyrf/histogram.hpp"
#include "cayleyrf/montecarlo.hpp"

namespace cayleyrf {

using Json = nlohmann::ordered_json;

// Full invocation state, embedded in every report so a run can be replayed
// from its output alone.
struct RunConfig {
    std::string command;
    int n = 0;
    int k = -1;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string out;
    std::string format = "json";
    int cap = 0;

    Json to_json() const {
        Json j;
        j["command"] = command;
        j["n"] = n;
        j["k"] = k;
        j["trials"] = trials;
        j["seed"] = seed;
        j["workers"] = workers;
        j["out"] = out;
        j["format"] = format;
        j["cap"] = cap;
        return j;
    }
};

// Timestamps go into one optional field so that everything else is
// byte-reproducible for a fixed config.
inline Json report_json(const ExperimentReport& r, const RunConfig* config = nullptr,
                        const std::string& timestamp = "") {
    Json j;
    j["experiment"] = r.experiment;
    j["n"] = r.n;
    j["k"] = r.k;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["workers"] = r.workers;
    Json observed = Json::object();
    for (const auto& [name, value] : r.observed) observed[name] = value;
    j["observed"] = observed;
    Json targets = Json::object();
    for (const auto& [name, value] : r.targets) targets[name] = value;
    j["targets"] = targets;
    Json tv = Json::object();
    for (const auto& [name, value] : r.tv) tv[name] = value;
    j["tv"] = tv;
    Json pass = Json::array();
    for (const auto& c : r.checks) {
        Json entry;
        entry["name"] = c.name;
        entry["passed"] = c.passed;
        entry["observed"] = c.observed;
        entry["target"] = c.target;
        entry["tolerance"] = c.tolerance;
        pass.push_back(entry);
    }
    j["pass"] = pass;
    j["all_passed"] = r.pass();
    if (config) j["config"] = config->to_json();
    if (!timestamp.empty()) j["timestamp"] = timestamp;
    return j;
}

// Exact law with probabilities as reduced rationals.
inline Json law_json(const std::string& statistic, int n, int k, const Histogram& law) {
    Json j;
    j["statistic"] = statistic;
    j["n"] = n;
    j["k"] = k;
    Json rows = Json::array();
    for (const auto& [value, count] : law.counts) {
        const std::uint64_t g = std::gcd(count, law.total);
        Json row;
        row["value"] = value;
        row["num"] = count / g;
        row["den"] = law.total / g;
        rows.push_back(row);
    }
    j["law"] = rows;
    return j;
}

inline Json count_json(const std::string& statistic, int n, const Json& params,
                       const BigInt& value) {
    Json j;
    j["statistic"] = statistic;
    j["n"] = n;
    if (!params.empty()) j["params"] = params;
    j["value"] = value.str();
    return j;
}

inline Json rational_json(const std::string& statistic, int n, const Json& params,
                          const BigRat& value) {
    Json j;
    j["statistic"] = statistic;
    j["n"] = n;
    if (!params.empty()) j["params"] = params;
    j["num"] = boost::multiprecision::numerator(value).str();
    j["den"] = boost::multiprecision::denominator(value).str();
    j["approx"] = value.convert_to<double>();
    return j;
}

}  // namespace cayleyrf
