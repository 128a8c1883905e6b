#pragma once

#include "clwe/distributions/batch.hpp"
#include "clwe/harness/rng.hpp"
#include "clwe/harness/stats.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace clwe::harness {

using BatchSource = std::function<distributions::SampleBatch(Rng&)>;
using Distinguisher = std::function<bool(const distributions::SampleBatch&)>;  // true = YES

struct TrialOutcome {
    std::size_t index = 0;
    std::uint64_t stream = 0;  // child stream of the master seed
    std::string label;         // "pos", "null", or empty for search experiments
    bool yes = false;
    bool success = false;
    nlohmann::json detail = nlohmann::json::object();
};

struct TrialReport {
    std::string experiment;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t master_seed = 0;
    std::vector<TrialOutcome> trials;
    std::size_t successes = 0;
    double success_rate = 0.0;
    stats::Interval success_ci;
    // Distinguishing experiments only.
    std::optional<double> advantage;
    stats::Interval yes_rate_pos;
    stats::Interval yes_rate_null;
    stats::Interval advantage_ci;  // from the two Wilson intervals
    double wall_seconds = 0.0;     // sidecar only
};

// Runs the distinguisher on `trials` fresh batches from each source. Trial i
// of the positive source uses stream 2i of rng's master seed, the null
// source stream 2i + 1. advantage = |Pr[YES | pos] - Pr[YES | null]|.
// trials >= 20.
TrialReport estimate_advantage(const Distinguisher& distinguisher, const BatchSource& source_pos,
                               const BatchSource& source_null, std::size_t trials, const Rng& rng);

// Fills successes, success_rate and the Wilson 95% interval from the trials.
void summarize_successes(TrialReport& report);

enum class ExperimentKind { noiseless, covariance, hybrid, rejection, figures };
std::string experiment_kind_name(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& s);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::covariance;
    std::size_t n = 2;
    double beta = 0.1;
    double gamma = 2.0;
    std::size_t samples = 1000;
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    unsigned precision_bits = 0;  // 0 = module default
    std::filesystem::path out;
    nlohmann::json options = nlohmann::json::object();  // delta, m, ...

    // Throws ConfigError naming the offending field.
    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

// Validates, then runs the experiment; every number in the report follows
// from the config and seed.
TrialReport run_experiment(const ExperimentConfig& cfg);

nlohmann::json to_json(const TrialReport& r);
// Writes <dir>/report.json, <dir>/trials.csv and the timing sidecar
// <dir>/report.timing.json (wall clock and UTC timestamps).
void write_report(const TrialReport& r, const std::filesystem::path& dir);

}  // namespace clwe::harness
