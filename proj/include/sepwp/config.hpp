#pragma once

// JSON problem configs, sequence files and the sweep CSV format.

#include "sepwp/analysis.hpp"
#include "sepwp/problem.hpp"
#include "sepwp/sequences.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepwp::cli {

/// Invalid document; `path` names the offending key ("plan.h_inner", "C[0]").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message);
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct ProblemConfig {
    problem::PerturbedSEP instance;
    analysis::SamplingPlan plan;
    std::size_t kuratowski_k = 2;
    std::optional<analysis::Thresholds> thresholds;

    analysis::Thresholds effective_thresholds() const
    {
        return thresholds.value_or(analysis::Thresholds::defaults(plan));
    }
};

ProblemConfig parse_config(const nlohmann::json& doc);
ProblemConfig load_config(const std::filesystem::path& path);

std::vector<sequences::SequenceStep> parse_sequence(const nlohmann::json& doc);
std::vector<sequences::SequenceStep> load_sequence(const std::filesystem::path& path);
nlohmann::json sequence_to_json(const std::vector<sequences::SequenceStep>& steps);

/// "%.9g"; empty string for absent values.
std::string format_number(double v);

inline constexpr const char* kSweepCsvHeader = "eps,count,diam,hausdorff_to_floor,mu_hat,wallclock_ms";

/// One row per record in record order, LF endings. wallclock_ms is written
/// as 0 unless include_timing is set, so the file is reproducible.
std::string sweep_csv(const analysis::SweepResult& result, bool include_timing);

} // namespace sepwp::cli
