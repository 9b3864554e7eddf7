#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trimlab/dynsys.hpp"
#include "trimlab/limits.hpp"
#include "trimlab/observables.hpp"
#include "trimlab/stats.hpp"
#include "trimlab/trimming.hpp"

namespace trimlab {

struct ExperimentConfig {
    std::string experiment = "slln-light";
    SystemId system = SystemId::IIDUniform;
    ProfileKind profile = ProfileKind::Radial;
    double beta = 1.0;
    double site = -1.0; // < 0 means "system default"
    std::string aperture = "auto"; // full | half | auto
    double amplitude = 1.0;
    TrimSpec trim{};
    std::vector<std::uint64_t> checkpoints{100000, 1000000};
    std::uint64_t replicas = 1;
    std::uint64_t seed = 1;
    std::string out_dir;

    // experiment-specific
    std::vector<double> t_values{0.5, 1.0, 2.0}; // poisson-returns
    double horizon_R = 1e4;                      // dlt-light / ppp-limit
    std::uint64_t ref_samples = 100000;          // reference-law draws
    double tolerance = -1.0;                     // < 0 means experiment default
    double weak_law_epsilon = 0.2;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
std::string write_config(const ExperimentConfig& cfg);

struct SummaryRow {
    std::string label;
    std::uint64_t N = 0;
    std::uint64_t k = 0;
    double target = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double stat = 0.0;      // the pass/fail statistic for this row
    double threshold = 0.0;
    bool pass = true;
};

struct ExperimentResult {
    std::vector<std::string> jsonl; // one record per replica per checkpoint
    std::vector<SummaryRow> summary;
    std::string metadata_json;
    std::uint64_t discards = 0;
    bool pass = true;
};

// Resolved experiment inputs (defaults applied, site validated).
struct ResolvedSetup {
    SystemModel sys;
    Observable obs;
    ExperimentConfig cfg;
};

ResolvedSetup resolve_setup(const ExperimentConfig& cfg);

ExperimentResult run_experiment(const ExperimentConfig& cfg, unsigned workers = 0);

// Writes replicas.jsonl, summary.csv and metadata.json under dir.
void write_results(const ExperimentResult& result, const std::string& dir);

std::vector<std::uint64_t> parse_checkpoints(const std::string& spec);

} // namespace trimlab
