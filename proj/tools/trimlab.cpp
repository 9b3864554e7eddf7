#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "trimlab/harness.hpp"

namespace {

using namespace trimlab;

struct CliOverrides {
    std::string config_path;
    std::string system;
    std::string profile;
    double beta = -1.0;
    double site = -2.0;
    std::string aperture;
    std::string trim;
    std::string checkpoints;
    long long replicas = -1;
    long long seed = -1;
    std::string out_dir;
    double horizon_R = -1.0;
    long long ref_samples = -1;
    double tolerance = -2.0;
    unsigned workers = 0;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
    cmd->add_option("--config", o.config_path, "key = value config file");
    cmd->add_option("--system", o.system, "iid | doubling | catmap | gauss");
    cmd->add_option("--profile", o.profile, "radial | oscillatory | digit");
    cmd->add_option("--beta", o.beta, "singularity order beta > 0");
    cmd->add_option("--site", o.site, "singular site in [0,1); omit for the system default");
    cmd->add_option("--aperture", o.aperture, "full | half | auto");
    cmd->add_option("--trim", o.trim, "light:K | inter:pow:gamma | inter:polylog:p");
    cmd->add_option("--checkpoints", o.checkpoints, "start:end:xM geometric, or a comma list");
    cmd->add_option("--replicas", o.replicas, "number of independent orbits");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--horizon", o.horizon_R, "reference-law truncation horizon R");
    cmd->add_option("--ref-samples", o.ref_samples, "reference-law sample count");
    cmd->add_option("--tolerance", o.tolerance, "override the experiment pass threshold");
    cmd->add_option("--workers", o.workers, "thread count (wall time only, not results)");
}

ExperimentConfig build_config(const std::string& experiment, const CliOverrides& o) {
    ExperimentConfig cfg;
    if (!o.config_path.empty()) cfg = parse_config(o.config_path);
    cfg.experiment = experiment;
    if (!o.system.empty()) cfg.system = system_from_name(o.system);
    if (!o.profile.empty()) cfg.profile = profile_from_name(o.profile);
    if (o.beta > 0.0) cfg.beta = o.beta;
    if (o.site > -1.5) cfg.site = o.site;
    if (!o.aperture.empty()) cfg.aperture = o.aperture;
    if (!o.trim.empty()) cfg.trim = TrimSpec::parse(o.trim);
    if (!o.checkpoints.empty()) cfg.checkpoints = parse_checkpoints(o.checkpoints);
    if (o.replicas >= 0) cfg.replicas = static_cast<std::uint64_t>(o.replicas);
    if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.horizon_R > 0.0) cfg.horizon_R = o.horizon_R;
    if (o.ref_samples >= 0) cfg.ref_samples = static_cast<std::uint64_t>(o.ref_samples);
    if (o.tolerance > -1.5) cfg.tolerance = o.tolerance;
    return cfg;
}

void print_summary(const ExperimentResult& result) {
    for (const auto& row : result.summary) {
        std::cout << row.label;
        if (row.N) std::cout << " N=" << row.N << " k=" << row.k;
        if (row.target != 0.0) std::cout << " target=" << row.target;
        if (row.label == "checkpoint")
            std::cout << " median=" << row.median << " [" << row.q1 << ", " << row.q3 << "]";
        std::cout << " stat=" << row.stat << " thr=" << row.threshold
                  << (row.pass ? " PASS" : " FAIL") << "\n";
    }
    if (result.discards)
        std::cout << "discarded replicas: " << result.discards << "\n";
    std::cout << (result.pass ? "RESULT: pass" : "RESULT: fail") << "\n";
}

void write_ppp_csv(const ExperimentResult& result, const std::string& dir) {
    // single-column CSV of reference-law draws plus a JSON metadata file
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream out(fs::path(dir) / "samples.csv", std::ios::binary);
    out << "sample\n";
    out << std::setprecision(17);
    for (const auto& line : result.jsonl) {
        auto rec = nlohmann::json::parse(line);
        out << rec["sample"].get<double>() << "\n";
    }
    std::ofstream meta(fs::path(dir) / "metadata.json", std::ios::binary);
    meta << result.metadata_json << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trimlab: trimmed Birkhoff sums over exponentially mixing systems"};
    app.require_subcommand(1);

    const char* experiments[] = {"slln-light",  "slln-inter", "slln-inter-d",
                                 "weak-law",    "dlt-light",  "dlt-inter",
                                 "near-equivalence", "poisson-returns", "ppp-limit"};
    CliOverrides o;
    for (const char* name : experiments) add_common_flags(app.add_subcommand(name), o);

    CLI11_PARSE(app, argc, argv);
    std::string experiment = app.get_subcommands().front()->get_name();

    try {
        ExperimentConfig cfg = build_config(experiment, o);
        ExperimentResult result = run_experiment(cfg, o.workers);
        if (!cfg.out_dir.empty()) {
            if (experiment == "ppp-limit")
                write_ppp_csv(result, cfg.out_dir);
            else
                write_results(result, cfg.out_dir);
        }
        print_summary(result);
        return result.pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
