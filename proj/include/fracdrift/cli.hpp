#pragma once
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fracdrift/experiment.hpp"

namespace fracdrift {

/// On-disk configuration: plain-text key tree, `section.key = value...` per
/// line, `#` comments. Schema-validated on load; unknown keys are rejected
/// with their line number.
struct RunConfig {
    BuiltinModelKind model_kind = BuiltinModelKind::constant;
    std::vector<double> theta0;
    std::vector<double> box_lower, box_upper;
    double H = 0.0;
    std::vector<double> epsilons;
    double T = 0.0;
    std::size_t n = 0;
    std::size_t M = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double x0 = 1.0;
    int threads = 0;
    bool diag_contrast = false;
    bool diag_hessian = false;
    std::vector<double> contrast_theta;
    double hessian_step = 1e-3;
    OptimizerOptions optimizer;
    std::string out_dir = "out";
    bool fmt_json = true;
    bool fmt_csv = true;
};

RunConfig load_config(const std::filesystem::path& file);

/// Subcommands; each returns the process exit code (0 ok, 1 validation
/// error, 2 numerical failure) and writes its files under out_dir.
int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir);
int cmd_estimate(const RunConfig& cfg, const std::filesystem::path& data, const std::filesystem::path& out_dir);
int cmd_fisher(const RunConfig& cfg, const std::filesystem::path& out_dir);
int cmd_study(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Shared exception-to-exit-code wrapper used by main and the tests.
int run_command(const std::string& command, const std::filesystem::path& config_path,
                const std::optional<std::filesystem::path>& data_path,
                const std::optional<std::filesystem::path>& out_dir_override,
                const std::optional<std::uint64_t>& seed_override);

StudyConfig study_config_from(const RunConfig& cfg);

}  // namespace fracdrift
