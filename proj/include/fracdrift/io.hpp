#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include "fracdrift/experiment.hpp"

namespace fracdrift {

/// CSV with columns t, X, BH (17 significant digits, LF line endings).
void write_path_csv(const std::filesystem::path& file, const SampledPath& path, const SampledPath& noise);

/// Reads a data CSV with header and at least columns t, X; the time column
/// must match the expected grid. Parse errors carry the row number.
SampledPath read_data_csv(const std::filesystem::path& file, const TimeGrid& grid);

std::string estimation_to_json(const EstimationResult& res);
std::string fisher_to_json(const FisherMatrix& fm);
void write_fisher_csv(const std::filesystem::path& dir, const FisherMatrix& fm);
std::string study_report_to_json(const StudyReport& report);
std::string volterra_to_json(const VolterraCheckResult& res);

void write_replicates_csv(const std::filesystem::path& file, const EpsilonBlock& block);
void write_study_summary_csv(const std::filesystem::path& file, const StudyReport& report);
/// Histogram of normalized errors per coordinate with the N(0, (Gamma^{-1})_kk)
/// density at bin centers (plot-ready).
void write_histogram_csv(const std::filesystem::path& file, const StudyReport& report);
void write_study_summary_text(const std::filesystem::path& file, const StudyReport& report);

void write_text_file(const std::filesystem::path& file, const std::string& content);

/// Full-precision decimal rendering used by every CSV writer.
std::string format_double(double v);

}  // namespace fracdrift
