#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "hcconf/biometry.hpp"
#include "hcconf/manifest.hpp"
#include "hcconf/metrics.hpp"

namespace hcconf {

inline constexpr const char* kEvaluationColumns[] = {
    "case_id", "hc_pred_mm", "gt_hc_mm", "abs_diff_mm", "dice",      "hausdorff_mm",
    "lb_mm",   "ub_mm",      "in_range", "h1",          "h2",        "h3",
    "h4",      "n_samples",  "n_failed", "fallback_used", "error"};

inline constexpr const char* kSweepColumns[] = {
    "score",     "threshold", "n_rejected",        "n_accepted",
    "mean_abs_diff_mm", "mean_dice", "mean_hausdorff_mm", "pct_in_range"};

struct PipelineOptions {
  EvaluationOptions evaluation;
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
};

/// Loads NNN.pgm masks (and matching soft maps / sectors.csv) for one manifest row.
/// Throws IoError when the masks directory holds no PGM files.
SampleSet load_case(const ManifestRow& row);

/// measure_case -> variance scores -> evaluate_case. Never throws: failures
/// produce a row whose `error` holds the error tag and message.
EvaluationRow evaluate_sample_set(const std::string& case_id, const SampleSet& ss,
                                  const GroundTruth& gt, const EvaluationOptions& options);

/// Runs `job(i)` for i in [0, count) on up to `threads` workers; results are
/// stored by index so scheduling never changes the output.
std::vector<EvaluationRow> run_indexed(std::size_t count, std::size_t threads,
                                       const std::function<EvaluationRow(std::size_t)>& job);

/// Evaluates every manifest case; per-case failures are recorded, not thrown.
std::vector<EvaluationRow> run_evaluation(const std::vector<ManifestRow>& manifest,
                                          const PipelineOptions& options);

std::string format_evaluation_csv(const std::vector<EvaluationRow>& rows);
void write_evaluation_csv(const std::vector<EvaluationRow>& rows, const std::filesystem::path& path);
/// Throws IoError, MissingColumn or BadNumber.
std::vector<EvaluationRow> read_evaluation_csv(const std::filesystem::path& path);

/// Sweeps over the successful rows of an evaluation CSV.
/// Throws UnknownScore when the score column is absent or empty on any used row.
std::vector<SweepRow> run_sweep(const std::filesystem::path& evaluation_csv, ScoreName score,
                                std::size_t steps);

std::string format_sweep_csv(const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// Human-readable mean +- std block.
std::string format_summary(const EvaluationSummary& summary);

}  // namespace hcconf
