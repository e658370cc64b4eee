#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcconf/biometry.hpp"
#include "hcconf/geometry.hpp"
#include "hcconf/raster.hpp"
#include "hcconf/uncertainty.hpp"

namespace hcconf {

struct GroundTruth {
  Ellipse ellipse;
  double hc_mm;
  PixelScale scale;

  /// HC derived from the ellipse and scale.
  static GroundTruth from_ellipse(const Ellipse& e, PixelScale s);
};

struct EvaluationRow {
  std::string case_id;
  std::optional<double> hc_pred_mm;
  std::optional<double> gt_hc_mm;
  std::optional<double> abs_diff_mm;
  std::optional<double> dice;
  std::optional<double> hausdorff_mm;
  std::optional<double> lb_mm;
  std::optional<double> ub_mm;
  std::optional<bool> in_range;
  std::optional<double> h1, h2, h3, h4;
  std::size_t n_samples = 0;
  std::size_t n_failed = 0;
  bool fallback_used = false;
  std::string error;  // empty on success

  bool ok() const noexcept { return error.empty(); }
};

enum class ScoreName { H1, H2, H3, H4 };

std::optional<ScoreName> parse_score_name(std::string_view name) noexcept;
std::string_view to_string(ScoreName name) noexcept;
std::optional<double> score_of(const EvaluationRow& row, ScoreName name) noexcept;

struct SweepRow {
  ScoreName score = ScoreName::H1;
  double threshold = 0.0;
  std::size_t n_rejected = 0;
  std::size_t n_accepted = 0;
  std::optional<double> mean_abs_diff_mm;
  std::optional<double> mean_dice;
  std::optional<double> mean_hausdorff_mm;
  std::optional<double> pct_in_range;
};

inline constexpr std::size_t kDefaultHausdorffSamples = 360;
inline constexpr std::size_t kDefaultSweepSteps = 101;

/// 2|A n B| / (|A| + |B|); 1 when both are empty. Throws DimensionMismatch.
double dice(const BinaryMask& a, const BinaryMask& b);

/// Symmetric discrete Hausdorff distance over `samples` boundary points per
/// outline, in mm. Throws InvalidArgument for samples < 16.
double hausdorff(const Ellipse& e1, const Ellipse& e2, PixelScale s,
                 std::size_t samples = kDefaultHausdorffSamples);

struct EvaluationOptions {
  AggregateMode aggregate = AggregateMode::Median;
  std::size_t hausdorff_samples = kDefaultHausdorffSamples;
};

/// Per-case metrics against ground truth. DICE is computed between the
/// rasterised predicted and ground-truth ellipses on a width x height grid.
EvaluationRow evaluate_case(std::string case_id, const HcMeasurement& m, const GroundTruth& gt,
                            const std::optional<VarianceScores>& scores, std::size_t width,
                            std::size_t height, const EvaluationOptions& options = {});

/// Accept/reject sweep over thresholds k / (steps - 1) of the cohort-normalised
/// score; rows with normalised score > t are rejected.
/// Throws EmptyCohort, UnknownScore (score missing on a row) or InvalidArgument (steps < 2).
std::vector<SweepRow> sweep(std::span<const EvaluationRow> rows, ScoreName score,
                            std::size_t steps = kDefaultSweepSteps);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
  std::size_t count = 0;
};

struct EvaluationSummary {
  std::size_t n_cases = 0;
  std::size_t n_failed = 0;
  std::optional<MeanStd> abs_diff_mm;
  std::optional<MeanStd> dice;
  std::optional<MeanStd> hausdorff_mm;
  std::optional<double> pct_in_range;
};

/// Mean +- population std over successful rows.
EvaluationSummary summarize(std::span<const EvaluationRow> rows);

}  // namespace hcconf
