#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hcconf/biometry.hpp"
#include "hcconf/geometry.hpp"
#include "hcconf/raster.hpp"

namespace hcconf {

/// Raw per-case variance scores; larger always means less agreement.
struct VarianceScores {
  double h1 = 0.0;            // summed parameter variances (px^2 and rad^2 mixed)
  double h2 = 0.0;            // ring area, mm^2
  double h3 = 0.0;            // mask classification entropy, nats
  std::optional<double> h4;   // softmax confidence entropy, nats
};

/// Population variances of cx, cy, a, b plus the variance of orientation
/// deviations wrapped around the circular mean. Throws InsufficientSamples.
double score_h1(std::span<const Ellipse> ellipses);

/// Ring area between the union and intersection ellipses, clamped at 0.
/// Fallback bounds use the pixel-count difference instead.
double score_h2(const Bounds& bounds, PixelScale s);

/// -sum p ln p over pixels of the foreground frequency p.
/// Throws InsufficientSamples (< 2 masks) or DimensionMismatch.
double score_h3(std::span<const BinaryMask> masks);

/// -sum c ln c where c is the per-pixel mean of max(p_f, 1 - p_f).
/// Throws EmptyList or DimensionMismatch.
double score_h4(std::span<const SoftMask> softmaps);

/// All applicable scores for one measured case. Throws InsufficientSamples
/// when fewer than two fits survive or bounds are absent.
VarianceScores compute_scores(const SampleSet& ss, const HcMeasurement& m, PixelScale s);

struct NormalizationRecord {
  double min = 0.0;
  double max = 0.0;

  /// (v - min) / (max - min) clamped to [0, 1]; 0 for a degenerate range.
  double apply(double v) const noexcept;
};

struct Normalized {
  std::vector<double> values;
  NormalizationRecord record;
};

/// Cohort min-max scaling. Throws EmptyList.
Normalized normalize_scores(std::span<const double> values);

}  // namespace hcconf
