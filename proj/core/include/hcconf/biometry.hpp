#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hcconf/geometry.hpp"
#include "hcconf/raster.hpp"

namespace hcconf {

/// Isotropic pixel size in mm per pixel.
struct PixelScale {
  double mm_per_pixel = 1.0;

  explicit PixelScale(double s);
};

/// Contour points whose polar angle about the mask centroid falls in
/// [start, start + width) are dropped before fitting. Radians.
struct AngularSector {
  double start = 0.0;
  double width = 0.0;

  bool contains(double angle) const noexcept;
};

/**
 * N plausible segmentations of one case, optionally with their soft maps and
 * per-sample contour sectors to ignore at fit time.
 */
class SampleSet {
 public:
  /// Throws EmptyList for no masks, DimensionMismatch when grids or counts disagree.
  explicit SampleSet(std::vector<BinaryMask> masks, std::vector<SoftMask> soft = {},
                     std::vector<std::optional<AngularSector>> excluded = {});

  std::size_t size() const noexcept { return masks_.size(); }
  std::size_t width() const noexcept { return masks_.front().width(); }
  std::size_t height() const noexcept { return masks_.front().height(); }

  std::span<const BinaryMask> masks() const noexcept { return masks_; }
  std::span<const SoftMask> soft() const noexcept { return soft_; }
  bool has_soft() const noexcept { return !soft_.empty(); }
  const std::optional<AngularSector>& excluded(std::size_t i) const noexcept { return excluded_[i]; }

 private:
  std::vector<BinaryMask> masks_;
  std::vector<SoftMask> soft_;
  std::vector<std::optional<AngularSector>> excluded_;
};

/// Per-sample ellipse fits; a failed fit is nullopt.
struct SampleFits {
  std::vector<std::optional<Ellipse>> ellipses;

  std::vector<Ellipse> surviving() const;
  std::size_t n_failed() const noexcept;
};

/// Fits every sample independently. Failures are recorded, not thrown.
SampleFits fit_samples(const SampleSet& ss);

/// Fit of a single sample's contour, honouring its excluded sector.
Ellipse fit_sample(const BinaryMask& mask, const std::optional<AngularSector>& excluded);

struct Bounds {
  double lb_mm = 0.0;
  double ub_mm = 0.0;
  std::optional<Ellipse> inner;  // fit to the intersection
  std::optional<Ellipse> outer;  // fit to the union
  bool fallback_used = false;
  std::size_t union_pixels = 0;
  std::size_t intersection_pixels = 0;
};

struct HcMeasurement {
  double hc_mean_mm = 0.0;
  double hc_median_mm = 0.0;
  std::optional<Bounds> bounds;  // absent when fewer than two samples
  Ellipse ellipse_mean;
  Ellipse ellipse_median;
  std::size_t n_samples = 0;
  std::size_t n_failed = 0;
  SampleFits fits;
};

enum class AggregateMode { Mean, Median };

std::optional<AggregateMode> parse_aggregate_mode(std::string_view name) noexcept;
std::string_view to_string(AggregateMode mode) noexcept;

/// Ramanujan's second perimeter approximation, scaled to mm.
double hc_ramanujan(const Ellipse& e, PixelScale s);

/// Arc-length quadrature by adaptive Simpson bisection (max 30 levels).
/// Throws InvalidArgument unless rel_tol is in (0, 1e-3], NoConvergence at the cap.
double perimeter_quadrature(const Ellipse& e, PixelScale s, double rel_tol);

/// Component-wise mean/median of centre and axes; orientation on doubled angles.
/// Throws EmptyList.
Ellipse aggregate_ellipses(std::span<const Ellipse> ellipses, AggregateMode mode);

/**
 * Upper bound from the ellipse fitted to the union of masks, lower bound from
 * the ellipse fitted to their intersection. Falls back to min/max of the
 * per-sample HCs when the intersection is empty or either fit fails.
 *
 * Throws InsufficientSamples for N < 2 (or fewer than two surviving fits on
 * the fallback path) and AllFitsFailed when no sample fit survives.
 */
Bounds bounds_from_samples(const SampleSet& ss, PixelScale s);
Bounds bounds_from_samples(const SampleSet& ss, const SampleFits& fits, PixelScale s);

/// Fits, aggregates and bounds one case. Throws AllFitsFailed when no sample fits.
HcMeasurement measure_case(const SampleSet& ss, PixelScale s);

}  // namespace hcconf
