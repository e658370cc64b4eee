#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "hcconf/biometry.hpp"
#include "hcconf/metrics.hpp"
#include "hcconf/raster.hpp"
#include "hcconf/rng.hpp"

namespace hcconf {

inline constexpr std::uint64_t kDefaultSeed = 2020;

/// Synthetic cohort parameters. Lengths in pixels, angles in radians unless noted.
struct SynthConfig {
  std::size_t width = 320;
  std::size_t height = 384;
  double scale_min_mm = 0.052;
  double scale_max_mm = 0.326;
  double a_min = 60.0;
  double a_max = 140.0;
  double ratio_min = 1.0;
  double ratio_max = 1.6;
  /// Ground-truth ellipses keep at least this many pixels from the grid edge.
  double edge_margin = 8.0;

  double sigma_center = 8.0;
  double sigma_axes = 8.0;
  double sigma_theta = 0.05;
  /// Per-case noise multiplier, drawn log-uniformly.
  double multiplier_min = 0.25;
  double multiplier_max = 4.0;

  /// Width in degrees of the contour sector each sample loses before fitting; 0 disables.
  double sector_dropout_deg = 0.0;
  /// Soft-map sharpness; soft maps are generated only when set.
  std::optional<double> tau;

  std::uint64_t seed = kDefaultSeed;

  /// Throws InvalidArgument on empty ranges, negative sigmas or a grid that
  /// cannot hold the largest ground-truth ellipse.
  void validate() const;
};

struct SynthCase {
  std::string case_id;
  GroundTruth gt;
  double sigma_multiplier;
};

struct CaseRecord {
  std::string case_id;
  GroundTruth gt;
  double sigma_multiplier;
  SampleSet samples;
};

std::string case_id_for(std::size_t index);

/// Ground truth and noise multiplier of case `index`, a pure function of (seed, index, cfg).
SynthCase gen_case(std::uint64_t seed, std::size_t index, const SynthConfig& cfg);

/// N perturbed, rasterised samples of the ground truth.
SampleSet sample_predictions(const GroundTruth& gt, double sigma_multiplier,
                             const SynthConfig& cfg, std::size_t n, Rng& rng);

/// p_f = logistic((1 - Q) / tau); exactly 0.5 on the analytic boundary.
SoftMask soft_map(const Ellipse& e, double tau, std::size_t width, std::size_t height);

/// gen_case plus sample_predictions on the case's sample substream.
CaseRecord make_case(const SynthConfig& cfg, std::size_t index, std::size_t n_samples);

/**
 * Writes M cases of N samples under out_dir:
 *   manifest.csv
 *   case_XXXX/masks/NNN.pgm   (+ sectors.csv when sector dropout is on)
 *   case_XXXX/soft/NNN.pgm    (when tau is set)
 * Returns the manifest path. Throws IoError.
 */
std::filesystem::path gen_dataset(const SynthConfig& cfg, std::size_t n_cases,
                                  std::size_t n_samples, const std::filesystem::path& out_dir);

}  // namespace hcconf
