#include "hcconf/uncertainty.hpp"

#include <algorithm>
#include <cmath>

#include "hcconf/error.hpp"

namespace hcconf {

namespace {

// Shifted by the first value so identical inputs give exactly 0.
double population_variance(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  const double shift = v.front();
  double mean = 0.0;
  for (double x : v) mean += x - shift;
  mean /= n;
  double acc = 0.0;
  for (double x : v) acc += (x - shift - mean) * (x - shift - mean);
  return acc / n;
}

double neg_p_log_p(double p) noexcept { return p > 0.0 ? -p * std::log(p) : 0.0; }

}  // namespace

double score_h1(std::span<const Ellipse> ellipses) {
  if (ellipses.size() < 2) {
    throw Error(ErrorCode::InsufficientSamples, "h1 needs at least 2 ellipses");
  }
  double sx = 0.0, sy = 0.0;
  for (const auto& e : ellipses) {
    sx += std::cos(2.0 * e.theta());
    sy += std::sin(2.0 * e.theta());
  }
  const double theta_bar = 0.5 * std::atan2(sy, sx);

  std::vector<double> cx, cy, a, b, dtheta;
  for (const auto& e : ellipses) {
    cx.push_back(e.cx());
    cy.push_back(e.cy());
    a.push_back(e.a());
    b.push_back(e.b());
    dtheta.push_back(orientation_delta(e.theta(), theta_bar));
  }
  return population_variance(cx) + population_variance(cy) + population_variance(a) +
         population_variance(b) + population_variance(dtheta);
}

double score_h2(const Bounds& bounds, PixelScale s) {
  if (bounds.fallback_used || !bounds.inner || !bounds.outer) {
    const double diff = static_cast<double>(bounds.union_pixels) -
                        static_cast<double>(bounds.intersection_pixels);
    return std::max(0.0, diff) * s.mm_per_pixel * s.mm_per_pixel;
  }
  const double ring = ellipse_area(*bounds.outer, s.mm_per_pixel) -
                      ellipse_area(*bounds.inner, s.mm_per_pixel);
  return std::max(0.0, ring);
}

double score_h3(std::span<const BinaryMask> masks) {
  if (masks.size() < 2) throw Error(ErrorCode::InsufficientSamples, "h3 needs at least 2 masks");
  const auto& first = masks.front();
  std::vector<unsigned> votes(first.size(), 0);
  for (const auto& m : masks) {
    if (!m.same_shape(first)) throw Error(ErrorCode::DimensionMismatch, "mask dimensions differ");
    auto d = m.data();
    for (std::size_t k = 0; k < d.size(); ++k) votes[k] += d[k];
  }
  const double n = static_cast<double>(masks.size());
  double h = 0.0;
  for (unsigned v : votes) h += neg_p_log_p(static_cast<double>(v) / n);
  return h;
}

double score_h4(std::span<const SoftMask> softmaps) {
  if (softmaps.empty()) throw Error(ErrorCode::EmptyList, "h4 needs at least 1 soft map");
  const auto& first = softmaps.front();
  std::vector<double> conf(first.size(), 0.0);
  for (const auto& m : softmaps) {
    if (!m.same_shape(first)) throw Error(ErrorCode::DimensionMismatch, "soft map dimensions differ");
    auto d = m.data();
    for (std::size_t k = 0; k < d.size(); ++k) conf[k] += std::max(d[k], 1.0 - d[k]);
  }
  const double n = static_cast<double>(softmaps.size());
  double h = 0.0;
  for (double c : conf) h += neg_p_log_p(c / n);
  return h;
}

VarianceScores compute_scores(const SampleSet& ss, const HcMeasurement& m, PixelScale s) {
  if (!m.bounds) {
    throw Error(ErrorCode::InsufficientSamples, "variance scores need bounds (N >= 2)");
  }
  VarianceScores out;
  out.h1 = score_h1(m.fits.surviving());
  out.h2 = score_h2(*m.bounds, s);
  out.h3 = score_h3(ss.masks());
  if (ss.has_soft()) out.h4 = score_h4(ss.soft());
  return out;
}

double NormalizationRecord::apply(double v) const noexcept {
  if (!(max > min)) return 0.0;
  return std::clamp((v - min) / (max - min), 0.0, 1.0);
}

Normalized normalize_scores(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyList, "no scores to normalize");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  Normalized out{{}, {*lo, *hi}};
  out.values.reserve(values.size());
  for (double v : values) out.values.push_back(out.record.apply(v));
  return out;
}

}  // namespace hcconf
