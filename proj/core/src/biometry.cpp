#include "hcconf/biometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "hcconf/error.hpp"

namespace hcconf {

namespace {

constexpr int kMaxQuadratureLevels = 30;

double median_of(std::vector<double> v) {
  const auto n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Circular mean of pi-periodic orientations via doubled angles.
double mean_orientation(std::span<const Ellipse> ellipses) {
  double sx = 0.0, sy = 0.0;
  for (const auto& e : ellipses) {
    sx += std::cos(2.0 * e.theta());
    sy += std::sin(2.0 * e.theta());
  }
  return wrap_orientation(0.5 * std::atan2(sy, sx));
}

struct SimpsonPanel {
  double lo, mid, hi;
  double f_lo, f_mid, f_hi;
  double whole;
};

double adaptive_simpson(const std::function<double(double)>& f, const SimpsonPanel& p,
                        double eps, int level) {
  const double left_mid = 0.5 * (p.lo + p.mid);
  const double right_mid = 0.5 * (p.mid + p.hi);
  const double f_lm = f(left_mid);
  const double f_rm = f(right_mid);
  const double left = (p.mid - p.lo) / 6.0 * (p.f_lo + 4.0 * f_lm + p.f_mid);
  const double right = (p.hi - p.mid) / 6.0 * (p.f_mid + 4.0 * f_rm + p.f_hi);
  const double delta = left + right - p.whole;
  if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  if (level >= kMaxQuadratureLevels) {
    throw Error(ErrorCode::NoConvergence, "perimeter quadrature exceeded refinement cap");
  }
  return adaptive_simpson(f, {p.lo, left_mid, p.mid, p.f_lo, f_lm, p.f_mid, left}, eps / 2.0,
                          level + 1) +
         adaptive_simpson(f, {p.mid, right_mid, p.hi, p.f_mid, f_rm, p.f_hi, right}, eps / 2.0,
                          level + 1);
}

}  // namespace

PixelScale::PixelScale(double s) : mm_per_pixel(s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorCode::InvalidArgument, "pixel size must be positive and finite");
  }
}

bool AngularSector::contains(double angle) const noexcept {
  const double two_pi = 2.0 * kPi;
  double d = std::fmod(angle - start, two_pi);
  if (d < 0.0) d += two_pi;
  return d < width;
}

SampleSet::SampleSet(std::vector<BinaryMask> masks, std::vector<SoftMask> soft,
                     std::vector<std::optional<AngularSector>> excluded)
    : masks_(std::move(masks)), soft_(std::move(soft)), excluded_(std::move(excluded)) {
  if (masks_.empty()) throw Error(ErrorCode::EmptyList, "sample set needs at least one mask");
  const auto& first = masks_.front();
  for (const auto& m : masks_) {
    if (!m.same_shape(first)) throw Error(ErrorCode::DimensionMismatch, "sample masks differ in size");
  }
  if (!soft_.empty()) {
    if (soft_.size() != masks_.size()) {
      throw Error(ErrorCode::DimensionMismatch, "soft map count differs from mask count");
    }
    for (const auto& s : soft_) {
      if (s.width() != first.width() || s.height() != first.height()) {
        throw Error(ErrorCode::DimensionMismatch, "soft map size differs from mask size");
      }
    }
  }
  if (excluded_.empty()) excluded_.resize(masks_.size());
  if (excluded_.size() != masks_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "excluded sector count differs from mask count");
  }
}

std::vector<Ellipse> SampleFits::surviving() const {
  std::vector<Ellipse> out;
  for (const auto& e : ellipses) {
    if (e) out.push_back(*e);
  }
  return out;
}

std::size_t SampleFits::n_failed() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(ellipses.begin(), ellipses.end(), [](const auto& e) { return !e; }));
}

Ellipse fit_sample(const BinaryMask& mask, const std::optional<AngularSector>& excluded) {
  auto contour = extract_contour(mask);
  if (excluded && excluded->width > 0.0) {
    double mx = 0.0, my = 0.0;
    std::size_t n = 0;
    for (std::size_t row = 0; row < mask.height(); ++row) {
      for (std::size_t col = 0; col < mask.width(); ++col) {
        if (!mask.foreground(col, row)) continue;
        mx += static_cast<double>(col);
        my += static_cast<double>(row);
        ++n;
      }
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    std::erase_if(contour, [&](const Point2& p) {
      return excluded->contains(std::atan2(p.y - my, p.x - mx));
    });
  }
  return fit_ellipse(contour);
}

SampleFits fit_samples(const SampleSet& ss) {
  SampleFits fits;
  fits.ellipses.reserve(ss.size());
  for (std::size_t i = 0; i < ss.size(); ++i) {
    try {
      fits.ellipses.emplace_back(fit_sample(ss.masks()[i], ss.excluded(i)));
    } catch (const Error&) {
      fits.ellipses.emplace_back(std::nullopt);
    }
  }
  return fits;
}

std::optional<AggregateMode> parse_aggregate_mode(std::string_view name) noexcept {
  if (name == "mean") return AggregateMode::Mean;
  if (name == "median") return AggregateMode::Median;
  return std::nullopt;
}

std::string_view to_string(AggregateMode mode) noexcept {
  return mode == AggregateMode::Mean ? "mean" : "median";
}

double hc_ramanujan(const Ellipse& e, PixelScale s) {
  const double sum = e.a() + e.b();
  const double diff = e.a() - e.b();
  const double h = (diff * diff) / (sum * sum);
  return kPi * sum * (1.0 + 3.0 * h / (10.0 + std::sqrt(4.0 - 3.0 * h))) * s.mm_per_pixel;
}

double perimeter_quadrature(const Ellipse& e, PixelScale s, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) {
    throw Error(ErrorCode::InvalidArgument, "rel_tol must lie in (0, 1e-3]");
  }
  const double a = e.a();
  const double b = e.b();
  const std::function<double(double)> speed = [a, b](double t) {
    const double st = std::sin(t);
    const double ct = std::cos(t);
    return std::sqrt(a * a * st * st + b * b * ct * ct);
  };
  // One quadrant; the arc length is symmetric in all four.
  const double lo = 0.0;
  const double hi = kPi / 2;
  const double mid = 0.5 * (lo + hi);
  const double f_lo = speed(lo);
  const double f_mid = speed(mid);
  const double f_hi = speed(hi);
  const double whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
  const double quarter =
      adaptive_simpson(speed, {lo, mid, hi, f_lo, f_mid, f_hi, whole}, rel_tol * whole, 0);
  return 4.0 * quarter * s.mm_per_pixel;
}

Ellipse aggregate_ellipses(std::span<const Ellipse> ellipses, AggregateMode mode) {
  if (ellipses.empty()) throw Error(ErrorCode::EmptyList, "no ellipses to aggregate");
  if (ellipses.size() == 1) return ellipses.front();

  std::vector<double> cx, cy, a, b, dtheta;
  const double theta_bar = mean_orientation(ellipses);
  for (const auto& e : ellipses) {
    cx.push_back(e.cx());
    cy.push_back(e.cy());
    a.push_back(e.a());
    b.push_back(e.b());
    dtheta.push_back(orientation_delta(e.theta(), theta_bar));
  }
  if (mode == AggregateMode::Mean) {
    return Ellipse::make(mean_of(cx), mean_of(cy), mean_of(a), mean_of(b), theta_bar);
  }
  return Ellipse::make(median_of(cx), median_of(cy), median_of(a), median_of(b),
                       theta_bar + median_of(dtheta));
}

Bounds bounds_from_samples(const SampleSet& ss, PixelScale s) {
  if (ss.size() < 2) {
    throw Error(ErrorCode::InsufficientSamples, "bounds need at least 2 samples");
  }
  return bounds_from_samples(ss, fit_samples(ss), s);
}

Bounds bounds_from_samples(const SampleSet& ss, const SampleFits& fits, PixelScale s) {
  if (ss.size() < 2) {
    throw Error(ErrorCode::InsufficientSamples, "bounds need at least 2 samples");
  }
  const BinaryMask uni = mask_union(ss.masks());
  const BinaryMask inter = mask_intersection(ss.masks());

  Bounds out;
  out.union_pixels = uni.count();
  out.intersection_pixels = inter.count();
  try {
    out.outer = fit_ellipse(extract_contour(uni));
    out.inner = fit_ellipse(extract_contour(inter));
    const double hc_outer = hc_ramanujan(*out.outer, s);
    const double hc_inner = hc_ramanujan(*out.inner, s);
    out.lb_mm = std::min(hc_inner, hc_outer);
    out.ub_mm = std::max(hc_inner, hc_outer);
    return out;
  } catch (const Error&) {
    // Empty intersection or an unfittable union/intersection contour.
  }

  const auto survivors = fits.surviving();
  if (survivors.empty()) throw Error(ErrorCode::AllFitsFailed, "no sample could be fitted");
  if (survivors.size() < 2) {
    throw Error(ErrorCode::InsufficientSamples, "fallback bounds need 2 fitted samples");
  }
  out.fallback_used = true;
  out.lb_mm = std::numeric_limits<double>::infinity();
  out.ub_mm = -std::numeric_limits<double>::infinity();
  for (const auto& e : survivors) {
    const double hc = hc_ramanujan(e, s);
    out.lb_mm = std::min(out.lb_mm, hc);
    out.ub_mm = std::max(out.ub_mm, hc);
  }
  return out;
}

HcMeasurement measure_case(const SampleSet& ss, PixelScale s) {
  SampleFits fits = fit_samples(ss);
  const auto survivors = fits.surviving();
  if (survivors.empty()) {
    throw Error(ErrorCode::AllFitsFailed,
                "all " + std::to_string(ss.size()) + " sample fits failed");
  }
  const Ellipse mean = aggregate_ellipses(survivors, AggregateMode::Mean);
  const Ellipse median = aggregate_ellipses(survivors, AggregateMode::Median);

  std::optional<Bounds> bounds;
  if (ss.size() >= 2) {
    try {
      bounds = bounds_from_samples(ss, fits, s);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::InsufficientSamples) throw;
    }
  }
  const std::size_t n_failed = fits.n_failed();
  return HcMeasurement{
      .hc_mean_mm = hc_ramanujan(mean, s),
      .hc_median_mm = hc_ramanujan(median, s),
      .bounds = std::move(bounds),
      .ellipse_mean = mean,
      .ellipse_median = median,
      .n_samples = ss.size(),
      .n_failed = n_failed,
      .fits = std::move(fits),
  };
}

}  // namespace hcconf
