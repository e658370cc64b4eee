#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace hcconf {

inline constexpr double kPi = 3.14159265358979323846;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/**
 * Geometric ellipse in pixel coordinates.
 *
 * Always canonical: a >= b > 0, theta in [0, pi), and theta == 0 for circles.
 * theta is the direction of the semi-major axis measured from +x towards +y.
 */
class Ellipse {
 public:
  /// Builds a canonical ellipse; axes may be given in either order.
  /// Throws Error(InvalidArgument) on non-finite values or non-positive axes.
  static Ellipse make(double cx, double cy, double a, double b, double theta);

  double cx() const noexcept { return cx_; }
  double cy() const noexcept { return cy_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double theta() const noexcept { return theta_; }

  /// Rotated-frame quadratic form (x'/a)^2 + (y'/b)^2; equals 1 on the boundary.
  double quadratic_form(double x, double y) const noexcept;

  Ellipse translated(double dx, double dy) const;
  Ellipse scaled(double k) const;

  friend bool operator==(const Ellipse&, const Ellipse&) = default;

 private:
  Ellipse(double cx, double cy, double a, double b, double theta)
      : cx_(cx), cy_(cy), a_(a), b_(b), theta_(theta) {}

  double cx_, cy_, a_, b_, theta_;
};

/// Ellipse::quadratic_form with the trigonometry hoisted out, for per-pixel loops.
class QuadraticForm {
 public:
  explicit QuadraticForm(const Ellipse& e);

  double operator()(double x, double y) const noexcept {
    const double dx = x - cx_;
    const double dy = y - cy_;
    const double u = (dx * cos_ + dy * sin_) / a_;
    const double v = (-dx * sin_ + dy * cos_) / b_;
    return u * u + v * v;
  }

 private:
  double cx_, cy_, a_, b_, cos_, sin_;
};

/// Wraps an orientation into [0, pi).
double wrap_orientation(double theta) noexcept;

/// Signed difference of two orientations wrapped into (-pi/2, pi/2].
double orientation_delta(double theta, double reference) noexcept;

/// A x^2 + B xy + C y^2 + D x + E y + F = 0, unit-norm with A >= 0.
struct Conic {
  double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0;

  double discriminant() const noexcept { return 4.0 * A * C - B * B; }
  /// Copy scaled to unit Euclidean length with A >= 0 (or B, C ... if A == 0).
  Conic normalized() const;
  std::array<double, 6> coefficients() const noexcept { return {A, B, C, D, E, F}; }
};

Conic conic_of(const Ellipse& e);

/// Throws NotAnEllipse when 4AC - B^2 <= 0 or the conic has no real points,
/// Singular when the quadratic part is not invertible within 1e-12 relative.
Ellipse conic_to_geometric(const Conic& conic);

/**
 * Direct ellipse-specific least-squares fit (constraint 4AC - B^2 = 1) in
 * the partitioned 3x3 form. Points are centred and scaled to RMS radius
 * sqrt(2) before solving.
 *
 * Throws TooFewPoints for fewer than 5 points and DegenerateConfiguration
 * when the points are collinear/coincident or no eigenvector is elliptic.
 */
Ellipse fit_ellipse(std::span<const Point2> points);

/// K points at t_k = 2 pi k / K along the parametric boundary.
std::vector<Point2> ellipse_boundary_points(const Ellipse& e, std::size_t count);

/// pi a b s^2, in mm^2 for s in mm/pixel.
double ellipse_area(const Ellipse& e, double mm_per_pixel);

}  // namespace hcconf
