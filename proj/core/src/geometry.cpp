#include "hcconf/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "hcconf/error.hpp"

namespace hcconf {

namespace {

constexpr double kRelTol = 1e-12;

// Axes within this relative distance are treated as a circle.
constexpr double kCircleTol = 1e-12;

}  // namespace

double wrap_orientation(double theta) noexcept {
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t = 0.0;
  return t;
}

double orientation_delta(double theta, double reference) noexcept {
  double d = std::fmod(theta - reference, kPi);
  if (d > kPi / 2) d -= kPi;
  if (d <= -kPi / 2) d += kPi;
  return d;
}

Ellipse Ellipse::make(double cx, double cy, double a, double b, double theta) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(a) || !std::isfinite(b) ||
      !std::isfinite(theta)) {
    throw Error(ErrorCode::InvalidArgument, "ellipse parameters must be finite");
  }
  if (a <= 0.0 || b <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "ellipse axes must be positive");
  }
  if (a < b) {
    std::swap(a, b);
    theta += kPi / 2;
  }
  if (a - b <= kCircleTol * a) {
    const double r = b == a ? a : 0.5 * (a + b);
    return Ellipse(cx, cy, r, r, 0.0);
  }
  return Ellipse(cx, cy, a, b, wrap_orientation(theta));
}

double Ellipse::quadratic_form(double x, double y) const noexcept {
  return QuadraticForm(*this)(x, y);
}

QuadraticForm::QuadraticForm(const Ellipse& e)
    : cx_(e.cx()), cy_(e.cy()), a_(e.a()), b_(e.b()), cos_(std::cos(e.theta())),
      sin_(std::sin(e.theta())) {}

Ellipse Ellipse::translated(double dx, double dy) const {
  return Ellipse(cx_ + dx, cy_ + dy, a_, b_, theta_);
}

Ellipse Ellipse::scaled(double k) const {
  if (!(k > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale factor must be positive");
  return Ellipse(cx_ * k, cy_ * k, a_ * k, b_ * k, theta_);
}

Conic Conic::normalized() const {
  auto c = coefficients();
  double norm = 0.0;
  for (double v : c) norm += v * v;
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::InvalidArgument, "conic coefficients are all zero or non-finite");
  }
  double sign = 1.0;
  for (double v : c) {
    if (v != 0.0) {
      sign = v < 0.0 ? -1.0 : 1.0;
      break;
    }
  }
  const double k = sign / norm;
  return Conic{A * k, B * k, C * k, D * k, E * k, F * k};
}

Conic conic_of(const Ellipse& e) {
  const double c = std::cos(e.theta());
  const double s = std::sin(e.theta());
  const double ia = 1.0 / (e.a() * e.a());
  const double ib = 1.0 / (e.b() * e.b());
  Conic q;
  q.A = c * c * ia + s * s * ib;
  q.B = 2.0 * c * s * (ia - ib);
  q.C = s * s * ia + c * c * ib;
  q.D = -2.0 * q.A * e.cx() - q.B * e.cy();
  q.E = -q.B * e.cx() - 2.0 * q.C * e.cy();
  q.F = q.A * e.cx() * e.cx() + q.B * e.cx() * e.cy() + q.C * e.cy() * e.cy() - 1.0;
  return q.normalized();
}

Ellipse conic_to_geometric(const Conic& conic) {
  const Conic q = conic.normalized();
  double scale = 0.0;
  for (double v : {q.A, q.B, q.C}) scale = std::max(scale, std::abs(v));
  const double disc = q.discriminant();
  if (!(disc > 0.0)) {
    throw Error(ErrorCode::NotAnEllipse, "discriminant 4AC - B^2 is not positive");
  }
  if (disc <= kRelTol * scale * scale) {
    throw Error(ErrorCode::Singular, "quadratic part is numerically singular");
  }

  // [2A B; B 2C] c = [-D, -E]
  const double cx = (q.B * q.E - 2.0 * q.C * q.D) / disc;
  const double cy = (q.B * q.D - 2.0 * q.A * q.E) / disc;
  const double f0 = q.F + 0.5 * (q.D * cx + q.E * cy);

  // Eigenvalues of [[A, B/2], [B/2, C]]; the small one from the determinant
  // to avoid cancellation on elongated ellipses.
  const double mean = 0.5 * (q.A + q.C);
  const double radius = std::hypot(0.5 * (q.A - q.C), 0.5 * q.B);
  const double lambda_big = mean + radius;
  const double lambda_small = (0.25 * disc) / lambda_big;
  if (!(lambda_big > 0.0) || !(-f0 > 0.0)) {
    throw Error(ErrorCode::NotAnEllipse, "conic has no real points");
  }
  const double a = std::sqrt(-f0 / lambda_small);
  const double b = std::sqrt(-f0 / lambda_big);
  // 0.5 atan2(B, A - C) points along the large-eigenvalue (minor) direction.
  const double theta = 0.5 * std::atan2(q.B, q.A - q.C) + kPi / 2;
  return Ellipse::make(cx, cy, a, b, theta);
}

Ellipse fit_ellipse(std::span<const Point2> points) {
  const auto n = points.size();
  if (n < 5) {
    throw Error(ErrorCode::TooFewPoints, "need at least 5 points, got " + std::to_string(n));
  }

  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double ms = 0.0;
  for (const auto& p : points) ms += (p.x - mx) * (p.x - mx) + (p.y - my) * (p.y - my);
  const double rms = std::sqrt(ms / static_cast<double>(n));
  if (!(rms > 0.0) || !std::isfinite(rms)) {
    throw Error(ErrorCode::DegenerateConfiguration, "points are coincident or non-finite");
  }
  const double s = rms / std::sqrt(2.0);

  // Scatter blocks of the quadratic [x^2, xy, y^2] and linear [x, y, 1] parts.
  Eigen::Matrix3d s1 = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d s2 = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d s3 = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const double x = (p.x - mx) / s;
    const double y = (p.y - my) / s;
    const Eigen::Vector3d d1(x * x, x * y, y * y);
    const Eigen::Vector3d d2(x, y, 1.0);
    s1.noalias() += d1 * d1.transpose();
    s2.noalias() += d1 * d2.transpose();
    s3.noalias() += d2 * d2.transpose();
  }

  Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
  lu.setThreshold(kRelTol * 1e3);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::DegenerateConfiguration, "points are collinear");
  }
  const Eigen::Matrix3d t = -lu.solve(s2.transpose());
  const Eigen::Matrix3d m = s1 + s2 * t;

  // Premultiply by the inverse of the constraint block [[0,0,2],[0,-1,0],[2,0,0]].
  Eigen::Matrix3d reduced;
  reduced.row(0) = m.row(2) / 2.0;
  reduced.row(1) = -m.row(1);
  reduced.row(2) = m.row(0) / 2.0;

  Eigen::EigenSolver<Eigen::Matrix3d> solver(reduced);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::DegenerateConfiguration, "eigen decomposition failed");
  }

  std::optional<Eigen::Vector3d> best;
  double best_value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector3cd vc = solver.eigenvectors().col(k);
    const double imag = vc.imag().norm() + std::abs(solver.eigenvalues()(k).imag());
    if (imag > 1e-9 * (1.0 + vc.real().norm())) continue;
    Eigen::Vector3d v = vc.real();
    const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
    if (!(cond > 0.0)) continue;
    const double value = std::abs(solver.eigenvalues()(k).real());
    if (value < best_value) {
      best_value = value;
      best = v;
    }
  }
  if (!best) {
    throw Error(ErrorCode::DegenerateConfiguration, "no elliptic solution");
  }
  const Eigen::Vector3d quad = *best;
  const Eigen::Vector3d lin = t * quad;

  Ellipse local = [&] {
    try {
      return conic_to_geometric(Conic{quad(0), quad(1), quad(2), lin(0), lin(1), lin(2)});
    } catch (const Error& err) {
      throw Error(ErrorCode::DegenerateConfiguration, err.what());
    }
  }();
  // Undo the centring and scaling.
  return Ellipse::make(mx + s * local.cx(), my + s * local.cy(), s * local.a(), s * local.b(),
                       local.theta());
}

std::vector<Point2> ellipse_boundary_points(const Ellipse& e, std::size_t count) {
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "boundary point count must be >= 1");
  const double c = std::cos(e.theta());
  const double s = std::sin(e.theta());
  std::vector<Point2> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(count);
    const double ct = std::cos(t);
    const double st = std::sin(t);
    out.push_back({e.cx() + e.a() * ct * c - e.b() * st * s, e.cy() + e.a() * ct * s + e.b() * st * c});
  }
  return out;
}

double ellipse_area(const Ellipse& e, double mm_per_pixel) {
  if (!(mm_per_pixel > 0.0)) throw Error(ErrorCode::InvalidArgument, "pixel size must be positive");
  return kPi * e.a() * e.b() * mm_per_pixel * mm_per_pixel;
}

}  // namespace hcconf
