#include "hcconf/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hcconf/error.hpp"

namespace hcconf {

BinaryMask::BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> data) {
  if (data.size() != width * height) {
    throw Error(ErrorCode::InvalidArgument, "mask data length " + std::to_string(data.size()) +
                                                " != " + std::to_string(width) + "x" +
                                                std::to_string(height));
  }
  if (std::any_of(data.begin(), data.end(), [](std::uint8_t v) { return v > 1; })) {
    throw Error(ErrorCode::InvalidArgument, "mask labels must be 0 or 1");
  }
  width_ = width;
  height_ = height;
  data_ = std::move(data);
}

std::size_t BinaryMask::count() const noexcept {
  return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(),
                                                [](std::uint8_t v) { return v != 0; }));
}

SoftMask::SoftMask(std::size_t width, std::size_t height, std::vector<double> data) {
  if (data.size() != width * height) {
    throw Error(ErrorCode::InvalidArgument, "soft mask data length mismatch");
  }
  if (std::any_of(data.begin(), data.end(), [](double v) { return !(v >= 0.0 && v <= 1.0); })) {
    throw Error(ErrorCode::InvalidArgument, "soft mask values must lie in [0, 1]");
  }
  width_ = width;
  height_ = height;
  data_ = std::move(data);
}

BinaryMask rasterize_ellipse(const Ellipse& e, std::size_t width, std::size_t height) {
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::InvalidArgument, "raster dimensions must be positive");
  }
  BinaryMask mask(width, height);
  const double c = std::cos(e.theta());
  const double s = std::sin(e.theta());
  // Axis-aligned half extents, padded so the bounding box never clips a pixel with Q <= 1.
  const double hx = std::sqrt(e.a() * e.a() * c * c + e.b() * e.b() * s * s) + 1.0;
  const double hy = std::sqrt(e.a() * e.a() * s * s + e.b() * e.b() * c * c) + 1.0;
  const double x0 = std::max(0.0, std::floor(e.cx() - hx));
  const double x1 = std::min(static_cast<double>(width) - 1.0, std::ceil(e.cx() + hx));
  const double y0 = std::max(0.0, std::floor(e.cy() - hy));
  const double y1 = std::min(static_cast<double>(height) - 1.0, std::ceil(e.cy() + hy));
  if (x0 > x1 || y0 > y1) return mask;

  const QuadraticForm q(e);
  for (auto row = static_cast<std::size_t>(y0); row <= static_cast<std::size_t>(y1); ++row) {
    for (auto col = static_cast<std::size_t>(x0); col <= static_cast<std::size_t>(x1); ++col) {
      if (q(static_cast<double>(col), static_cast<double>(row)) <= 1.0) {
        mask.at(col, row) = 1;
      }
    }
  }
  return mask;
}

std::vector<Point2> extract_contour(const BinaryMask& mask) {
  const std::size_t w = mask.width();
  const std::size_t h = mask.height();
  std::vector<Point2> out;
  for (std::size_t row = 0; row < h; ++row) {
    for (std::size_t col = 0; col < w; ++col) {
      if (!mask.foreground(col, row)) continue;
      const bool interior = col > 0 && col + 1 < w && row > 0 && row + 1 < h &&
                            mask.foreground(col - 1, row) && mask.foreground(col + 1, row) &&
                            mask.foreground(col, row - 1) && mask.foreground(col, row + 1);
      if (!interior) out.push_back({static_cast<double>(col), static_cast<double>(row)});
    }
  }
  if (out.empty()) throw Error(ErrorCode::EmptyMask, "mask has no foreground pixels");
  return out;
}

namespace {

template <typename Op>
BinaryMask combine(std::span<const BinaryMask> masks, Op op) {
  if (masks.empty()) throw Error(ErrorCode::EmptyList, "no masks to combine");
  BinaryMask out = masks.front();
  for (const auto& m : masks.subspan(1)) {
    if (!m.same_shape(out)) throw Error(ErrorCode::DimensionMismatch, "mask dimensions differ");
    auto dst = out.data();
    auto src = m.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = op(dst[k], src[k]);
  }
  return out;
}

}  // namespace

BinaryMask mask_union(std::span<const BinaryMask> masks) {
  return combine(masks, [](std::uint8_t a, std::uint8_t b) -> std::uint8_t { return a | b; });
}

BinaryMask mask_intersection(std::span<const BinaryMask> masks) {
  return combine(masks, [](std::uint8_t a, std::uint8_t b) -> std::uint8_t { return a & b; });
}

BinaryMask threshold(const SoftMask& soft) {
  BinaryMask out(soft.width(), soft.height());
  auto dst = out.data();
  auto src = soft.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = src[k] >= 0.5 ? 1 : 0;
  return out;
}

}  // namespace hcconf
