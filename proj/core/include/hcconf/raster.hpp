#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hcconf/geometry.hpp"

namespace hcconf {

/// Row-major grid. Pixel (col i, row j) has continuous centre (i, j).
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& at(std::size_t col, std::size_t row) noexcept { return data_[row * width_ + col]; }
  const T& at(std::size_t col, std::size_t row) const noexcept { return data_[row * width_ + col]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  bool same_shape(const Grid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 protected:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

/// Labels are 0 (background) or 1 (foreground).
class BinaryMask : public Grid<std::uint8_t> {
 public:
  using Grid::Grid;
  /// Throws InvalidArgument when data.size() != width * height or a label is not 0/1.
  BinaryMask(std::size_t width, std::size_t height, std::vector<std::uint8_t> data);

  bool foreground(std::size_t col, std::size_t row) const noexcept { return at(col, row) != 0; }
  std::size_t count() const noexcept;
};

/// Foreground probabilities p_f in [0, 1]; p_b = 1 - p_f.
class SoftMask : public Grid<double> {
 public:
  using Grid::Grid;
  /// Throws InvalidArgument on size mismatch or values outside [0, 1].
  SoftMask(std::size_t width, std::size_t height, std::vector<double> data);
};

/// Foreground iff the pixel centre satisfies Q <= 1; clipped to the grid.
BinaryMask rasterize_ellipse(const Ellipse& e, std::size_t width, std::size_t height);

/// Centres of foreground pixels with a background or out-of-bounds 4-neighbour,
/// in row-major order. Throws EmptyMask if there is no foreground.
std::vector<Point2> extract_contour(const BinaryMask& mask);

/// Pixel-wise OR / AND. Throw EmptyList or DimensionMismatch.
BinaryMask mask_union(std::span<const BinaryMask> masks);
BinaryMask mask_intersection(std::span<const BinaryMask> masks);

/// Pixel-wise p >= 0.5.
BinaryMask threshold(const SoftMask& soft);

}  // namespace hcconf
