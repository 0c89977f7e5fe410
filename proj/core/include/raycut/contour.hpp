#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "raycut/volume.hpp"

namespace raycut {

enum class Axis { kX = 0, kY = 1, kZ = 2 };

std::optional<Axis> parse_axis(std::string_view name);

/// In-plane pixel axes of a slice normal to `axis`: x-slices are (y, z),
/// y-slices (x, z), z-slices (x, y). Pixel u runs along the first.
struct SliceShape {
  std::size_t width = 0;   // along the first in-plane axis
  std::size_t height = 0;  // along the second
};

SliceShape slice_shape(const Geometry& g, Axis axis);

/// Row-major (v * width + u) copy of one slice.
std::vector<double> extract_slice(const Volume& vol, Axis axis, std::size_t index);
std::vector<std::uint8_t> extract_slice(const MaskVolume& mask, Axis axis, std::size_t index);

struct Point2 {
  double u = 0.0;
  double v = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Closed polyline; the last point connects back to the first and is not
/// repeated.
using Polyline = std::vector<Point2>;

/// Marching squares over a binary image (row-major, width x height). The
/// contour passes through midpoints between foreground and background
/// pixel centres; saddles are split so foreground is 4-connected.
std::vector<Polyline> trace_contours(const std::vector<std::uint8_t>& pixels,
                                     std::size_t width, std::size_t height);

}  // namespace raycut
