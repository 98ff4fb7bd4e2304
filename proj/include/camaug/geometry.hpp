/**
 * Copyright 2026 The camaug Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace camaug {

/// Axis-aligned box in pixel space, top-left anchored. Coordinates are
/// real-valued; a box covers [x, x + w) x [y, y + h).
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }
  bool valid() const { return w > 0.0 && h > 0.0; }

  friend bool operator==(const BoundingBox &, const BoundingBox &) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point &, const Point &) = default;
};

/// Closed polygon; the last vertex connects back to the first.
struct Polygon {
  std::vector<Point> vertices;
};

/// Row-major boolean grid, one entry per pixel.
class BitMask {
 public:
  BitMask() = default;
  BitMask(int width, int height, bool value = false);

  int width() const { return width_; }
  int height() const { return height_; }

  bool at(int row, int col) const {
    return bits_[static_cast<std::size_t>(row) * width_ + col] != 0;
  }
  void set(int row, int col, bool value = true) {
    bits_[static_cast<std::size_t>(row) * width_ + col] = value ? 1 : 0;
  }

  std::size_t count() const;
  bool all() const;

  std::span<const std::uint8_t> data() const { return bits_; }

  friend bool operator==(const BitMask &, const BitMask &) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// True iff the intersection of the two boxes has strictly positive area.
/// Boxes sharing only an edge or a corner do not intersect.
bool intersects(const BoundingBox &a, const BoundingBox &b);

double intersection_area(const BoundingBox &a, const BoundingBox &b);

double iou(const BoundingBox &a, const BoundingBox &b);

/// Four corners in counter-clockwise order (y axis pointing down is ignored;
/// orientation is computed in the usual math frame).
std::vector<Point> corners(const BoundingBox &box);

/// Andrew's monotone chain. Returns the hull in counter-clockwise order with
/// collinear boundary points removed. Throws GeometryError when fewer than
/// three points are given or all points are collinear.
Polygon convex_hull(std::span<const Point> points);

/// Inside or on the boundary. Works for any simple polygon.
bool point_in_polygon(const Polygon &polygon, Point p);

/// Bit (row, col) is set iff the pixel center (col + 0.5, row + 0.5) lies
/// inside or on the polygon.
BitMask rasterize(const Polygon &polygon, int width, int height);

/// Sets every pixel whose center lies inside the box.
void fill_box(BitMask &mask, const BoundingBox &box);

/// Morphological dilation with a disc of the given radius in pixels.
BitMask dilate(const BitMask &mask, int radius);

}  // namespace camaug
