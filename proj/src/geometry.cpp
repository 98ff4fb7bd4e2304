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

#include "camaug/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "camaug/error.hpp"

namespace camaug {

namespace {

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Point a, Point b, Point p) {
  if (cross(a, b, p) != 0.0) return false;
  return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
         p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

double overlap_1d(double a0, double a1, double b0, double b1) {
  return std::min(a1, b1) - std::max(a0, b0);
}

// First and last column whose pixel center lies in [lo, hi], clipped to
// [0, width). Returns an empty range when lo > hi.
std::pair<int, int> center_columns(double lo, double hi, int width) {
  const double first = std::ceil(lo - 0.5);
  const double last = std::floor(hi - 0.5);
  const int c0 = static_cast<int>(std::max(first, 0.0));
  const int c1 = static_cast<int>(std::min(last, static_cast<double>(width - 1)));
  return {c0, c1};
}

}  // namespace

BitMask::BitMask(int width, int height, bool value)
    : width_(width),
      height_(height),
      bits_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
            value ? 1 : 0) {
  if (width < 0 || height < 0) throw GeometryError("negative mask dimensions");
}

std::size_t BitMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool BitMask::all() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
}

bool intersects(const BoundingBox &a, const BoundingBox &b) {
  return overlap_1d(a.x, a.right(), b.x, b.right()) > 0.0 &&
         overlap_1d(a.y, a.bottom(), b.y, b.bottom()) > 0.0;
}

double intersection_area(const BoundingBox &a, const BoundingBox &b) {
  const double ow = std::max(0.0, overlap_1d(a.x, a.right(), b.x, b.right()));
  const double oh = std::max(0.0, overlap_1d(a.y, a.bottom(), b.y, b.bottom()));
  return ow * oh;
}

double iou(const BoundingBox &a, const BoundingBox &b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::vector<Point> corners(const BoundingBox &box) {
  return {{box.x, box.y}, {box.right(), box.y}, {box.right(), box.bottom()}, {box.x, box.bottom()}};
}

Polygon convex_hull(std::span<const Point> points) {
  if (points.size() < 3) throw GeometryError("convex hull needs at least 3 points");

  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point &p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);

  if (hull.size() < 3) throw GeometryError("convex hull of collinear points is degenerate");
  return Polygon{std::move(hull)};
}

bool point_in_polygon(const Polygon &polygon, Point p) {
  const auto &v = polygon.vertices;
  const std::size_t n = v.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (on_segment(v[j], v[i], p)) return true;
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

BitMask rasterize(const Polygon &polygon, int width, int height) {
  BitMask mask(width, height);
  const auto &v = polygon.vertices;
  const std::size_t n = v.size();
  if (n < 3) return mask;

  std::vector<double> xs;
  for (int row = 0; row < height; ++row) {
    const double cy = row + 0.5;

    // Even-odd scanline fill over the interior.
    xs.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      if ((v[i].y > cy) != (v[j].y > cy)) {
        xs.push_back(v[j].x + (cy - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const auto [c0, c1] = center_columns(xs[k], xs[k + 1], width);
      for (int col = c0; col <= c1; ++col) mask.set(row, col);
    }

    // Pixel centers lying exactly on an edge count as inside.
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point a = v[j];
      const Point b = v[i];
      if (cy < std::min(a.y, b.y) || cy > std::max(a.y, b.y)) continue;
      if (a.y == b.y) {
        const auto [c0, c1] = center_columns(std::min(a.x, b.x), std::max(a.x, b.x), width);
        for (int col = c0; col <= c1; ++col) mask.set(row, col);
        continue;
      }
      const double x = a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y);
      const double col = std::round(x - 0.5);
      if (col < 0 || col >= width) continue;
      if (on_segment(a, b, Point{col + 0.5, cy})) mask.set(row, static_cast<int>(col));
    }
  }
  return mask;
}

void fill_box(BitMask &mask, const BoundingBox &box) {
  const auto [c0, c1] = center_columns(box.x, box.right(), mask.width());
  const auto [r0, r1] = center_columns(box.y, box.bottom(), mask.height());
  for (int row = r0; row <= r1; ++row) {
    for (int col = c0; col <= c1; ++col) mask.set(row, col);
  }
}

BitMask dilate(const BitMask &mask, int radius) {
  if (radius <= 0) return mask;
  const int w = mask.width();
  const int h = mask.height();

  // Row prefix sums make each horizontal run query O(1).
  std::vector<int> prefix(static_cast<std::size_t>(w + 1) * h, 0);
  for (int row = 0; row < h; ++row) {
    int *p = &prefix[static_cast<std::size_t>(row) * (w + 1)];
    for (int col = 0; col < w; ++col) p[col + 1] = p[col] + (mask.at(row, col) ? 1 : 0);
  }

  BitMask out(w, h);
  for (int dy = -radius; dy <= radius; ++dy) {
    const int half = static_cast<int>(std::floor(std::sqrt(double(radius) * radius - double(dy) * dy)));
    for (int row = 0; row < h; ++row) {
      const int src = row + dy;
      if (src < 0 || src >= h) continue;
      const int *p = &prefix[static_cast<std::size_t>(src) * (w + 1)];
      for (int col = 0; col < w; ++col) {
        const int lo = std::max(0, col - half);
        const int hi = std::min(w, col + half + 1);
        if (p[hi] - p[lo] > 0) out.set(row, col);
      }
    }
  }
  return out;
}

}  // namespace camaug
