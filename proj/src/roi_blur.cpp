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

#include "camaug/roi_blur.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "camaug/error.hpp"
#include "camaug/parallel.hpp"

namespace camaug {

using json = nlohmann::ordered_json;

std::string_view to_string(RoiMode mode) {
  return mode == RoiMode::BoxUnion ? "union" : "hull";
}

std::optional<RoiMode> parse_roi_mode(std::string_view text) {
  if (text == "hull" || text == "convex_hull") return RoiMode::ConvexHull;
  if (text == "union" || text == "box_union") return RoiMode::BoxUnion;
  return std::nullopt;
}

BitMask RegionOfInterest::rasterize() const {
  BitMask base = mode == RoiMode::ConvexHull ? camaug::rasterize(polygon, width, height) : mask;
  return dilate(base, dilation);
}

RegionOfInterest compute_roi(const std::string &camera_id, std::span<const BoundingBox> boxes, int width, int height,
                             RoiMode mode, int dilation) {
  if (boxes.empty()) throw ValidationError("roi_blur", "camera " + camera_id + " has no annotations");
  if (width <= 0 || height <= 0) throw ValidationError("roi_blur", "camera " + camera_id + " has no frame size");
  if (dilation < 0) throw ValidationError("roi_blur", "dilation must be non-negative");

  RegionOfInterest roi;
  roi.camera_id = camera_id;
  roi.mode = mode;
  roi.width = width;
  roi.height = height;
  roi.dilation = dilation;

  if (mode == RoiMode::ConvexHull) {
    std::vector<Point> pts;
    pts.reserve(boxes.size() * 4);
    for (const auto &b : boxes) {
      for (const Point &p : corners(b)) pts.push_back(p);
    }
    roi.polygon = convex_hull(pts);
  } else {
    roi.mask = BitMask(width, height);
    for (const auto &b : boxes) fill_box(roi.mask, b);
  }
  return roi;
}

std::map<std::string, RegionOfInterest> compute_rois(const Dataset &d, RoiMode mode, int dilation, int workers) {
  struct CameraBoxes {
    int width = 0;
    int height = 0;
    std::vector<BoundingBox> boxes;
  };
  std::map<std::string, CameraBoxes> by_camera;
  const auto pos = image_positions(d);
  for (const auto &img : d.images) {
    if (img.camera_id.empty()) {
      throw ValidationError("roi_blur", "image " + std::to_string(img.image_id) + " has no camera id");
    }
    auto &cam = by_camera[img.camera_id];
    if (cam.width == 0) {
      cam.width = img.width;
      cam.height = img.height;
    } else if (cam.width != img.width || cam.height != img.height) {
      throw ValidationError("roi_blur", "camera " + img.camera_id + " has frames of different sizes");
    }
  }
  for (const auto &ann : d.annotations) {
    by_camera[d.images[pos.at(ann.image_id)].camera_id].boxes.push_back(ann.bbox);
  }

  std::vector<std::string> names;
  for (const auto &[name, cam] : by_camera) {
    if (!cam.boxes.empty()) names.push_back(name);
  }
  std::vector<RegionOfInterest> rois(names.size());
  parallel_for(names.size(), workers, [&](std::size_t i) {
    const auto &cam = by_camera.at(names[i]);
    rois[i] = compute_roi(names[i], cam.boxes, cam.width, cam.height, mode, dilation);
  });

  std::map<std::string, RegionOfInterest> out;
  for (std::size_t i = 0; i < names.size(); ++i) out.emplace(names[i], std::move(rois[i]));
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("roi_blur", "blur sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(double(i) * i) / (2.0 * sigma * sigma));
    sum += k[i + radius];
  }
  for (double &v : k) v /= sum;
  return k;
}

Image gaussian_blur(const Image &image, double sigma) {
  const auto kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  const int w = image.width();
  const int h = image.height();
  constexpr int C = Image::kChannels;

  // Horizontal pass kept in double so rounding happens once.
  std::vector<double> tmp(static_cast<std::size_t>(w) * h * C);
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      double acc[C] = {0.0, 0.0, 0.0};
      for (int t = -radius; t <= radius; ++t) {
        const int c = std::clamp(col + t, 0, w - 1);
        const std::uint8_t *p = image.pixel(row, c);
        const double kv = kernel[t + radius];
        for (int ch = 0; ch < C; ++ch) acc[ch] += kv * p[ch];
      }
      double *dst = &tmp[(static_cast<std::size_t>(row) * w + col) * C];
      for (int ch = 0; ch < C; ++ch) dst[ch] = acc[ch];
    }
  }

  Image out(w, h);
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      double acc[C] = {0.0, 0.0, 0.0};
      for (int t = -radius; t <= radius; ++t) {
        const int r = std::clamp(row + t, 0, h - 1);
        const double *src = &tmp[(static_cast<std::size_t>(r) * w + col) * C];
        const double kv = kernel[t + radius];
        for (int ch = 0; ch < C; ++ch) acc[ch] += kv * src[ch];
      }
      std::uint8_t *dst = out.pixel(row, col);
      for (int ch = 0; ch < C; ++ch) {
        dst[ch] = static_cast<std::uint8_t>(std::clamp(std::lround(acc[ch]), 0L, 255L));
      }
    }
  }
  return out;
}

Image blur_outside(const Image &image, const BitMask &mask, double sigma) {
  if (mask.width() != image.width() || mask.height() != image.height()) {
    throw ValidationError("roi_blur", "mask size differs from image size");
  }
  if (mask.all()) {
    gaussian_kernel(sigma);  // still reject a bad sigma
    return image;
  }
  Image out = gaussian_blur(image, sigma);
  for (int row = 0; row < image.height(); ++row) {
    for (int col = 0; col < image.width(); ++col) {
      if (mask.at(row, col)) std::copy_n(image.pixel(row, col), Image::kChannels, out.pixel(row, col));
    }
  }
  return out;
}

Image blur_outside(const Image &image, const RegionOfInterest &roi, double sigma) {
  if (image.width() != roi.width || image.height() != roi.height) {
    throw ValidationError("roi_blur", "camera " + roi.camera_id + " region is " + std::to_string(roi.width) + "x" +
                                          std::to_string(roi.height) + " but image is " +
                                          std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }
  return blur_outside(image, roi.rasterize(), sigma);
}

std::vector<std::size_t> encode_rle(const BitMask &mask) {
  std::vector<std::size_t> runs;
  std::uint8_t current = 0;
  std::size_t run = 0;
  for (std::uint8_t bit : mask.data()) {
    if (bit != current) {
      runs.push_back(run);
      run = 0;
      current = bit;
    }
    ++run;
  }
  runs.push_back(run);
  return runs;
}

BitMask decode_rle(std::span<const std::size_t> runs, int width, int height) {
  BitMask mask(width, height);
  const std::size_t total = static_cast<std::size_t>(width) * height;
  std::size_t at = 0;
  bool value = false;
  for (std::size_t run : runs) {
    if (run > total - at) throw ValidationError("roi_blur", "mask run lengths exceed the frame");
    for (std::size_t i = 0; i < run && value; ++i) {
      mask.set(static_cast<int>((at + i) / width), static_cast<int>((at + i) % width));
    }
    at += run;
    value = !value;
  }
  if (at != total) throw ValidationError("roi_blur", "mask run lengths do not cover the frame");
  return mask;
}

std::string write_rois(const std::map<std::string, RegionOfInterest> &rois) {
  json doc = json::object();
  for (const auto &[camera, roi] : rois) {
    json j;
    j["mode"] = std::string(to_string(roi.mode));
    j["width"] = roi.width;
    j["height"] = roi.height;
    j["dilation"] = roi.dilation;
    if (roi.mode == RoiMode::ConvexHull) {
      json verts = json::array();
      for (const Point &p : roi.polygon.vertices) verts.push_back({p.x, p.y});
      j["polygon"] = std::move(verts);
    } else {
      j["rle"] = encode_rle(roi.mask);
    }
    doc[camera] = std::move(j);
  }
  return doc.dump(1) + "\n";
}

std::map<std::string, RegionOfInterest> parse_rois(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("malformed ROI file: ") + e.what(), e.byte);
  }
  if (!doc.is_object()) throw ValidationError("roi_blur", "ROI file must be a JSON object");

  std::map<std::string, RegionOfInterest> out;
  try {
    for (const auto &[camera, j] : doc.items()) {
      RegionOfInterest roi;
      roi.camera_id = camera;
      const auto mode = parse_roi_mode(j.at("mode").get<std::string>());
      if (!mode) throw ValidationError("roi_blur", "camera " + camera + " has unknown ROI mode");
      roi.mode = *mode;
      roi.width = j.at("width").get<int>();
      roi.height = j.at("height").get<int>();
      roi.dilation = j.value("dilation", 0);
      if (roi.width <= 0 || roi.height <= 0 || roi.dilation < 0) {
        throw ValidationError("roi_blur", "camera " + camera + " has invalid ROI dimensions");
      }
      if (roi.mode == RoiMode::ConvexHull) {
        for (const auto &v : j.at("polygon")) roi.polygon.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        if (roi.polygon.vertices.size() < 3) {
          throw ValidationError("roi_blur", "camera " + camera + " polygon has fewer than 3 vertices");
        }
      } else {
        const auto runs = j.at("rle").get<std::vector<std::size_t>>();
        roi.mask = decode_rle(runs, roi.width, roi.height);
      }
      out.emplace(camera, std::move(roi));
    }
  } catch (const json::exception &e) {
    throw ValidationError("roi_blur", std::string("ROI field error: ") + e.what());
  }
  return out;
}

}  // namespace camaug
