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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "camaug/annotations.hpp"
#include "camaug/geometry.hpp"
#include "camaug/image.hpp"

namespace camaug {

enum class RoiMode { ConvexHull, BoxUnion };

inline constexpr double kDefaultBlurSigma = 9.0;

std::string_view to_string(RoiMode mode);
std::optional<RoiMode> parse_roi_mode(std::string_view text);

/// Active-traffic region of one camera.
struct RegionOfInterest {
  std::string camera_id;
  RoiMode mode = RoiMode::ConvexHull;
  int width = 0;   // frame size the region was derived for
  int height = 0;
  Polygon polygon;  // ConvexHull mode
  BitMask mask;     // BoxUnion mode, pre-dilation
  int dilation = 0;

  /// Final unblurred region at the camera's frame size, dilation applied.
  BitMask rasterize() const;
};

/// Region from every box of one camera. Throws ValidationError when `boxes`
/// is empty or the frame size is not positive.
RegionOfInterest compute_roi(const std::string &camera_id, std::span<const BoundingBox> boxes, int width,
                             int height, RoiMode mode = RoiMode::ConvexHull, int dilation = 0);

/// One region per camera, from the dataset's annotations. Every image must
/// carry a camera id; frames of a camera must share one size.
std::map<std::string, RegionOfInterest> compute_rois(const Dataset &d, RoiMode mode, int dilation,
                                                     int workers = 1);

/// Normalized 1-D Gaussian weights of radius ceil(3 sigma).
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur over the whole frame with clamp-to-edge borders.
Image gaussian_blur(const Image &image, double sigma);

/// Pixels inside `mask` keep their values; the rest take the blurred value.
Image blur_outside(const Image &image, const BitMask &mask, double sigma = kDefaultBlurSigma);

/// As above, rasterizing the region at its stored frame size. Throws
/// ValidationError when the image size differs.
Image blur_outside(const Image &image, const RegionOfInterest &roi, double sigma = kDefaultBlurSigma);

/// JSON: camera_id -> {mode, width, height, dilation, polygon | rle}.
std::string write_rois(const std::map<std::string, RegionOfInterest> &rois);
std::map<std::string, RegionOfInterest> parse_rois(std::string_view json_text);

/// Run lengths of alternating unset/set bits in row-major order, starting
/// with an unset run (which may be zero).
std::vector<std::size_t> encode_rle(const BitMask &mask);
BitMask decode_rle(std::span<const std::size_t> runs, int width, int height);

}  // namespace camaug
