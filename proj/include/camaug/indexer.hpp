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

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "camaug/annotations.hpp"
#include "camaug/image.hpp"

namespace camaug {

/// Text before the first underscore of the file name.
inline constexpr std::string_view kDefaultCameraPattern = "^([^_]+)_";
inline constexpr double kDefaultLightingThreshold = 60.0;

enum class SizeBucket { Small, Medium, Large };

std::string_view to_string(SizeBucket bucket);

/// COCO area thresholds: below 32^2 is small, at or above 96^2 is large.
SizeBucket size_bucket(const BoundingBox &box);

/// A labeled object that can be pasted back into another frame of its camera.
struct ObjectInstance {
  InstanceId instance_id = 0;
  std::string camera_id;
  ImageId frame_image_id = 0;
  int class_id = 0;
  BoundingBox bbox;
  Lighting lighting = Lighting::Day;
};

/// camera -> lighting -> class -> instances sorted by instance id.
/// Built once, then read-only.
class CameraIndex {
 public:
  using ClassMap = std::map<int, std::vector<ObjectInstance>>;
  using LightingMap = std::map<Lighting, ClassMap>;

  const std::vector<ObjectInstance> *find(const std::string &camera, Lighting lighting,
                                          int class_id) const;
  bool has_camera(const std::string &camera) const { return cameras_.count(camera) != 0; }

  const std::map<std::string, LightingMap> &cameras() const { return cameras_; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  /// Instances per class across every camera and lighting.
  std::vector<std::size_t> class_totals(std::size_t num_classes) const;

 private:
  friend CameraIndex build_index(const Dataset &d);

  std::map<std::string, LightingMap> cameras_;
  std::size_t size_ = 0;
};

/// Applies `pattern` (one capture group) to the file name of `image`.
/// Throws TaggingError when it does not match.
std::string extract_camera_id(const ImageRecord &image, const std::string &pattern);

/// Day iff mean Rec. 601 luminance >= threshold.
Lighting tag_lighting(const Image &image, double threshold = kDefaultLightingThreshold);

double mean_luminance(const Image &image);

/// Lines of `image_id,Day|Night` or `camera_id,Day|Night`. Image ids are
/// matched first, then camera ids.
struct LightingOverrides {
  std::unordered_map<std::string, Lighting> by_key;
};

LightingOverrides parse_lighting_overrides(std::string_view csv_text);

struct TaggingOptions {
  std::string camera_pattern{kDefaultCameraPattern};
  double lighting_threshold = kDefaultLightingThreshold;
  LightingOverrides overrides;
  // Set to false to leave lighting untouched.
  bool tag_lighting = true;
  // Recompute lighting for images that already carry a tag.
  bool retag = false;
  int workers = 1;
};

/// Fills missing camera ids and lighting tags, loading pixels from
/// `image_root` only where no override applies. Overrides always win.
/// Images are tagged in parallel; the result does not depend on the
/// worker count.
Dataset tag_dataset(const Dataset &d, const std::filesystem::path &image_root,
                    const TaggingOptions &opts);

/// Indexes every Original annotation. Throws ValidationError if any image
/// lacks a camera id or lighting tag.
CameraIndex build_index(const Dataset &d);

}  // namespace camaug
