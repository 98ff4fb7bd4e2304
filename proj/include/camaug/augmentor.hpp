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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "camaug/annotations.hpp"
#include "camaug/image.hpp"
#include "camaug/indexer.hpp"

namespace camaug {

enum class OverlapMode { AnyIntersection, IoUThreshold };
enum class ClassOrder { ByClassId, BySeedShuffle };

/// The multipliers used for the 3X / 10X / 20X variants.
inline constexpr int kStandardMultipliers[] = {3, 10, 20};

struct AugmentationConfig {
  // Per-image, per-class cap on accepted pastes. Missing classes get 0.
  std::map<int, int> per_class_multiplier;
  bool lighting_match = true;
  OverlapMode overlap_mode = OverlapMode::AnyIntersection;
  // Used in IoUThreshold mode: a candidate overlaps when IoU > threshold.
  double iou_threshold = 0.5;
  bool exclude_same_frame = true;
  std::uint64_t seed = 0;
  ClassOrder class_order = ClassOrder::ByClassId;

  int multiplier(int class_id) const;
  /// Same k for classes [0, num_classes).
  static AugmentationConfig uniform(std::size_t num_classes, int k, std::uint64_t seed = 0);
  /// Throws ValidationError on negative multipliers or a threshold outside (0, 1].
  void validate() const;
};

/// Scan record for one class of one host image.
struct ClassPlacement {
  int class_id = 0;
  int cap = 0;
  std::size_t pool_size = 0;
  std::size_t attempted = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  // Candidate ids in shuffled scan order (the whole pool, scanned or not).
  std::vector<InstanceId> candidate_order;
  std::vector<InstanceId> accepted_ids;
};

struct PlacementLog {
  ImageId image_id = 0;
  std::string camera_id;
  std::string note;
  std::vector<int> class_order;
  std::vector<ClassPlacement> classes;

  std::size_t total_accepted() const;
};

/// One JSON object per line.
std::string to_json_line(const PlacementLog &log);

struct PlacementPlan {
  // Accepted instances in acceptance order.
  std::vector<ObjectInstance> accepted;
  PlacementLog log;
};

/// True when `candidate` conflicts with `occupied` under the configured
/// overlap predicate.
bool conflicts(const BoundingBox &candidate, const BoundingBox &occupied, const AugmentationConfig &cfg);

/// Chooses which same-camera instances to paste into `host`. The occupied
/// set starts with every box already on the host; each class's candidate
/// pool is shuffled with a stream derived from (cfg.seed, host.image_id)
/// and scanned once, accepting candidates that conflict with nothing
/// placed so far, until the class cap is reached.
PlacementPlan plan_placements(const ImageRecord &host, std::span<const Annotation> host_annotations,
                              const CameraIndex &index, const AugmentationConfig &cfg);

/// Pixel rectangle copied for a box: edges rounded to the nearest pixel
/// boundary, so boxes that do not overlap map to disjoint rectangles.
PixelRect paste_rect(const BoundingBox &box);

using FrameLoader = std::function<Image(ImageId)>;

/// Copies each accepted instance's rectangle from its source frame into a
/// copy of `host` at the same coordinates, in acceptance order. Throws
/// ValidationError when a source frame's size differs from the host's.
Image apply_placements(const Image &host, const ImageRecord &host_record,
                       std::span<const ObjectInstance> accepted, const FrameLoader &load_frame);

struct AugmentResult {
  Dataset dataset;
  std::vector<PlacementLog> logs;  // one per image, dataset order
  std::vector<std::vector<ObjectInstance>> accepted;  // per image, acceptance order
};

/// Plans placements for every image. Pasted annotations are appended after
/// the originals, grouped by image in dataset order, with fresh instance ids
/// starting above the largest existing id. Output does not depend on
/// `workers`.
AugmentResult augment_dataset(const Dataset &d, const CameraIndex &index, const AugmentationConfig &cfg,
                              int workers = 1);

/// Writes one augmented image per input image under `output_root`. Images
/// with no pastes are copied byte for byte.
void materialize_images(const Dataset &input, const AugmentResult &result,
                        const std::filesystem::path &input_root, const std::filesystem::path &output_root,
                        int workers = 1);

/// Per-class variant assembly: each class gets the multiplier of its best
/// variant (0 keeps the original objects only). Values must be one of
/// 0, 3, 10, 20. Other settings are taken from `base`.
AugmentResult assemble(const Dataset &d, const CameraIndex &index, const std::map<int, int> &per_class_variant,
                       std::uint64_t seed, int workers = 1, const AugmentationConfig &base = {});

std::string_view to_string(OverlapMode mode);
std::string_view to_string(ClassOrder order);

}  // namespace camaug
