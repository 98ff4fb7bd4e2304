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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "camaug/geometry.hpp"

namespace camaug {

using ImageId = std::int64_t;
using InstanceId = std::int64_t;

enum class Lighting { Day, Night, Untagged };
enum class Origin { Original, Pasted };

std::string_view to_string(Lighting lighting);
std::string_view to_string(Origin origin);
/// Case-insensitive. Returns nullopt for anything but day/night/untagged.
std::optional<Lighting> parse_lighting(std::string_view text);

struct Annotation {
  ImageId image_id = 0;
  int class_id = 0;
  BoundingBox bbox;
  InstanceId instance_id = 0;
  Origin origin = Origin::Original;
  // Instance the crop was copied from; set only for pasted annotations.
  std::optional<InstanceId> source_instance_id;

  friend bool operator==(const Annotation &, const Annotation &) = default;
};

struct ImageRecord {
  ImageId image_id = 0;
  std::string file_path;  // relative to the image root
  int width = 0;
  int height = 0;
  std::string camera_id;
  std::int64_t frame_index = 0;
  Lighting lighting = Lighting::Untagged;

  friend bool operator==(const ImageRecord &, const ImageRecord &) = default;
};

struct Dataset {
  std::vector<std::string> class_names;
  // Category id declared in the source file for each class index. Empty
  // means identity+1 (COCO convention) when written.
  std::vector<std::int64_t> category_ids;
  std::vector<ImageRecord> images;
  std::vector<Annotation> annotations;

  std::size_t num_classes() const { return class_names.size(); }
};

/// Non-fatal findings collected while reading, such as clamped boxes.
struct Diagnostics {
  std::vector<std::string> warnings;
};

/// Checks every dataset invariant. Throws ValidationError on the first
/// violation found.
void validate(const Dataset &d);

/// image_id -> position in `d.images`.
std::unordered_map<ImageId, std::size_t> image_positions(const Dataset &d);

/// Annotations grouped by image position, preserving dataset order.
std::vector<std::vector<std::size_t>> annotations_by_image(const Dataset &d);

/// Number of annotations per class id.
std::vector<std::size_t> class_counts(const Dataset &d);

Dataset parse_coco(std::string_view json_text, Diagnostics *diag = nullptr);
std::string write_coco(const Dataset &d);

Dataset load_coco(const std::filesystem::path &path, Diagnostics *diag = nullptr);

/// One `.txt` per image in `label_dir`, matched to images in `image_dir` by
/// file stem. Images without a label file get no annotations.
Dataset parse_yolo(const std::filesystem::path &label_dir, const std::filesystem::path &image_dir,
                   const std::vector<std::string> &class_names, Diagnostics *diag = nullptr);

/// Writes `<stem>.txt` for every image plus `classes.txt`.
void write_yolo(const Dataset &d, const std::filesystem::path &out_dir);

/// Reads one class name per non-empty line.
std::vector<std::string> load_class_names(const std::filesystem::path &path);

std::string read_text_file(const std::filesystem::path &path);
/// Writes through a sibling temp file and renames it into place.
void write_text_file(const std::filesystem::path &path, std::string_view text);

}  // namespace camaug
