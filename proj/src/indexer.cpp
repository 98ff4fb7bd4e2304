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

#include "camaug/indexer.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

#include "camaug/error.hpp"
#include "camaug/parallel.hpp"

namespace camaug {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// Last run of digits in the file stem, or 0.
std::int64_t frame_number(const std::string &file_path) {
  const std::string stem = fs::path(file_path).stem().string();
  auto end = stem.end();
  while (end != stem.begin() && !std::isdigit(static_cast<unsigned char>(*(end - 1)))) --end;
  auto begin = end;
  while (begin != stem.begin() && std::isdigit(static_cast<unsigned char>(*(begin - 1)))) --begin;
  if (begin == end) return 0;
  const std::string digits(begin, std::min(end, begin + 18));
  return std::stoll(digits);
}

// Sum of 299R + 587G + 114B over all pixels; weights scaled by 1000 keep it exact.
std::uint64_t luminance_sum(const Image &image) {
  if (image.empty()) throw TaggingError("cannot tag lighting of an empty image");
  std::uint64_t total = 0;
  const auto px = image.data();
  for (std::size_t i = 0; i + 2 < px.size(); i += Image::kChannels) {
    total += 299u * px[i] + 587u * px[i + 1] + 114u * px[i + 2];
  }
  return total;
}

}  // namespace

std::string_view to_string(SizeBucket bucket) {
  switch (bucket) {
    case SizeBucket::Small: return "small";
    case SizeBucket::Medium: return "medium";
    case SizeBucket::Large: return "large";
  }
  return "small";
}

SizeBucket size_bucket(const BoundingBox &box) {
  const double area = box.area();
  if (area < 32.0 * 32.0) return SizeBucket::Small;
  if (area < 96.0 * 96.0) return SizeBucket::Medium;
  return SizeBucket::Large;
}

const std::vector<ObjectInstance> *CameraIndex::find(const std::string &camera, Lighting lighting,
                                                     int class_id) const {
  auto cam = cameras_.find(camera);
  if (cam == cameras_.end()) return nullptr;
  auto light = cam->second.find(lighting);
  if (light == cam->second.end()) return nullptr;
  auto cls = light->second.find(class_id);
  if (cls == light->second.end()) return nullptr;
  return &cls->second;
}

std::vector<std::size_t> CameraIndex::class_totals(std::size_t num_classes) const {
  std::vector<std::size_t> totals(num_classes, 0);
  for (const auto &[camera, lightings] : cameras_) {
    for (const auto &[lighting, classes] : lightings) {
      for (const auto &[cls, instances] : classes) {
        if (static_cast<std::size_t>(cls) < num_classes) totals[cls] += instances.size();
      }
    }
  }
  return totals;
}

std::string extract_camera_id(const ImageRecord &image, const std::string &pattern) {
  std::regex re;
  try {
    re = std::regex(pattern);
  } catch (const std::regex_error &e) {
    throw TaggingError("camera pattern '" + pattern + "' does not compile: " + e.what());
  }
  if (re.mark_count() < 1) throw TaggingError("camera pattern '" + pattern + "' has no capture group");

  const std::string name = fs::path(image.file_path).filename().string();
  std::smatch m;
  if (!std::regex_search(name, m, re) || m[1].length() == 0) {
    throw TaggingError("camera pattern '" + pattern + "' does not match file " + image.file_path);
  }
  return m[1].str();
}

double mean_luminance(const Image &image) {
  const double n = static_cast<double>(image.width()) * image.height();
  return static_cast<double>(luminance_sum(image)) / (1000.0 * n);
}

Lighting tag_lighting(const Image &image, double threshold) {
  const double n = static_cast<double>(image.width()) * image.height();
  return static_cast<double>(luminance_sum(image)) >= threshold * 1000.0 * n ? Lighting::Day
                                                                              : Lighting::Night;
}

LightingOverrides parse_lighting_overrides(std::string_view csv_text) {
  LightingOverrides out;
  std::istringstream in{std::string(csv_text)};
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw TaggingError("lighting override line " + std::to_string(lineno) + " lacks a comma");
    }
    const std::string key = trim(line.substr(0, comma));
    const auto tag = parse_lighting(trim(line.substr(comma + 1)));
    if (key.empty() || !tag || *tag == Lighting::Untagged) {
      // A header row is tolerated on the first line only.
      if (lineno == 1 && !tag) continue;
      throw TaggingError("lighting override line " + std::to_string(lineno) + " is not 'key,Day|Night'");
    }
    out.by_key[key] = *tag;
  }
  return out;
}

Dataset tag_dataset(const Dataset &d, const fs::path &image_root, const TaggingOptions &opts) {
  Dataset out = d;
  // Compile once so a bad pattern fails before any work is scheduled.
  if (!out.images.empty()) {
    try {
      std::regex probe(opts.camera_pattern);
    } catch (const std::regex_error &e) {
      throw TaggingError("camera pattern '" + opts.camera_pattern + "' does not compile: " + e.what());
    }
  }

  parallel_for(out.images.size(), opts.workers, [&](std::size_t i) {
    ImageRecord &img = out.images[i];
    if (img.camera_id.empty()) img.camera_id = extract_camera_id(img, opts.camera_pattern);
    if (img.frame_index == 0) img.frame_index = frame_number(img.file_path);
    if (!opts.tag_lighting) return;

    const auto &ov = opts.overrides.by_key;
    if (auto it = ov.find(std::to_string(img.image_id)); it != ov.end()) {
      img.lighting = it->second;
    } else if (auto it2 = ov.find(img.camera_id); it2 != ov.end()) {
      img.lighting = it2->second;
    } else if (img.lighting == Lighting::Untagged || opts.retag) {
      try {
        img.lighting = tag_lighting(load_image(image_root / img.file_path), opts.lighting_threshold);
      } catch (const IoError &e) {
        throw IoError("indexer", "lighting tagging failed for image " + std::to_string(img.image_id) +
                                     ": " + e.what());
      }
    }
  });
  return out;
}

CameraIndex build_index(const Dataset &d) {
  const auto pos = image_positions(d);
  for (const auto &img : d.images) {
    if (img.camera_id.empty()) {
      throw ValidationError("indexer", "image " + std::to_string(img.image_id) +
                                           " has no camera id; run the index step (camera tagging) first");
    }
    if (img.lighting == Lighting::Untagged) {
      throw ValidationError("indexer", "image " + std::to_string(img.image_id) +
                                           " has untagged lighting; run lighting tagging first");
    }
  }

  CameraIndex index;
  for (const auto &ann : d.annotations) {
    if (ann.origin != Origin::Original) continue;
    auto it = pos.find(ann.image_id);
    if (it == pos.end()) {
      throw ValidationError("indexer", "annotation " + std::to_string(ann.instance_id) +
                                           " references unknown image id " + std::to_string(ann.image_id));
    }
    const ImageRecord &img = d.images[it->second];
    index.cameras_[img.camera_id][img.lighting][ann.class_id].push_back(
        ObjectInstance{ann.instance_id, img.camera_id, img.image_id, ann.class_id, ann.bbox, img.lighting});
    ++index.size_;
  }
  for (auto &[camera, lightings] : index.cameras_) {
    for (auto &[lighting, classes] : lightings) {
      for (auto &[cls, instances] : classes) {
        std::sort(instances.begin(), instances.end(),
                  [](const ObjectInstance &a, const ObjectInstance &b) { return a.instance_id < b.instance_id; });
      }
    }
  }
  return index;
}

}  // namespace camaug
