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

// Test-only helpers: scratch directories, synthetic datasets and scenes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "camaug/annotations.hpp"
#include "camaug/image.hpp"

namespace camaug::testing {

namespace fs = std::filesystem;

class TempDir {
 public:
  explicit TempDir(const std::string &tag = "t") {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("camaug-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const fs::path &path() const { return path_; }
  fs::path operator/(const std::string &rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path &p, const std::string &text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// FNV-1a over file bytes.
inline std::uint64_t file_hash(const fs::path &p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : slurp(p)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline Image noise_image(int width, int height, std::uint64_t seed) {
  Image img(width, height);
  std::mt19937_64 rng(seed);
  for (auto &v : img.data()) v = static_cast<std::uint8_t>(rng() & 0xff);
  return img;
}

inline Image solid_image(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  Image img(width, height);
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      auto *p = img.pixel(row, col);
      p[0] = r;
      p[1] = g;
      p[2] = b;
    }
  }
  return img;
}

struct SceneSpec {
  int cameras = 2;
  int frames_per_camera = 5;
  int width = 64;
  int height = 64;
  int classes = 3;
  int max_boxes_per_frame = 4;
  int min_box = 4;
  int max_box = 20;
  bool mixed_lighting = true;
};

/// Random tagged dataset with integer boxes. Camera c's frames are named
/// `cam<c>_<frame>.png`. Image and instance ids are unique and ascending.
inline Dataset random_scene_dataset(const SceneSpec &scene, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };

  Dataset d;
  for (int c = 0; c < scene.classes; ++c) d.class_names.push_back("class" + std::to_string(c));
  ImageId next_image = 1;
  InstanceId next_instance = 1;
  for (int cam = 0; cam < scene.cameras; ++cam) {
    for (int f = 0; f < scene.frames_per_camera; ++f) {
      ImageRecord img;
      img.image_id = next_image++;
      img.file_path = "cam" + std::to_string(cam) + "_" + std::to_string(f) + ".png";
      img.width = scene.width;
      img.height = scene.height;
      img.camera_id = "cam" + std::to_string(cam);
      img.frame_index = f;
      img.lighting = scene.mixed_lighting && uniform(0, 3) == 0 ? Lighting::Night : Lighting::Day;
      const int n = uniform(0, scene.max_boxes_per_frame);
      for (int b = 0; b < n; ++b) {
        const int w = uniform(scene.min_box, std::min(scene.max_box, scene.width));
        const int h = uniform(scene.min_box, std::min(scene.max_box, scene.height));
        Annotation ann;
        ann.image_id = img.image_id;
        ann.class_id = uniform(0, scene.classes - 1);
        ann.bbox = BoundingBox{double(uniform(0, scene.width - w)), double(uniform(0, scene.height - h)), double(w),
                               double(h)};
        ann.instance_id = next_instance++;
        d.annotations.push_back(ann);
      }
      d.images.push_back(img);
    }
  }
  return d;
}

/// Writes a noise PNG for every image of `d` under `root`.
inline void write_noise_images(const Dataset &d, const fs::path &root, std::uint64_t seed) {
  for (const auto &img : d.images) {
    save_image(noise_image(img.width, img.height, seed * 7919 + static_cast<std::uint64_t>(img.image_id)),
               root / img.file_path);
  }
}

/// Class names and per-class totals of the small Fisheye8K training subset
/// (450 images).
inline const std::vector<std::string> kFisheyeClasses = {"Bus", "Bike", "Car", "Pedestrian", "Truck"};
inline const std::vector<std::size_t> kFisheyeSmallCounts = {219, 5060, 3720, 812, 325};
inline constexpr int kFisheyeSmallImages = 450;

/// COCO text with 450 1280x1280 images and the class totals above, spread
/// round-robin over images. Built by string concatenation so it shares no
/// code with the writer under test.
inline std::string fisheye_small_fixture_json() {
  std::ostringstream s;
  s << "{\"images\":[";
  for (int i = 0; i < kFisheyeSmallImages; ++i) {
    if (i) s << ",";
    s << "{\"id\":" << (i + 1) << ",\"file_name\":\"camera" << (i % 18 + 1) << "_A_" << i
      << ".png\",\"width\":1280,\"height\":1280}";
  }
  s << "],\"annotations\":[";
  long ann_id = 1;
  bool first = true;
  for (std::size_t c = 0; c < kFisheyeSmallCounts.size(); ++c) {
    for (std::size_t k = 0; k < kFisheyeSmallCounts[c]; ++k) {
      if (!first) s << ",";
      first = false;
      const long image = static_cast<long>((ann_id * 7) % kFisheyeSmallImages) + 1;
      const int x = static_cast<int>((ann_id * 37) % 1200);
      const int y = static_cast<int>((ann_id * 53) % 1200);
      s << "{\"id\":" << ann_id << ",\"image_id\":" << image << ",\"category_id\":" << c
        << ",\"bbox\":[" << x << "," << y << "," << (10 + ann_id % 60) << "," << (10 + ann_id % 70) << "]}";
      ++ann_id;
    }
  }
  s << "],\"categories\":[";
  for (std::size_t c = 0; c < kFisheyeClasses.size(); ++c) {
    if (c) s << ",";
    s << "{\"id\":" << c << ",\"name\":\"" << kFisheyeClasses[c] << "\"}";
  }
  s << "]}";
  return s.str();
}

/// Images carrying 1..6 objects over 3 classes x 3 size buckets. Each image
/// leans toward one class and one bucket so subsets differ in composition.
inline Dataset strata_dataset(int num_images, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  // Side lengths well inside Small (<32), Medium (32..95) and Large (>=96).
  const int side_lo[3] = {4, 40, 110};
  const int side_hi[3] = {24, 80, 200};

  Dataset d;
  d.class_names = {"Car", "Bus", "Truck"};
  InstanceId next = 1;
  for (int i = 0; i < num_images; ++i) {
    ImageRecord img{i + 1, "s" + std::to_string(i % 7) + "_" + std::to_string(i) + ".png", 1920, 1080,
                    "s" + std::to_string(i % 7), i, Lighting::Day};
    const int lean_class = uniform(0, 2);
    const int lean_bucket = uniform(0, 2);
    const int n = uniform(1, 6);
    for (int k = 0; k < n; ++k) {
      const int cls = uniform(0, 3) == 0 ? uniform(0, 2) : lean_class;
      const int bucket = uniform(0, 3) == 0 ? uniform(0, 2) : lean_bucket;
      const int side = uniform(side_lo[bucket], side_hi[bucket]);
      d.annotations.push_back({img.image_id, cls, {double(uniform(0, 1700)), double(uniform(0, 850)), double(side),
                                                   double(side)},
                               next++, Origin::Original, std::nullopt});
    }
    d.images.push_back(img);
  }
  return d;
}

/// Random radii at sorted angles around the grid center, vertices snapped
/// to the half-pixel lattice so boundary hits are exercised. Snapping can
/// fold the polygon onto itself; callers filter with oracle::is_simple.
inline Polygon random_star_polygon(std::mt19937_64 &rng, int grid, int n) {
  std::vector<double> angles;
  std::uniform_real_distribution<double> a(0.0, 2 * M_PI);
  for (int i = 0; i < n; ++i) angles.push_back(a(rng));
  std::sort(angles.begin(), angles.end());
  const double c = grid / 2.0;
  std::uniform_real_distribution<double> r(1.0, grid / 2.0);
  Polygon p;
  for (double t : angles) {
    const double radius = r(rng);
    p.vertices.push_back({std::round(2 * (c + radius * std::cos(t))) / 2, std::round(2 * (c + radius * std::sin(t))) / 2});
  }
  return p;
}

}  // namespace camaug::testing
