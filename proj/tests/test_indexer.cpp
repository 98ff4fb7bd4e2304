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

#include <doctest.h>

#include <set>
#include <tuple>

#include "camaug/error.hpp"
#include "camaug/indexer.hpp"
#include "support/fixtures.hpp"

using namespace camaug;
using namespace camaug::testing;

namespace {

ImageRecord named(const std::string &file) {
  ImageRecord r;
  r.file_path = file;
  return r;
}

}  // namespace

TEST_CASE("extract_camera_id") {
  CHECK(extract_camera_id(named("camera3_A_123.png"), std::string(kDefaultCameraPattern)) == "camera3");
  CHECK(extract_camera_id(named("sub/dir/camera3_A_123.png"), std::string(kDefaultCameraPattern)) == "camera3");
  CHECK(extract_camera_id(named("MVI_40191_img00001.jpg"), "(MVI_\\d+)") == "MVI_40191");
  CHECK_THROWS_AS(extract_camera_id(named("nounderscore.png"), std::string(kDefaultCameraPattern)), TaggingError);
  CHECK_THROWS_AS(extract_camera_id(named("a_b.png"), "([a-z"), TaggingError);
  CHECK_THROWS_AS(extract_camera_id(named("a_b.png"), "a_b"), TaggingError);
}

TEST_CASE("tag_lighting thresholds mean luminance inclusively") {
  CHECK(tag_lighting(solid_image(8, 8, 255, 255, 255)) == Lighting::Day);
  CHECK(tag_lighting(solid_image(8, 8, 0, 0, 0)) == Lighting::Night);
  CHECK(tag_lighting(solid_image(8, 8, 60, 60, 60)) == Lighting::Day);
  CHECK(tag_lighting(solid_image(8, 8, 59, 59, 59)) == Lighting::Night);
  // 0.299 * 200 = 59.8 for pure red, 0.587 * 200 = 117.4 for pure green.
  CHECK(tag_lighting(solid_image(4, 4, 200, 0, 0)) == Lighting::Night);
  CHECK(tag_lighting(solid_image(4, 4, 0, 200, 0)) == Lighting::Day);
  CHECK(mean_luminance(solid_image(3, 3, 10, 20, 30)) == doctest::Approx(0.299 * 10 + 0.587 * 20 + 0.114 * 30));
  CHECK_THROWS_AS(tag_lighting(Image{}), TaggingError);

  const Image noise = noise_image(16, 16, 4);
  CHECK(tag_lighting(noise) == tag_lighting(Image(noise)));
}

TEST_CASE("size_bucket boundaries") {
  CHECK(size_bucket({0, 0, 10, 10}) == SizeBucket::Small);
  CHECK(size_bucket({0, 0, 32, 32}) == SizeBucket::Medium);
  CHECK(size_bucket({0, 0, 100, 100}) == SizeBucket::Large);
  CHECK(size_bucket({0, 0, 1023, 1}) == SizeBucket::Small);
  CHECK(size_bucket({0, 0, 1024, 1}) == SizeBucket::Medium);
  CHECK(size_bucket({0, 0, 9215, 1}) == SizeBucket::Medium);
  CHECK(size_bucket({0, 0, 9216, 1}) == SizeBucket::Large);
}

TEST_CASE("lighting override file") {
  const auto ov = parse_lighting_overrides("image_id,lighting\n12,Night\ncam3, day \n\n# note\n");
  CHECK(ov.by_key.at("12") == Lighting::Night);
  CHECK(ov.by_key.at("cam3") == Lighting::Day);
  CHECK_THROWS_AS(parse_lighting_overrides("12,Night\n13,dusk\n"), TaggingError);
  CHECK_THROWS_AS(parse_lighting_overrides("12 Night\n"), TaggingError);
}

TEST_CASE("tag_dataset fills cameras and lighting, overrides win") {
  TempDir tmp("tag");
  Dataset d;
  d.class_names = {"Car"};
  d.images = {{1, "camA_001.png", 8, 8, "", 0, Lighting::Untagged},
              {2, "camA_002.png", 8, 8, "", 0, Lighting::Untagged},
              {3, "camB_007.png", 8, 8, "", 0, Lighting::Untagged}};
  save_image(solid_image(8, 8, 250, 250, 250), tmp / "camA_001.png");
  save_image(solid_image(8, 8, 5, 5, 5), tmp / "camA_002.png");
  save_image(solid_image(8, 8, 250, 250, 250), tmp / "camB_007.png");

  TaggingOptions opts;
  opts.overrides.by_key["camB"] = Lighting::Night;
  for (int workers : {1, 3}) {
    opts.workers = workers;
    const Dataset t = tag_dataset(d, tmp.path(), opts);
    CHECK(t.images[0].camera_id == "camA");
    CHECK(t.images[0].lighting == Lighting::Day);
    CHECK(t.images[1].lighting == Lighting::Night);
    CHECK(t.images[2].camera_id == "camB");
    CHECK(t.images[2].lighting == Lighting::Night);
    CHECK(t.images[2].frame_index == 7);
  }

  Dataset missing = d;
  missing.images[0].file_path = "camA_404.png";
  CHECK_THROWS_AS(tag_dataset(missing, tmp.path(), {}), IoError);
}

TEST_CASE("build_index: 2 cameras x 2 classes x 3 instances") {
  Dataset d;
  d.class_names = {"Car", "Bus"};
  InstanceId next = 1;
  for (int cam = 0; cam < 2; ++cam) {
    ImageRecord img{cam + 1, "c" + std::to_string(cam) + "_0.png", 100, 100, "c" + std::to_string(cam), 0,
                    Lighting::Day};
    d.images.push_back(img);
    for (int cls = 0; cls < 2; ++cls) {
      for (int k = 0; k < 3; ++k) {
        // Reverse id order checks sorting.
        d.annotations.push_back({img.image_id, cls, {double(10 * k), 0, 5, 5}, 100 - next++, Origin::Original,
                                 std::nullopt});
      }
    }
  }
  const CameraIndex index = build_index(d);
  CHECK(index.size() == 12);
  std::size_t leaves = 0;
  for (const auto &[cam, lightings] : index.cameras()) {
    for (const auto &[l, classes] : lightings) {
      for (const auto &[cls, list] : classes) {
        ++leaves;
        CHECK(list.size() == 3);
        CHECK(std::is_sorted(list.begin(), list.end(),
                             [](const ObjectInstance &a, const ObjectInstance &b) { return a.instance_id < b.instance_id; }));
      }
    }
  }
  CHECK(leaves == 4);
  CHECK(index.class_totals(2) == std::vector<std::size_t>{6, 6});
}

TEST_CASE("build_index: empty dataset and untagged input") {
  Dataset empty;
  empty.class_names = {"Car"};
  CHECK(build_index(empty).empty());

  Dataset d;
  d.class_names = {"Car"};
  d.images.push_back({1, "a_1.png", 10, 10, "a", 0, Lighting::Untagged});
  CHECK_THROWS_WITH_AS(build_index(d), doctest::Contains("lighting"), ValidationError);
  d.images[0].lighting = Lighting::Day;
  d.images[0].camera_id.clear();
  CHECK_THROWS_AS(build_index(d), ValidationError);
}

TEST_CASE("build_index partitions every original annotation exactly once") {
  SceneSpec scene;
  scene.cameras = 4;
  scene.frames_per_camera = 12;
  Dataset d = random_scene_dataset(scene, 8);
  // A pasted annotation must not enter the index.
  d.annotations.push_back({d.images[0].image_id, 0, {0, 0, 2, 2}, 99999, Origin::Pasted, 1});
  const CameraIndex index = build_index(d);

  std::set<InstanceId> seen;
  std::size_t originals = 0;
  for (const auto &a : d.annotations) originals += a.origin == Origin::Original;
  const auto pos = image_positions(d);
  for (const auto &[cam, lightings] : index.cameras()) {
    for (const auto &[l, classes] : lightings) {
      for (const auto &[cls, list] : classes) {
        for (const auto &inst : list) {
          CHECK(seen.insert(inst.instance_id).second);
          const ImageRecord &src = d.images[pos.at(inst.frame_image_id)];
          CHECK(src.camera_id == cam);
          CHECK(src.lighting == l);
          CHECK(inst.class_id == cls);
          CHECK(inst.lighting != Lighting::Untagged);
        }
      }
    }
  }
  CHECK(seen.size() == originals);
  CHECK(index.size() == originals);
}

TEST_CASE("Fisheye8K small-subset fixture index totals match parse-time totals") {
  Dataset d = parse_coco(fisheye_small_fixture_json());
  for (auto &img : d.images) {
    img.camera_id = extract_camera_id(img, std::string(kDefaultCameraPattern));
    img.lighting = img.image_id % 3 == 0 ? Lighting::Night : Lighting::Day;
  }
  const CameraIndex index = build_index(d);
  CHECK(index.class_totals(5) == kFisheyeSmallCounts);
  CHECK(index.cameras().size() == 18);
}
