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

// Acceptance suite. One line per criterion:
//   PASS|FAIL|SKIP  <name>  <measurements>
// Exits non-zero when any gating criterion fails. The real-data smoke
// check reports but never gates, and SKIPs when the data is absent.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "camaug/annotations.hpp"
#include "camaug/augmentor.hpp"
#include "camaug/geometry.hpp"
#include "camaug/indexer.hpp"
#include "camaug/report.hpp"
#include "camaug/roi_blur.hpp"
#include "camaug/sampler.hpp"
#include "support/fixtures.hpp"
#include "support/invariants.hpp"
#include "support/oracles.hpp"
#include "support/process.hpp"

using namespace camaug;
using namespace camaug::testing;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Fail;
  std::string detail;
};

Outcome pass_if(bool ok, std::string detail) { return {ok ? Verdict::Pass : Verdict::Fail, std::move(detail)}; }

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Randomized scene for seed `s`, with fractional offsets on odd seeds so
// the overlap predicate sees non-lattice coordinates too.
Dataset varied_scene(std::uint64_t s) {
  SceneSpec scene;
  scene.cameras = 4;
  scene.frames_per_camera = 30;
  scene.width = 96 + static_cast<int>(s % 3) * 32;
  scene.height = 72 + static_cast<int>(s % 2) * 24;
  scene.classes = 3 + static_cast<int>(s % 3);
  scene.max_boxes_per_frame = 3 + static_cast<int>(s % 4);
  scene.min_box = 3;
  scene.max_box = 12 + static_cast<int>(s % 5) * 4;
  Dataset d = random_scene_dataset(scene, 500 + s);
  if (s % 2 == 1) {
    std::mt19937_64 rng(s);
    for (auto &a : d.annotations) {
      const double dx = double(rng() % 4) / 4.0;
      const double dy = double(rng() % 4) / 4.0;
      if (a.bbox.right() + dx <= scene.width) a.bbox.x += dx;
      if (a.bbox.bottom() + dy <= scene.height) a.bbox.y += dy;
    }
  }
  return d;
}

Outcome no_overlap() {
  Stopwatch sw;
  std::size_t images = 0;
  std::size_t pasted = 0;
  std::size_t violations = 0;
  for (std::uint64_t seed = 0; seed <= 9; ++seed) {
    const Dataset d = varied_scene(seed);
    const CameraIndex index = build_index(d);
    for (int k : kStandardMultipliers) {
      AugmentationConfig cfg = AugmentationConfig::uniform(d.class_names.size(), k, seed);
      cfg.class_order = seed % 2 ? ClassOrder::BySeedShuffle : ClassOrder::ByClassId;
      const AugmentResult r = augment_dataset(d, index, cfg, 4);
      const Violations v = check_invariants(d, r.dataset, cfg);
      images += d.images.size();
      pasted += v.pasted;
      violations += v.overlap;
    }
  }
  const double t = sw.seconds();
  return pass_if(images >= 1000 && pasted > 0 && violations == 0 && t < 60.0,
                 std::to_string(images) + " images, " + std::to_string(pasted) + " pasted, " +
                     std::to_string(violations) + " overlaps, " + fmt("%.2f", t) + " s (limit 60 s)");
}

Outcome cap() {
  std::size_t violations = 0;
  std::map<int, int> max_seen;
  std::size_t checked = 0;
  for (int k : kStandardMultipliers) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      SceneSpec scene;
      scene.cameras = 2;
      scene.frames_per_camera = 60;
      scene.width = 256;
      scene.height = 256;
      scene.max_boxes_per_frame = 3;
      scene.min_box = 4;
      scene.max_box = 10;
      scene.mixed_lighting = false;
      const Dataset d = random_scene_dataset(scene, 900 + seed);
      const AugmentationConfig cfg = AugmentationConfig::uniform(3, k, seed);
      const AugmentResult r = augment_dataset(d, build_index(d), cfg, 4);
      violations += check_invariants(d, r.dataset, cfg).cap;
      std::map<std::pair<ImageId, int>, int> per;
      for (const auto &a : r.dataset.annotations) {
        if (a.origin == Origin::Pasted) ++per[{a.image_id, a.class_id}];
      }
      for (const auto &[key, n] : per) max_seen[k] = std::max(max_seen[k], n);
      checked += d.images.size();
    }
  }
  std::string detail = std::to_string(checked) + " images, " + std::to_string(violations) + " violations; max pasted per image/class";
  bool binding = true;
  for (int k : kStandardMultipliers) {
    detail += " k=" + std::to_string(k) + ":" + std::to_string(max_seen[k]);
    binding = binding && max_seen[k] == k;
  }
  return pass_if(violations == 0 && binding, detail);
}

Outcome fidelity() {
  TempDir tmp("accept_fidelity");
  SceneSpec scene;
  scene.cameras = 5;
  scene.frames_per_camera = 20;
  scene.width = 80;
  scene.height = 60;
  const Dataset d = random_scene_dataset(scene, 4242);
  write_noise_images(d, tmp / "in", 3);
  const AugmentResult r = augment_dataset(d, build_index(d), AugmentationConfig::uniform(3, 10, 8), 4);
  materialize_images(d, r, tmp / "in", tmp / "out", 4);

  std::map<ImageId, const ImageRecord *> images;
  for (const auto &img : d.images) images[img.image_id] = &img;
  std::map<InstanceId, const Annotation *> sources;
  for (const auto &a : d.annotations) sources[a.instance_id] = &a;

  std::size_t diffs = 0;
  std::size_t pasted_pixels = 0;
  for (const auto &img : d.images) {
    // Expected pixels: host, then each pasted source rectangle in annotation order.
    Image expect = load_image(tmp / "in" / img.file_path);
    for (const auto &a : r.dataset.annotations) {
      if (a.image_id != img.image_id || a.origin != Origin::Pasted) continue;
      const Annotation &src = *sources.at(*a.source_instance_id);
      const Image src_img = load_image(tmp / "in" / images.at(src.image_id)->file_path);
      for (int row = int(a.bbox.y); row < int(a.bbox.y + a.bbox.h); ++row) {
        for (int col = int(a.bbox.x); col < int(a.bbox.x + a.bbox.w); ++col) {
          for (int ch = 0; ch < 3; ++ch) expect.pixel(row, col)[ch] = src_img.pixel(row, col)[ch];
          ++pasted_pixels;
        }
      }
    }
    const Image got = load_image(tmp / "out" / img.file_path);
    for (std::size_t i = 0; i < got.data().size(); ++i) diffs += got.data()[i] != expect.data()[i];
  }
  return pass_if(d.images.size() == 100 && pasted_pixels > 0 && diffs == 0,
                 std::to_string(d.images.size()) + " PNG images, " + std::to_string(pasted_pixels) +
                     " pasted pixels, " + std::to_string(diffs) + " differing channel values");
}

Outcome determinism() {
  TempDir tmp("accept_determinism");
  SceneSpec scene;
  scene.cameras = 3;
  scene.frames_per_camera = 20;
  Dataset d = random_scene_dataset(scene, 77);
  for (auto &img : d.images) {
    img.camera_id.clear();
    img.lighting = Lighting::Untagged;
  }
  write_noise_images(d, tmp / "images", 5);
  write_text_file(tmp / "ann.json", write_coco(d));
  std::map<std::string, std::uint64_t> hashes[2];
  int exits[2] = {-1, -1};
  const char *workers[2] = {"1", "8"};
  for (int i = 0; i < 2; ++i) {
    const fs::path out = tmp / ("out" + std::to_string(i));
    exits[i] = run_cli({"augment", "--annotations", (tmp / "ann.json").string(), "--images",
                        (tmp / "images").string(), "--k", "10", "--seed", "2026", "--class-order", "shuffle", "-j",
                        workers[i], "-o", out.string()},
                       tmp.path())
                   .exit_code;
    if (exits[i] == 0) {
      hashes[i] = tree_hashes(out);
      hashes[i].erase("resolved_config.json");  // records the output path
    }
  }
  const bool ok = exits[0] == 0 && exits[1] == 0 && !hashes[0].empty() && hashes[0] == hashes[1] &&
                  hashes[0].count("dataset.json") && hashes[0].count("placements.jsonl");
  return pass_if(ok, "workers 1 vs 8: exit " + std::to_string(exits[0]) + "/" + std::to_string(exits[1]) + ", " +
                         std::to_string(hashes[0].size()) + " files, " +
                         (hashes[0] == hashes[1] ? "hash-identical" : "hashes differ"));
}

Outcome constraints() {
  std::size_t pasted = 0;
  std::size_t camera = 0;
  std::size_t lighting = 0;
  std::size_t in_place = 0;
  std::size_t lost = 0;
  for (std::uint64_t seed = 0; seed <= 9; ++seed) {
    const Dataset d = varied_scene(seed);
    const CameraIndex index = build_index(d);
    for (bool match : {true, false}) {
      AugmentationConfig cfg = AugmentationConfig::uniform(d.class_names.size(), 10, seed);
      cfg.lighting_match = match;
      const AugmentResult r = augment_dataset(d, index, cfg, 2);
      const Violations v = check_invariants(d, r.dataset, cfg);
      pasted += v.pasted;
      camera += v.camera;
      lighting += v.lighting;
      in_place += v.in_place;
      lost += v.lost;
    }
  }
  return pass_if(pasted > 0 && camera + lighting + in_place + lost == 0,
                 std::to_string(pasted) + " pasted; camera " + std::to_string(camera) + ", lighting " +
                     std::to_string(lighting) + ", in-place " + std::to_string(in_place) + ", lost originals " +
                     std::to_string(lost));
}

Outcome geometry_oracle() {
  std::mt19937_64 rng(64);
  std::size_t disagreements = 0;
  std::size_t polygons = 0;
  for (int t = 0; t < 10000; ++t) {
    const int grid = 4 + static_cast<int>(rng() % 61);
    auto box = [&] {
      const int w = 1 + static_cast<int>(rng() % grid);
      const int h = 1 + static_cast<int>(rng() % grid);
      return BoundingBox{double(rng() % (grid - w + 1)), double(rng() % (grid - h + 1)), double(w), double(h)};
    };
    const BoundingBox a = box();
    const BoundingBox b = box();
    const std::size_t shared = oracle::shared_pixels(a, b);
    disagreements += intersects(a, b) != (shared > 0);
    disagreements += intersection_area(a, b) != double(shared);

    Polygon p = random_star_polygon(rng, grid, 3 + static_cast<int>(rng() % 10));
    while (!oracle::is_simple(p.vertices)) p = random_star_polygon(rng, grid, 3 + static_cast<int>(rng() % 10));
    const BitMask m = rasterize(p, grid, grid);
    for (int row = 0; row < grid; ++row) {
      for (int col = 0; col < grid; ++col) {
        disagreements += m.at(row, col) != oracle::in_polygon_winding(p.vertices, {col + 0.5, row + 0.5});
      }
    }
    ++polygons;
  }

  std::size_t hull_failures = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = 3 + static_cast<int>(rng() % 200);
    std::vector<Point> pts;
    // Half the sets sit on a coarse lattice, which forces collinear points.
    const bool lattice = t % 2 == 0;
    for (int i = 0; i < n; ++i) {
      pts.push_back(lattice ? Point{double(rng() % 8), double(rng() % 8)}
                            : Point{double(rng() % 100000) / 997.0, double(rng() % 100000) / 991.0});
    }
    Polygon hull;
    try {
      hull = convex_hull(pts);
    } catch (const std::exception &) {
      // Degenerate sets must be exactly the collinear ones.
      const Point a = pts[0];
      Point b = a;
      for (const auto &p : pts) {
        if (!(p == a)) b = p;
      }
      bool collinear = true;
      for (const auto &p : pts) collinear = collinear && oracle::orient(a, b, p) == 0;
      hull_failures += !collinear;
      continue;
    }
    for (const auto &p : pts) hull_failures += !oracle::in_convex(hull.vertices, p);
    const auto &v = hull.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) hull_failures += oracle::orient(v[i], v[(i + 1) % v.size()], v[(i + 2) % v.size()]) <= 0;
  }
  return pass_if(disagreements == 0 && hull_failures == 0,
                 "10000 box pairs + " + std::to_string(polygons) + " polygons at grid <= 64: " +
                     std::to_string(disagreements) + " disagreements; 1000 hulls: " + std::to_string(hull_failures) +
                     " failures");
}

Outcome roi_blur() {
  std::mt19937_64 rng(16);
  std::size_t inside_changed = 0;
  int worst = 0;
  std::size_t outside_pixels = 0;
  const double sigmas[] = {0.7, 1.5, 3.0, kDefaultBlurSigma};
  for (int t = 0; t < 40; ++t) {
    Image img = noise_image(16, 16, static_cast<std::uint64_t>(t));
    if (t % 2 == 0) {
      for (int row = 0; row < 16; ++row) {
        for (int col = 0; col < 16; ++col) {
          for (int ch = 0; ch < 3; ++ch) img.pixel(row, col)[ch] = ((row / 2 + col / 2 + ch) % 2) ? 255 : 0;
        }
      }
    }
    std::vector<BoundingBox> boxes;
    const int nb = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < nb; ++i) {
      const int w = 1 + static_cast<int>(rng() % 6);
      const int h = 1 + static_cast<int>(rng() % 6);
      boxes.push_back({double(rng() % (16 - w)), double(rng() % (16 - h)), double(w), double(h)});
    }
    const double sigma = sigmas[t % 4];
    const RegionOfInterest roi = compute_roi("c", boxes, 16, 16);
    const BitMask mask = roi.rasterize();
    const Image out = blur_outside(img, roi, sigma);
    const Image ref = oracle::direct_gaussian(img, sigma);
    for (int row = 0; row < 16; ++row) {
      for (int col = 0; col < 16; ++col) {
        for (int ch = 0; ch < 3; ++ch) {
          if (mask.at(row, col)) {
            inside_changed += out.pixel(row, col)[ch] != img.pixel(row, col)[ch];
          } else {
            worst = std::max(worst, std::abs(int(out.pixel(row, col)[ch]) - int(ref.pixel(row, col)[ch])));
          }
        }
        outside_pixels += !mask.at(row, col);
      }
    }
  }

  // Annotation safety on larger frames: every box pixel stays unblurred.
  std::size_t exposed = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<BoundingBox> boxes;
    const int nb = 1 + static_cast<int>(rng() % 30);
    for (int i = 0; i < nb; ++i) {
      const int w = 1 + static_cast<int>(rng() % 30);
      const int h = 1 + static_cast<int>(rng() % 30);
      boxes.push_back({double(rng() % (128 - w)), double(rng() % (96 - h)), double(w), double(h)});
    }
    const BitMask m = compute_roi("c", boxes, 128, 96, RoiMode::ConvexHull, 0).rasterize();
    for (const auto &b : boxes) {
      for (int row = int(b.y); row < int(b.y + b.h); ++row) {
        for (int col = int(b.x); col < int(b.x + b.w); ++col) exposed += !m.at(row, col);
      }
    }
  }
  return pass_if(inside_changed == 0 && worst <= 1 && outside_pixels > 0 && exposed == 0,
                 "40 16x16 images: inside changes " + std::to_string(inside_changed) + ", max outside deviation " +
                     std::to_string(worst) + " (limit 1); 200 box sets: " + std::to_string(exposed) +
                     " box pixels outside ROI");
}

Outcome sampler() {
  const Dataset d = strata_dataset(1000, 2026);
  Stopwatch sw;
  const SampleResult r = stratified_sample(d, kDefaultSampleFraction, 0);
  const double t = sw.seconds();

  bool monotone = !r.trace.empty();
  for (std::size_t i = 1; i < r.trace.size(); ++i) monotone = monotone && r.trace[i] <= r.trace[i - 1];
  const auto full = oracle::stratum_tally(d, {});
  const double own = oracle::tally_l1(oracle::stratum_tally(d, {r.image_ids.begin(), r.image_ids.end()}), full);

  std::mt19937_64 rng(1000);
  std::vector<ImageId> ids;
  for (const auto &img : d.images) ids.push_back(img.image_id);
  double best = 1e9;
  for (int i = 0; i < 1000; ++i) {
    std::shuffle(ids.begin(), ids.end(), rng);
    best = std::min(best, oracle::tally_l1(oracle::stratum_tally(d, {ids.begin(), ids.begin() + 85}), full));
  }
  const bool ok = r.image_ids.size() == 85 && r.subset.images.size() == 85 && own <= best && monotone &&
                  std::abs(own - r.distance) < 1e-9 && t < 120.0;
  return pass_if(ok, std::to_string(r.image_ids.size()) + " of 1000 images, L1 " + fmt("%.6f", own) +
                         " vs best random " + fmt("%.6f", best) + ", trace " + std::to_string(r.trace.size()) +
                         (monotone ? " steps monotone, " : " steps NOT monotone, ") + fmt("%.2f", t) +
                         " s (limit 120 s)");
}

Outcome round_trip() {
  TempDir tmp("accept_roundtrip");
  std::size_t coco_mismatch = 0;
  std::size_t count_mismatch = 0;
  double worst_yolo = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SceneSpec scene;
    scene.cameras = 3;
    scene.frames_per_camera = 10;
    scene.width = 97 + static_cast<int>(seed);
    scene.height = 61 + static_cast<int>(seed);
    Dataset d = random_scene_dataset(scene, 300 + seed);
    std::mt19937_64 rng(seed);
    for (auto &a : d.annotations) {
      const double dx = double(rng() % 1000) / 1000.0 * (scene.width - a.bbox.right());
      a.bbox.x += dx;
    }
    // Augmented annotations carry provenance fields as well.
    const AugmentResult aug = augment_dataset(d, build_index(d), AugmentationConfig::uniform(3, 3, seed));
    const Dataset &full = aug.dataset;

    const Dataset back = parse_coco(write_coco(full));
    coco_mismatch += !(back.annotations == full.annotations) + !(back.images == full.images) +
                     !(back.class_names == full.class_names);
    count_mismatch += class_counts(back) != class_counts(full);

    const fs::path root = tmp / ("y" + std::to_string(seed));
    for (const auto &img : full.images) save_image(Image(img.width, img.height), root / "img" / img.file_path);
    write_yolo(full, root / "lbl");
    const Dataset yolo = parse_yolo(root / "lbl", root / "img", full.class_names);
    count_mismatch += class_counts(yolo) != class_counts(full);

    std::map<std::string, std::vector<const Annotation *>> orig;
    std::map<std::string, std::vector<const Annotation *>> got;
    const auto pos = image_positions(full);
    const auto ypos = image_positions(yolo);
    for (const auto &a : full.annotations) orig[full.images[pos.at(a.image_id)].file_path].push_back(&a);
    for (const auto &a : yolo.annotations) got[yolo.images[ypos.at(a.image_id)].file_path].push_back(&a);
    for (const auto &[file, anns] : orig) {
      const auto &other = got[file];
      if (other.size() != anns.size()) {
        ++count_mismatch;
        continue;
      }
      for (std::size_t i = 0; i < anns.size(); ++i) {
        const BoundingBox &a = anns[i]->bbox;
        const BoundingBox &b = other[i]->bbox;
        const double W = scene.width;
        const double H = scene.height;
        worst_yolo = std::max({worst_yolo, std::abs((a.x + a.w / 2) / W - (b.x + b.w / 2) / W),
                               std::abs((a.y + a.h / 2) / H - (b.y + b.h / 2) / H), std::abs(a.w / W - b.w / W),
                               std::abs(a.h / H - b.h / H)});
        count_mismatch += anns[i]->class_id != other[i]->class_id;
      }
    }
  }
  return pass_if(coco_mismatch == 0 && count_mismatch == 0 && worst_yolo <= 1e-6,
                 "COCO mismatches " + std::to_string(coco_mismatch) + ", class-count mismatches " +
                     std::to_string(count_mismatch) + ", max YOLO deviation " + fmt("%.2e", worst_yolo) +
                     " (limit 1e-6)");
}

Outcome fixture_tallies() {
  const Dataset d = parse_coco(fisheye_small_fixture_json());
  const auto counts = class_counts(d);
  const std::vector<std::string> variants = {"SD", "3X", "10X", "20X", "Assembled"};
  std::vector<NamedDataset> named;
  for (const auto &v : variants) named.emplace_back(v, &d);
  const CountTable table = count_table(named);
  const std::string md = emit(table, ReportFormat::Markdown);
  std::size_t lines = 0;
  bool rows_ok = true;
  std::istringstream in(md);
  std::string line;
  while (std::getline(in, line)) {
    ++lines;
    rows_ok = rows_ok && std::count(line.begin(), line.end(), '|') == 7;
  }
  const bool ok = d.class_names == kFisheyeClasses && counts == kFisheyeSmallCounts && table.row_labels.size() == 5 &&
                  table.column_labels == variants && lines == 7 && rows_ok;
  std::string detail;
  for (std::size_t i = 0; i < counts.size() && i < d.class_names.size(); ++i) {
    detail += d.class_names[i] + " " + std::to_string(counts[i]) + ", ";
  }
  return pass_if(ok, detail + "table " + std::to_string(table.row_labels.size()) + "x" +
                         std::to_string(table.column_labels.size()) + ", " + std::to_string(lines) + " Markdown lines");
}

// Real-data smoke check. Set CAMAUG_FISHEYE8K_ANNOTATIONS (COCO JSON of the
// small subset) and CAMAUG_FISHEYE8K_IMAGES to enable it.
Outcome fisheye_smoke() {
  const char *ann = std::getenv("CAMAUG_FISHEYE8K_ANNOTATIONS");
  const char *img = std::getenv("CAMAUG_FISHEYE8K_IMAGES");
  if (!ann || !img) return {Verdict::Skip, "Fisheye8K small subset not available; smoke check only, not a gate"};
  const std::map<std::string, std::size_t> reference = {
      {"Bus", 531}, {"Bike", 6375}, {"Car", 5022}, {"Pedestrian", 1765}, {"Truck", 851}};
  try {
    TaggingOptions opts;
    opts.workers = 8;
    const Dataset d = tag_dataset(load_coco(ann), img, opts);
    const CameraIndex index = build_index(d);
    const AugmentResult r = augment_dataset(d, index, AugmentationConfig::uniform(d.class_names.size(), 3, 0), 8);
    const auto before = class_counts(d);
    const auto after = class_counts(r.dataset);
    const auto pools = index.class_totals(d.class_names.size());
    bool ok = true;
    std::string detail;
    for (std::size_t c = 0; c < d.class_names.size(); ++c) {
      if (pools[c] > 0) ok = ok && after[c] > before[c];
      auto it = reference.find(d.class_names[c]);
      if (it != reference.end()) {
        ok = ok && after[c] * 3 >= it->second && after[c] <= it->second * 3;
        detail += d.class_names[c] + " " + std::to_string(after[c]) + "/" + std::to_string(it->second) + ", ";
      }
    }
    return pass_if(ok, detail + "k=3 totals vs reference 3X column (smoke check, not a gate)");
  } catch (const std::exception &e) {
    return {Verdict::Fail, std::string("smoke check error: ") + e.what()};
  }
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
    bool gate;
  };
  const std::vector<Criterion> criteria = {
      {"no-overlap", no_overlap, true},
      {"cap", cap, true},
      {"fidelity", fidelity, true},
      {"determinism", determinism, true},
      {"constraints", constraints, true},
      {"geometry-oracle", geometry_oracle, true},
      {"roi-blur", roi_blur, true},
      {"sampler", sampler, true},
      {"round-trip", round_trip, true},
      {"fixture-tallies", fixture_tallies, true},
      {"fisheye8k-smoke", fisheye_smoke, false},
  };
  int failures = 0;
  for (const auto &[name, run, gate] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception &e) {
      o = {Verdict::Fail, std::string("threw: ") + e.what()};
    }
    const char *tag = o.verdict == Verdict::Pass ? "PASS" : (o.verdict == Verdict::Skip ? "SKIP" : "FAIL");
    std::printf("%s  %-16s %s\n", tag, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += gate && o.verdict == Verdict::Fail;
  }
  return failures == 0 ? 0 : 1;
}
