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

#include "camaug/augmentor.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "camaug/error.hpp"
#include "camaug/parallel.hpp"
#include "camaug/rng.hpp"

namespace camaug {

namespace fs = std::filesystem;

int AugmentationConfig::multiplier(int class_id) const {
  auto it = per_class_multiplier.find(class_id);
  return it == per_class_multiplier.end() ? 0 : it->second;
}

AugmentationConfig AugmentationConfig::uniform(std::size_t num_classes, int k, std::uint64_t seed) {
  AugmentationConfig cfg;
  for (std::size_t c = 0; c < num_classes; ++c) cfg.per_class_multiplier[static_cast<int>(c)] = k;
  cfg.seed = seed;
  return cfg;
}

void AugmentationConfig::validate() const {
  for (const auto &[cls, k] : per_class_multiplier) {
    if (cls < 0) throw ValidationError("augmentor", "negative class id in multiplier map");
    if (k < 0) {
      throw ValidationError("augmentor", "multiplier for class " + std::to_string(cls) + " is negative");
    }
  }
  if (overlap_mode == OverlapMode::IoUThreshold && !(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw ValidationError("augmentor", "IoU threshold must lie in (0, 1]");
  }
}

std::size_t PlacementLog::total_accepted() const {
  std::size_t n = 0;
  for (const auto &c : classes) n += c.accepted;
  return n;
}

std::string to_json_line(const PlacementLog &log) {
  nlohmann::ordered_json j;
  j["image_id"] = log.image_id;
  j["camera_id"] = log.camera_id;
  if (!log.note.empty()) j["note"] = log.note;
  j["class_order"] = log.class_order;
  j["classes"] = nlohmann::ordered_json::array();
  for (const auto &c : log.classes) {
    j["classes"].push_back({{"class_id", c.class_id},
                            {"cap", c.cap},
                            {"pool", c.pool_size},
                            {"attempted", c.attempted},
                            {"accepted", c.accepted},
                            {"rejected", c.rejected},
                            {"accepted_ids", c.accepted_ids}});
  }
  return j.dump();
}

bool conflicts(const BoundingBox &candidate, const BoundingBox &occupied, const AugmentationConfig &cfg) {
  if (cfg.overlap_mode == OverlapMode::IoUThreshold) return iou(candidate, occupied) > cfg.iou_threshold;
  return intersects(candidate, occupied);
}

PlacementPlan plan_placements(const ImageRecord &host, std::span<const Annotation> host_annotations,
                              const CameraIndex &index, const AugmentationConfig &cfg) {
  PlacementPlan plan;
  plan.log.image_id = host.image_id;
  plan.log.camera_id = host.camera_id;

  if (!index.has_camera(host.camera_id)) {
    plan.log.note = "camera not present in index";
    return plan;
  }
  if (cfg.lighting_match && host.lighting == Lighting::Untagged) {
    plan.log.note = "host lighting untagged; lighting match impossible";
    return plan;
  }

  std::vector<BoundingBox> occupied;
  occupied.reserve(host_annotations.size());
  for (const auto &ann : host_annotations) occupied.push_back(ann.bbox);

  Rng rng(derive_seed(cfg.seed, host.image_id));

  std::vector<int> order;
  for (const auto &[cls, k] : cfg.per_class_multiplier) {
    if (k > 0) order.push_back(cls);
  }
  if (cfg.class_order == ClassOrder::BySeedShuffle) rng.shuffle(std::span<int>(order));
  plan.log.class_order = order;

  const BoundingBox frame{0.0, 0.0, static_cast<double>(host.width), static_cast<double>(host.height)};
  const auto &lightings = index.cameras().at(host.camera_id);

  for (int cls : order) {
    ClassPlacement rec;
    rec.class_id = cls;
    rec.cap = cfg.multiplier(cls);

    std::vector<const ObjectInstance *> pool;
    for (const auto &[lighting, classes] : lightings) {
      if (cfg.lighting_match && lighting != host.lighting) continue;
      auto it = classes.find(cls);
      if (it == classes.end()) continue;
      for (const auto &inst : it->second) {
        if (cfg.exclude_same_frame && inst.frame_image_id == host.image_id) continue;
        pool.push_back(&inst);
      }
    }
    std::sort(pool.begin(), pool.end(),
              [](const ObjectInstance *a, const ObjectInstance *b) { return a->instance_id < b->instance_id; });
    rng.shuffle(std::span<const ObjectInstance *>(pool));

    rec.pool_size = pool.size();
    rec.candidate_order.reserve(pool.size());
    for (const auto *inst : pool) rec.candidate_order.push_back(inst->instance_id);

    for (const ObjectInstance *inst : pool) {
      if (rec.accepted >= static_cast<std::size_t>(rec.cap)) break;
      ++rec.attempted;
      const BoundingBox &box = inst->bbox;
      // A box that does not fit the host frame can never be pasted in place.
      bool blocked = box.x < frame.x || box.y < frame.y || box.right() > frame.right() ||
                     box.bottom() > frame.bottom();
      for (std::size_t i = 0; !blocked && i < occupied.size(); ++i) {
        blocked = conflicts(box, occupied[i], cfg);
      }
      if (blocked) {
        ++rec.rejected;
        continue;
      }
      occupied.push_back(box);
      plan.accepted.push_back(*inst);
      rec.accepted_ids.push_back(inst->instance_id);
      ++rec.accepted;
    }
    plan.log.classes.push_back(std::move(rec));
  }
  return plan;
}

PixelRect paste_rect(const BoundingBox &box) {
  return PixelRect{static_cast<int>(std::lround(box.x)), static_cast<int>(std::lround(box.y)),
                   static_cast<int>(std::lround(box.right())), static_cast<int>(std::lround(box.bottom()))};
}

Image apply_placements(const Image &host, const ImageRecord &host_record, std::span<const ObjectInstance> accepted,
                       const FrameLoader &load_frame) {
  Image out = host;
  // Each source frame is decoded once even when it contributes several crops.
  std::unordered_map<ImageId, Image> frames;
  for (const auto &inst : accepted) {
    auto it = frames.find(inst.frame_image_id);
    if (it == frames.end()) it = frames.emplace(inst.frame_image_id, load_frame(inst.frame_image_id)).first;
    const Image &src = it->second;
    if (src.width() != host.width() || src.height() != host.height()) {
      throw ValidationError("augmentor", "camera " + inst.camera_id + ": source frame " +
                                             std::to_string(inst.frame_image_id) + " is " +
                                             std::to_string(src.width()) + "x" + std::to_string(src.height()) +
                                             " but host frame " + std::to_string(host_record.image_id) + " is " +
                                             std::to_string(host.width()) + "x" + std::to_string(host.height()));
    }
    copy_rect(src, out, paste_rect(inst.bbox));
  }
  return out;
}

AugmentResult augment_dataset(const Dataset &d, const CameraIndex &index, const AugmentationConfig &cfg,
                              int workers) {
  cfg.validate();
  const auto groups = annotations_by_image(d);

  std::vector<PlacementPlan> plans(d.images.size());
  parallel_for(d.images.size(), workers, [&](std::size_t i) {
    std::vector<Annotation> host_anns;
    host_anns.reserve(groups[i].size());
    for (std::size_t a : groups[i]) host_anns.push_back(d.annotations[a]);
    plans[i] = plan_placements(d.images[i], host_anns, index, cfg);
  });

  AugmentResult result;
  result.dataset = d;
  InstanceId next_id = 1;
  for (const auto &ann : d.annotations) next_id = std::max(next_id, ann.instance_id + 1);

  result.logs.reserve(plans.size());
  result.accepted.reserve(plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) {
    for (const auto &inst : plans[i].accepted) {
      Annotation ann;
      ann.image_id = d.images[i].image_id;
      ann.class_id = inst.class_id;
      ann.bbox = inst.bbox;
      ann.instance_id = next_id++;
      ann.origin = Origin::Pasted;
      ann.source_instance_id = inst.instance_id;
      result.dataset.annotations.push_back(ann);
    }
    result.logs.push_back(std::move(plans[i].log));
    result.accepted.push_back(std::move(plans[i].accepted));
  }
  return result;
}

void materialize_images(const Dataset &input, const AugmentResult &result, const fs::path &input_root,
                        const fs::path &output_root, int workers) {
  const auto pos = image_positions(input);
  parallel_for(input.images.size(), workers, [&](std::size_t i) {
    const ImageRecord &rec = input.images[i];
    const fs::path src = input_root / rec.file_path;
    const fs::path dst = output_root / rec.file_path;
    std::error_code ec;
    fs::create_directories(dst.parent_path(), ec);

    if (result.accepted[i].empty()) {
      fs::copy_file(src, dst, fs::copy_options::overwrite_existing, ec);
      if (ec) throw IoError("augmentor", "image " + std::to_string(rec.image_id) + ": cannot copy " +
                                             src.string() + ": " + ec.message());
      return;
    }

    try {
      const Image host = load_image(src);
      if (host.width() != rec.width || host.height() != rec.height) {
        throw ValidationError("augmentor", "image " + std::to_string(rec.image_id) +
                                               " dimensions differ from its annotation record");
      }
      const Image out = apply_placements(host, rec, result.accepted[i], [&](ImageId id) {
        return load_image(input_root / input.images.at(pos.at(id)).file_path);
      });
      save_image(out, dst);
    } catch (const IoError &e) {
      throw IoError("augmentor", "image " + std::to_string(rec.image_id) + " (" + rec.file_path + "): " + e.what());
    }
  });
}

AugmentResult assemble(const Dataset &d, const CameraIndex &index, const std::map<int, int> &per_class_variant,
                       std::uint64_t seed, int workers, const AugmentationConfig &base) {
  for (const auto &[cls, k] : per_class_variant) {
    if (k != 0 && std::find(std::begin(kStandardMultipliers), std::end(kStandardMultipliers), k) ==
                      std::end(kStandardMultipliers)) {
      throw ValidationError("augmentor", "class " + std::to_string(cls) + " mapped to multiplier " +
                                             std::to_string(k) + "; expected one of 0, 3, 10, 20");
    }
  }
  AugmentationConfig cfg = base;
  cfg.per_class_multiplier = per_class_variant;
  cfg.seed = seed;
  return augment_dataset(d, index, cfg, workers);
}

std::string_view to_string(OverlapMode mode) {
  return mode == OverlapMode::IoUThreshold ? "iou" : "any";
}

std::string_view to_string(ClassOrder order) {
  return order == ClassOrder::BySeedShuffle ? "shuffle" : "class_id";
}

}  // namespace camaug
