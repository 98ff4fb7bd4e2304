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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "camaug/annotations.hpp"
#include "camaug/augmentor.hpp"
#include "camaug/indexer.hpp"
#include "camaug/report.hpp"
#include "camaug/roi_blur.hpp"

namespace camaug::cli {

using json = nlohmann::ordered_json;

inline constexpr const char *kWorkersEnv = "CAMAUG_WORKERS";

/// Fully resolved settings for one subcommand run. Built from defaults,
/// then the config file, then command-line flags.
struct RunConfig {
  struct Source {
    std::string format = "coco";  // coco | yolo
    std::filesystem::path annotations;  // coco: JSON file
    std::filesystem::path images;       // image root
    std::filesystem::path labels;       // yolo: label directory
    std::vector<std::string> classes;   // yolo: class names
  } dataset;

  std::string camera_pattern;
  double lighting_threshold = kDefaultLightingThreshold;
  std::filesystem::path lighting_overrides;

  // Keys are class names or decimal class ids.
  std::map<std::string, int> multipliers;
  bool lighting_match = true;
  OverlapMode overlap = OverlapMode::AnyIntersection;
  double iou_threshold = 0.5;
  bool exclude_same_frame = true;
  ClassOrder class_order = ClassOrder::ByClassId;
  std::uint64_t seed = 0;

  std::map<std::string, int> assemble_variants;

  RoiMode roi_mode = RoiMode::ConvexHull;
  double blur_sigma = kDefaultBlurSigma;
  int roi_dilation = 0;
  std::filesystem::path roi_file;  // stored regions to apply instead of computing

  double sample_fraction = 0.085;
  std::uint64_t sample_seed = 0;
  int sample_max_iters = 1000;

  ReportFormat report_format = ReportFormat::Markdown;
  std::vector<std::pair<std::string, std::filesystem::path>> report_variants;

  std::filesystem::path output;
  int workers = 1;
};

/// Defaults as a JSON document; worker count comes from the environment
/// when set.
json default_config();

/// RFC 7386 merge of `patch` into `base`.
void merge_config(json &base, const json &patch);

/// Typed view of a merged document. Relative paths resolve against
/// `base_dir`. Throws ValidationError on bad values or missing paths.
RunConfig resolve_config(const json &doc, const std::filesystem::path &base_dir, const std::string &command);

/// Canonical echo of a resolved config; feeding it back reproduces the run.
json to_json(const RunConfig &cfg);

/// Multiplier map keyed by class id, resolving class names.
std::map<int, int> resolve_class_map(const std::map<std::string, int> &by_name,
                                     const std::vector<std::string> &class_names, const char *what);

}  // namespace camaug::cli
