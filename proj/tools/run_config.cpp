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

#include "run_config.hpp"

#include <cstdlib>

#include "camaug/error.hpp"

namespace camaug::cli {

namespace fs = std::filesystem;

namespace {

ValidationError config_error(const std::string &what) { return ValidationError("config", what); }

fs::path resolve_path(const json &j, const fs::path &base_dir) {
  if (j.is_null()) return {};
  const auto s = j.get<std::string>();
  if (s.empty()) return {};
  fs::path p(s);
  if (p.is_relative()) p = base_dir / p;
  return p.lexically_normal();
}

void require_exists(const fs::path &p, const std::string &what) {
  if (p.empty()) throw config_error(what + " is not set");
  if (!fs::exists(p)) throw config_error(what + " does not exist: " + p.string());
}

int default_workers() {
  if (const char *env = std::getenv(kWorkersEnv)) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::logic_error &) {
    }
  }
  return 1;
}

}  // namespace

json default_config() {
  return json{
      {"dataset", {{"format", "coco"}, {"annotations", ""}, {"images", ""}, {"labels", ""}, {"classes", json::array()}}},
      {"camera_pattern", std::string(kDefaultCameraPattern)},
      {"lighting", {{"threshold", kDefaultLightingThreshold}, {"overrides", ""}}},
      {"augment",
       {{"multipliers", json::object()},
        {"lighting_match", true},
        {"overlap", "any"},
        {"iou_threshold", 0.5},
        {"exclude_same_frame", true},
        {"class_order", "class_id"},
        {"seed", 0}}},
      {"assemble", {{"variants", json::object()}}},
      {"roi", {{"mode", "hull"}, {"sigma", kDefaultBlurSigma}, {"dilation", 0}, {"file", ""}}},
      {"sample", {{"fraction", 0.085}, {"seed", 0}, {"max_iters", 1000}}},
      {"report", {{"format", "markdown"}, {"variants", json::object()}}},
      {"output", "out"},
      {"workers", default_workers()},
  };
}

void merge_config(json &base, const json &patch) {
  if (!patch.is_object()) {
    base = patch;
    return;
  }
  if (!base.is_object()) base = json::object();
  for (const auto &[key, value] : patch.items()) {
    if (value.is_null()) {
      base.erase(key);
    } else if (value.is_object() && base.contains(key) && base[key].is_object()) {
      merge_config(base[key], value);
    } else {
      base[key] = value;
    }
  }
}

RunConfig resolve_config(const json &doc, const fs::path &base_dir, const std::string &command) {
  RunConfig cfg;
  try {
    const auto &ds = doc.at("dataset");
    cfg.dataset.format = ds.at("format").get<std::string>();
    cfg.dataset.annotations = resolve_path(ds.at("annotations"), base_dir);
    cfg.dataset.images = resolve_path(ds.at("images"), base_dir);
    cfg.dataset.labels = resolve_path(ds.at("labels"), base_dir);
    if (ds.at("classes").is_string()) {
      const fs::path file = resolve_path(ds.at("classes"), base_dir);
      require_exists(file, "dataset.classes");
      cfg.dataset.classes = load_class_names(file);
    } else {
      cfg.dataset.classes = ds.at("classes").get<std::vector<std::string>>();
    }

    cfg.camera_pattern = doc.at("camera_pattern").get<std::string>();
    cfg.lighting_threshold = doc.at("lighting").at("threshold").get<double>();
    cfg.lighting_overrides = resolve_path(doc.at("lighting").at("overrides"), base_dir);

    const auto &aug = doc.at("augment");
    const auto &mult = aug.at("multipliers");
    if (mult.is_number_integer()) {
      // A bare integer applies to every class.
      cfg.multipliers["*"] = mult.get<int>();
    } else {
      cfg.multipliers = mult.get<std::map<std::string, int>>();
    }
    cfg.lighting_match = aug.at("lighting_match").get<bool>();
    const auto overlap = aug.at("overlap").get<std::string>();
    if (overlap == "any") {
      cfg.overlap = OverlapMode::AnyIntersection;
    } else if (overlap == "iou") {
      cfg.overlap = OverlapMode::IoUThreshold;
    } else {
      throw config_error("augment.overlap must be 'any' or 'iou'");
    }
    cfg.iou_threshold = aug.at("iou_threshold").get<double>();
    cfg.exclude_same_frame = aug.at("exclude_same_frame").get<bool>();
    const auto order = aug.at("class_order").get<std::string>();
    if (order == "class_id") {
      cfg.class_order = ClassOrder::ByClassId;
    } else if (order == "shuffle") {
      cfg.class_order = ClassOrder::BySeedShuffle;
    } else {
      throw config_error("augment.class_order must be 'class_id' or 'shuffle'");
    }
    cfg.seed = aug.at("seed").get<std::uint64_t>();

    cfg.assemble_variants = doc.at("assemble").at("variants").get<std::map<std::string, int>>();

    const auto &roi = doc.at("roi");
    const auto mode = parse_roi_mode(roi.at("mode").get<std::string>());
    if (!mode) throw config_error("roi.mode must be 'hull' or 'union'");
    cfg.roi_mode = *mode;
    cfg.blur_sigma = roi.at("sigma").get<double>();
    cfg.roi_dilation = roi.at("dilation").get<int>();
    cfg.roi_file = resolve_path(roi.at("file"), base_dir);

    const auto &sample = doc.at("sample");
    cfg.sample_fraction = sample.at("fraction").get<double>();
    cfg.sample_seed = sample.at("seed").get<std::uint64_t>();
    cfg.sample_max_iters = sample.at("max_iters").get<int>();

    const auto &report = doc.at("report");
    const auto fmt = parse_report_format(report.at("format").get<std::string>());
    if (!fmt) throw config_error("report.format must be 'markdown', 'csv' or 'json'");
    cfg.report_format = *fmt;
    for (const auto &[name, path] : report.at("variants").items()) {
      cfg.report_variants.emplace_back(name, resolve_path(path, base_dir));
    }

    cfg.output = resolve_path(doc.at("output"), base_dir);
    cfg.workers = doc.at("workers").get<int>();
  } catch (const json::exception &e) {
    throw config_error(std::string("bad config value: ") + e.what());
  }

  if (cfg.output.empty()) throw config_error("output is not set");
  if (cfg.workers < 1) throw config_error("workers must be at least 1");
  if (!(cfg.blur_sigma > 0.0)) throw config_error("roi.sigma must be positive");
  if (cfg.roi_dilation < 0) throw config_error("roi.dilation must be non-negative");
  if (!(cfg.sample_fraction > 0.0 && cfg.sample_fraction <= 1.0)) {
    throw config_error("sample.fraction must lie in (0, 1]");
  }
  if (cfg.sample_max_iters < 0) throw config_error("sample.max_iters must be non-negative");
  if (cfg.overlap == OverlapMode::IoUThreshold && !(cfg.iou_threshold > 0.0 && cfg.iou_threshold <= 1.0)) {
    throw config_error("augment.iou_threshold must lie in (0, 1]");
  }

  const bool needs_dataset = !(command == "report" && !cfg.report_variants.empty());
  if (needs_dataset) {
    if (cfg.dataset.format == "coco") {
      require_exists(cfg.dataset.annotations, "dataset.annotations");
    } else if (cfg.dataset.format == "yolo") {
      require_exists(cfg.dataset.labels, "dataset.labels");
      if (cfg.dataset.classes.empty()) throw config_error("dataset.classes is required for YOLO input");
    } else {
      throw config_error("dataset.format must be 'coco' or 'yolo'");
    }
    const bool needs_images = cfg.dataset.format == "yolo" || command == "index" || command == "augment" ||
                              command == "assemble" || command == "blur";
    if (needs_images) require_exists(cfg.dataset.images, "dataset.images");
  }
  if (!cfg.lighting_overrides.empty()) require_exists(cfg.lighting_overrides, "lighting.overrides");
  if (!cfg.roi_file.empty()) require_exists(cfg.roi_file, "roi.file");
  for (const auto &[name, path] : cfg.report_variants) require_exists(path, "report variant '" + name + "'");
  return cfg;
}

json to_json(const RunConfig &cfg) {
  json variants = json::object();
  for (const auto &[name, path] : cfg.report_variants) variants[name] = path.string();
  json mult = json::object();
  for (const auto &[k, v] : cfg.multipliers) mult[k] = v;
  json assemble = json::object();
  for (const auto &[k, v] : cfg.assemble_variants) assemble[k] = v;

  return json{
      {"dataset",
       {{"format", cfg.dataset.format},
        {"annotations", cfg.dataset.annotations.string()},
        {"images", cfg.dataset.images.string()},
        {"labels", cfg.dataset.labels.string()},
        {"classes", cfg.dataset.classes}}},
      {"camera_pattern", cfg.camera_pattern},
      {"lighting", {{"threshold", cfg.lighting_threshold}, {"overrides", cfg.lighting_overrides.string()}}},
      {"augment",
       {{"multipliers", mult},
        {"lighting_match", cfg.lighting_match},
        {"overlap", cfg.overlap == OverlapMode::IoUThreshold ? "iou" : "any"},
        {"iou_threshold", cfg.iou_threshold},
        {"exclude_same_frame", cfg.exclude_same_frame},
        {"class_order", std::string(to_string(cfg.class_order))},
        {"seed", cfg.seed}}},
      {"assemble", {{"variants", assemble}}},
      {"roi",
       {{"mode", std::string(to_string(cfg.roi_mode))},
        {"sigma", cfg.blur_sigma},
        {"dilation", cfg.roi_dilation},
        {"file", cfg.roi_file.string()}}},
      {"sample", {{"fraction", cfg.sample_fraction}, {"seed", cfg.sample_seed}, {"max_iters", cfg.sample_max_iters}}},
      {"report",
       {{"format", cfg.report_format == ReportFormat::Csv    ? "csv"
                   : cfg.report_format == ReportFormat::Json ? "json"
                                                             : "markdown"},
        {"variants", variants}}},
      {"output", cfg.output.string()},
      {"workers", cfg.workers},
  };
}

std::map<int, int> resolve_class_map(const std::map<std::string, int> &by_name,
                                     const std::vector<std::string> &class_names, const char *what) {
  std::map<int, int> out;
  if (auto it = by_name.find("*"); it != by_name.end()) {
    for (std::size_t c = 0; c < class_names.size(); ++c) out[static_cast<int>(c)] = it->second;
  }
  for (const auto &[key, k] : by_name) {
    if (key == "*") continue;
    int cls = -1;
    for (std::size_t c = 0; c < class_names.size(); ++c) {
      if (class_names[c] == key) cls = static_cast<int>(c);
    }
    if (cls < 0) {
      try {
        std::size_t used = 0;
        cls = std::stoi(key, &used);
        if (used != key.size()) cls = -1;
      } catch (const std::logic_error &) {
        cls = -1;
      }
    }
    if (cls < 0 || static_cast<std::size_t>(cls) >= class_names.size()) {
      throw config_error(std::string(what) + " names unknown class '" + key + "'");
    }
    out[cls] = k;
  }
  return out;
}

}  // namespace camaug::cli
