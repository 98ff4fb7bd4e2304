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

/** @file
 * camaug: in-place copy-paste augmentation for stationary-camera datasets.
 *
 *     camaug validate --annotations train.json --images frames/
 *     camaug index    --annotations train.json --images frames/ -o out/index
 *     camaug sample   --annotations out/index/dataset.json --fraction 0.085 -o out/small
 *     camaug augment  --annotations out/small/dataset.json --images frames/ --k 3 -o out/3x
 *     camaug assemble --annotations out/small/dataset.json --images frames/ --variant Bike=10 -o out/asm
 *     camaug blur     --annotations train.json --images frames/ -o out/blurred
 *     camaug report   --table "Small Data=out/small/dataset.json" --table "3X=out/3x/dataset.json"
 *
 * Every subcommand writes into a staging directory that is moved onto the
 * output path only on success, and leaves a resolved_config.json there that
 * reproduces the run when passed back with --config.
 */

#include <chrono>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <unistd.h>

#include <CLI11.hpp>

#include "camaug/annotations.hpp"
#include "camaug/augmentor.hpp"
#include "camaug/error.hpp"
#include "camaug/indexer.hpp"
#include "camaug/parallel.hpp"
#include "camaug/report.hpp"
#include "camaug/roi_blur.hpp"
#include "camaug/sampler.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using namespace camaug;
using cli::json;
using cli::RunConfig;

namespace {

constexpr int kExitModuleError = 1;
constexpr int kExitConfigError = 2;

class Logger {
 public:
  explicit Logger(std::string command) : command_(std::move(command)) {}

  void info(const std::string &msg, json extra = json::object()) const { write("info", msg, std::move(extra)); }
  void warn(const std::string &msg, json extra = json::object()) const { write("warn", msg, std::move(extra)); }
  void error(const std::string &module, const std::string &msg) const {
    write("error", msg, json{{"module", module}});
  }

 private:
  void write(const char *level, const std::string &msg, json extra) const {
    json j;
    j["level"] = level;
    j["command"] = command_;
    j["msg"] = msg;
    for (auto &[k, v] : extra.items()) j[k] = v;
    std::cerr << j.dump() << "\n";
  }

  std::string command_;
};

/// Output directory populated under a sibling staging path and moved into
/// place by commit(). An uncommitted stage is removed.
class StagedOutput {
 public:
  explicit StagedOutput(fs::path target) : target_(std::move(target)) {
    staging_ = target_;
    staging_ += ".partial-" + std::to_string(::getpid());
    fs::remove_all(staging_);
    fs::create_directories(staging_);
  }
  ~StagedOutput() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(staging_, ec);
    }
  }
  StagedOutput(const StagedOutput &) = delete;
  StagedOutput &operator=(const StagedOutput &) = delete;

  const fs::path &path() const { return staging_; }

  void commit() {
    fs::remove_all(target_);
    if (target_.has_parent_path()) fs::create_directories(target_.parent_path());
    fs::rename(staging_, target_);
    committed_ = true;
  }

 private:
  fs::path target_;
  fs::path staging_;
  bool committed_ = false;
};

Dataset load_dataset(const RunConfig &cfg, const Logger &log) {
  Diagnostics diag;
  Dataset d = cfg.dataset.format == "yolo"
                  ? parse_yolo(cfg.dataset.labels, cfg.dataset.images, cfg.dataset.classes, &diag)
                  : load_coco(cfg.dataset.annotations, &diag);
  for (const auto &w : diag.warnings) log.warn(w);
  validate(d);
  log.info("dataset loaded", {{"images", d.images.size()}, {"annotations", d.annotations.size()}});
  return d;
}

TaggingOptions tagging_options(const RunConfig &cfg) {
  TaggingOptions opts;
  opts.camera_pattern = cfg.camera_pattern;
  opts.lighting_threshold = cfg.lighting_threshold;
  if (!cfg.lighting_overrides.empty()) {
    opts.overrides = parse_lighting_overrides(read_text_file(cfg.lighting_overrides));
  }
  opts.workers = cfg.workers;
  return opts;
}

json class_count_json(const Dataset &d) {
  json j = json::object();
  const auto counts = class_counts(d);
  for (std::size_t c = 0; c < counts.size(); ++c) j[d.class_names[c]] = counts[c];
  return j;
}

json index_summary(const CameraIndex &index, const Dataset &d) {
  json cams = json::object();
  for (const auto &[camera, lightings] : index.cameras()) {
    json lj = json::object();
    for (const auto &[lighting, classes] : lightings) {
      json cj = json::object();
      for (const auto &[cls, instances] : classes) cj[d.class_names.at(cls)] = instances.size();
      lj[std::string(to_string(lighting))] = std::move(cj);
    }
    cams[camera] = std::move(lj);
  }
  return json{{"instances", index.size()}, {"cameras", std::move(cams)}};
}

void write_json(const fs::path &path, const json &j) { write_text_file(path, j.dump(2) + "\n"); }

std::string extension(ReportFormat f) {
  switch (f) {
    case ReportFormat::Csv: return ".csv";
    case ReportFormat::Json: return ".json";
    default: return ".md";
  }
}

int run_validate(const RunConfig &cfg, StagedOutput &out, const Logger &log) {
  Diagnostics diag;
  Dataset d = cfg.dataset.format == "yolo"
                  ? parse_yolo(cfg.dataset.labels, cfg.dataset.images, cfg.dataset.classes, &diag)
                  : load_coco(cfg.dataset.annotations, &diag);
  validate(d);
  for (const auto &w : diag.warnings) log.warn(w);
  write_json(out.path() / "validation.json", json{{"images", d.images.size()},
                                                  {"annotations", d.annotations.size()},
                                                  {"classes", class_count_json(d)},
                                                  {"warnings", diag.warnings}});
  return 0;
}

int run_index(const RunConfig &cfg, StagedOutput &out, const Logger &log) {
  const Dataset d = tag_dataset(load_dataset(cfg, log), cfg.dataset.images, tagging_options(cfg));
  const CameraIndex index = build_index(d);
  write_text_file(out.path() / "dataset.json", write_coco(d));
  write_json(out.path() / "index.json", index_summary(index, d));
  log.info("index built", {{"cameras", index.cameras().size()}, {"instances", index.size()}});
  return 0;
}

int run_sample(const RunConfig &cfg, StagedOutput &out, const Logger &log) {
  const Dataset d = load_dataset(cfg, log);
  const SampleResult result = stratified_sample(d, cfg.sample_fraction, cfg.sample_seed, cfg.sample_max_iters);

  std::string manifest;
  for (ImageId id : result.image_ids) manifest += std::to_string(id) + "\n";
  write_text_file(out.path() / "manifest.txt", manifest);
  write_text_file(out.path() / "dataset.json", write_coco(result.subset));

  // Camera composition is reported, not constrained.
  json cameras = json::object();
  for (const auto &img : result.subset.images) {
    std::string cam = img.camera_id;
    if (cam.empty()) {
      try {
        cam = extract_camera_id(img, cfg.camera_pattern);
      } catch (const TaggingError &) {
        cam = "?";
      }
    }
    cameras[cam] = cameras.value(cam, 0) + 1;
  }
  write_json(out.path() / "sample.json", json{{"fraction", cfg.sample_fraction},
                                              {"images_total", d.images.size()},
                                              {"images_selected", result.image_ids.size()},
                                              {"l1_distance", result.distance},
                                              {"trace", result.trace},
                                              {"cameras", cameras}});
  log.info("subset selected", {{"images", result.image_ids.size()}, {"l1_distance", result.distance}});
  return 0;
}

int write_augmented(const RunConfig &cfg, const Dataset &tagged, const AugmentResult &result,
                    const std::string &column, StagedOutput &out, const Logger &log) {
  materialize_images(tagged, result, cfg.dataset.images, out.path() / "images", cfg.workers);
  write_text_file(out.path() / "dataset.json", write_coco(result.dataset));
  std::string lines;
  for (const auto &l : result.logs) lines += to_json_line(l) + "\n";
  write_text_file(out.path() / "placements.jsonl", lines);
  const CountTable table = count_table({{"original", &tagged}, {column, &result.dataset}});
  write_text_file(out.path() / "counts.md", emit(table, ReportFormat::Markdown));
  log.info("augmentation written",
           {{"annotations_in", tagged.annotations.size()}, {"annotations_out", result.dataset.annotations.size()}});
  return 0;
}

AugmentationConfig augmentation_config(const RunConfig &cfg, const Dataset &d) {
  AugmentationConfig a;
  a.per_class_multiplier = cli::resolve_class_map(cfg.multipliers, d.class_names, "augment.multipliers");
  a.lighting_match = cfg.lighting_match;
  a.overlap_mode = cfg.overlap;
  a.iou_threshold = cfg.iou_threshold;
  a.exclude_same_frame = cfg.exclude_same_frame;
  a.seed = cfg.seed;
  a.class_order = cfg.class_order;
  return a;
}

int run_augment(const RunConfig &cfg, StagedOutput &out, const Logger &log) {
  const Dataset d = tag_dataset(load_dataset(cfg, log), cfg.dataset.images, tagging_options(cfg));
  const CameraIndex index = build_index(d);
  const AugmentationConfig acfg = augmentation_config(cfg, d);
  const AugmentResult result = augment_dataset(d, index, acfg, cfg.workers);
  return write_augmented(cfg, d, result, "augmented", out, log);
}

int run_assemble(const RunConfig &cfg, StagedOutput &out, const Logger &log) {
  const Dataset d = tag_dataset(load_dataset(cfg, log), cfg.dataset.images, tagging_options(cfg));
  const CameraIndex index = build_index(d);
  const AugmentationConfig base = augmentation_config(cfg, d);
  const auto variants = cli::resolve_class_map(cfg.assemble_variants, d.class_names, "assemble.variants");
  const AugmentResult result = assemble(d, index, variants, cfg.seed, cfg.workers, base);
  return write_augmented(cfg, d, result, "assembled", out, log);
}

int run_blur(const RunConfig &cfg, StagedOutput &out, const Logger &log) {
  TaggingOptions opts = tagging_options(cfg);
  opts.tag_lighting = false;
  const Dataset d = tag_dataset(load_dataset(cfg, log), cfg.dataset.images, opts);

  const auto rois = cfg.roi_file.empty() ? compute_rois(d, cfg.roi_mode, cfg.roi_dilation, cfg.workers)
                                         : parse_rois(read_text_file(cfg.roi_file));
  std::map<std::string, BitMask> masks;
  for (const auto &[camera, roi] : rois) masks.emplace(camera, roi.rasterize());

  parallel_for(d.images.size(), cfg.workers, [&](std::size_t i) {
    const ImageRecord &img = d.images[i];
    auto it = rois.find(img.camera_id);
    if (it == rois.end()) {
      throw ValidationError("roi_blur", "no region of interest for camera " + img.camera_id + " (image " +
                                            std::to_string(img.image_id) + ")");
    }
    const Image src = load_image(cfg.dataset.images / img.file_path);
    if (src.width() != it->second.width || src.height() != it->second.height) {
      throw ValidationError("roi_blur", "camera " + img.camera_id + " region size differs from image " +
                                            std::to_string(img.image_id));
    }
    save_image(blur_outside(src, masks.at(img.camera_id), cfg.blur_sigma), out.path() / "images" / img.file_path);
  });

  write_text_file(out.path() / "rois.json", write_rois(rois));
  write_text_file(out.path() / "dataset.json", write_coco(d));
  log.info("images blurred", {{"images", d.images.size()}, {"cameras", rois.size()}});
  return 0;
}

int run_report(const RunConfig &cfg, StagedOutput &out, const Logger &log) {
  std::vector<std::pair<std::string, Dataset>> loaded;
  if (cfg.report_variants.empty()) {
    loaded.emplace_back("dataset", load_dataset(cfg, log));
  } else {
    for (const auto &[name, path] : cfg.report_variants) loaded.emplace_back(name, load_coco(path));
  }
  std::vector<NamedDataset> named;
  for (const auto &[name, d] : loaded) named.emplace_back(name, &d);

  const std::string ext = extension(cfg.report_format);
  const std::string counts = emit(count_table(named), cfg.report_format);
  write_text_file(out.path() / ("counts" + ext), counts);
  for (std::size_t v = 0; v < loaded.size(); ++v) {
    write_text_file(out.path() / ("sizes_" + std::to_string(v) + ext),
                    emit(size_histogram(loaded[v].second), cfg.report_format));
  }
  std::cout << counts;
  return 0;
}

struct Flags {
  std::string config;
  std::string format, annotations, images, labels, classes;
  std::string camera_pattern;
  double lighting_threshold = 0;
  std::string lighting_overrides;
  int k = 0;
  std::vector<std::string> multipliers;
  bool no_lighting_match = false;
  bool include_same_frame = false;
  std::string overlap, class_order;
  double iou_threshold = 0;
  std::uint64_t seed = 0;
  std::uint64_t sample_seed = 0;
  std::vector<std::string> variants;
  std::string roi_mode, roi_file;
  double sigma = 0;
  int dilation = 0;
  double fraction = 0;
  int max_iters = 0;
  std::string report_format;
  std::vector<std::string> tables;
  std::string output;
  int workers = 0;
};

std::pair<std::string, std::string> split_assignment(const std::string &s, const char *flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("config", std::string(flag) + " expects NAME=VALUE, got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

int parse_int(const std::string &s, const char *flag) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::logic_error &) {
  }
  throw ValidationError("config", std::string(flag) + " value '" + s + "' is not an integer");
}

void add_shared_options(CLI::App *cmd, Flags &f) {
  cmd->add_option("-c,--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--format", f.format, "Dataset format")->check(CLI::IsMember({"coco", "yolo"}));
  cmd->add_option("--annotations", f.annotations, "COCO annotation file");
  cmd->add_option("--images", f.images, "Image root directory");
  cmd->add_option("--labels", f.labels, "YOLO label directory");
  cmd->add_option("--classes", f.classes, "YOLO class-name file");
  cmd->add_option("--camera-pattern", f.camera_pattern, "Regex with one capture group applied to file names");
  cmd->add_option("--lighting-threshold", f.lighting_threshold, "Mean luminance at or above which a frame is day");
  cmd->add_option("--lighting-overrides", f.lighting_overrides, "CSV of id,Day|Night overrides");
  cmd->add_option("-o,--output", f.output, "Output directory");
  cmd->add_option("-j,--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
}

void add_augment_options(CLI::App *cmd, Flags &f) {
  cmd->add_option("--k", f.k, "Same multiplier for every class")->check(CLI::NonNegativeNumber);
  cmd->add_option("--multiplier", f.multipliers, "CLASS=K, repeatable");
  cmd->add_flag("--no-lighting-match", f.no_lighting_match, "Allow day/night mixing");
  cmd->add_flag("--include-same-frame", f.include_same_frame, "Keep candidates from the host frame");
  cmd->add_option("--overlap", f.overlap, "Overlap predicate")->check(CLI::IsMember({"any", "iou"}));
  cmd->add_option("--iou-threshold", f.iou_threshold, "IoU above which boxes overlap (iou mode)");
  cmd->add_option("--class-order", f.class_order, "Class processing order")
      ->check(CLI::IsMember({"class_id", "shuffle"}));
  cmd->add_option("--seed", f.seed, "Placement seed");
}

json flags_to_patch(const CLI::App *cmd, const Flags &f) {
  json p = json::object();
  auto given = [&](const char *name) { return cmd->get_option_no_throw(name) && cmd->count(name) > 0; };

  if (given("--format")) p["dataset"]["format"] = f.format;
  if (given("--annotations")) p["dataset"]["annotations"] = f.annotations;
  if (given("--images")) p["dataset"]["images"] = f.images;
  if (given("--labels")) p["dataset"]["labels"] = f.labels;
  if (given("--classes")) p["dataset"]["classes"] = f.classes;
  if (given("--camera-pattern")) p["camera_pattern"] = f.camera_pattern;
  if (given("--lighting-threshold")) p["lighting"]["threshold"] = f.lighting_threshold;
  if (given("--lighting-overrides")) p["lighting"]["overrides"] = f.lighting_overrides;
  if (given("--output")) p["output"] = f.output;
  if (given("--workers")) p["workers"] = f.workers;

  if (given("--k")) p["augment"]["multipliers"] = json{{"*", f.k}};
  if (given("--multiplier")) {
    json m = p.contains("augment") && p["augment"].contains("multipliers") ? p["augment"]["multipliers"]
                                                                          : json::object();
    for (const auto &s : f.multipliers) {
      const auto [name, value] = split_assignment(s, "--multiplier");
      m[name] = parse_int(value, "--multiplier");
    }
    p["augment"]["multipliers"] = m;
  }
  if (given("--no-lighting-match")) p["augment"]["lighting_match"] = false;
  if (given("--include-same-frame")) p["augment"]["exclude_same_frame"] = false;
  if (given("--overlap")) p["augment"]["overlap"] = f.overlap;
  if (given("--iou-threshold")) p["augment"]["iou_threshold"] = f.iou_threshold;
  if (given("--class-order")) p["augment"]["class_order"] = f.class_order;
  if (given("--seed")) p["augment"]["seed"] = f.seed;

  if (given("--variant")) {
    json v = json::object();
    for (const auto &s : f.variants) {
      const auto [name, value] = split_assignment(s, "--variant");
      v[name] = parse_int(value, "--variant");
    }
    p["assemble"]["variants"] = v;
  }

  if (given("--roi-mode")) p["roi"]["mode"] = f.roi_mode;
  if (given("--rois")) p["roi"]["file"] = f.roi_file;
  if (given("--sigma")) p["roi"]["sigma"] = f.sigma;
  if (given("--dilation")) p["roi"]["dilation"] = f.dilation;

  if (given("--fraction")) p["sample"]["fraction"] = f.fraction;
  if (given("--sample-seed")) p["sample"]["seed"] = f.sample_seed;
  if (given("--max-iters")) p["sample"]["max_iters"] = f.max_iters;

  if (given("--report-format")) p["report"]["format"] = f.report_format;
  if (given("--table")) {
    json v = json::object();
    for (const auto &s : f.tables) {
      const auto [name, path] = split_assignment(s, "--table");
      v[name] = path;
    }
    p["report"]["variants"] = v;
  }
  return p;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"In-place copy-paste augmentation for stationary-camera detection datasets"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Flags f;
  std::map<std::string, int (*)(const RunConfig &, StagedOutput &, const Logger &)> handlers = {
      {"validate", run_validate}, {"index", run_index}, {"sample", run_sample}, {"augment", run_augment},
      {"assemble", run_assemble}, {"blur", run_blur},   {"report", run_report},
  };

  auto *validate_cmd = app.add_subcommand("validate", "Parse and check a dataset");
  auto *index_cmd = app.add_subcommand("index", "Tag cameras and lighting, build the candidate index");
  auto *sample_cmd = app.add_subcommand("sample", "Select a class/size-stratified image subset");
  auto *augment_cmd = app.add_subcommand("augment", "Paste same-camera objects in place");
  auto *assemble_cmd = app.add_subcommand("assemble", "Augment with a per-class multiplier variant");
  auto *blur_cmd = app.add_subcommand("blur", "Blur everything outside each camera's region of interest");
  auto *report_cmd = app.add_subcommand("report", "Per-class count tables and size histograms");

  for (auto *cmd : {validate_cmd, index_cmd, sample_cmd, augment_cmd, assemble_cmd, blur_cmd, report_cmd}) {
    add_shared_options(cmd, f);
  }
  add_augment_options(augment_cmd, f);
  add_augment_options(assemble_cmd, f);
  assemble_cmd->add_option("--variant", f.variants, "CLASS=K with K in {0,3,10,20}, repeatable");

  sample_cmd->add_option("--fraction", f.fraction, "Fraction of images to keep");
  sample_cmd->add_option("--sample-seed", f.sample_seed, "Sampling seed");
  sample_cmd->add_option("--max-iters", f.max_iters, "Maximum hill-climbing swaps");

  blur_cmd->add_option("--roi-mode", f.roi_mode, "Region shape")->check(CLI::IsMember({"hull", "union"}));
  blur_cmd->add_option("--rois", f.roi_file, "Stored regions to apply instead of computing them");
  blur_cmd->add_option("--sigma", f.sigma, "Gaussian sigma in pixels");
  blur_cmd->add_option("--dilation", f.dilation, "Region dilation in pixels");

  report_cmd->add_option("--report-format", f.report_format, "Output format")
      ->check(CLI::IsMember({"markdown", "md", "csv", "json"}));
  report_cmd->add_option("--table", f.tables, "NAME=COCO_FILE column, repeatable, in order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? 0 : kExitConfigError;
  }

  CLI::App *cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  const Logger log(name);

  RunConfig cfg;
  try {
    json doc = cli::default_config();
    fs::path base_dir = fs::current_path();
    if (!f.config.empty()) {
      const fs::path config_path = fs::absolute(f.config);
      json file_doc;
      try {
        file_doc = json::parse(read_text_file(config_path));
      } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed config file: ") + e.what(), e.byte);
      }
      cli::merge_config(doc, file_doc);
      base_dir = config_path.parent_path();
    }
    // Flags are relative to the working directory, not the config file.
    json patch = flags_to_patch(cmd, f);
    auto absolutize = [](json &j, const char *key) {
      if (j.contains(key) && j[key].is_string() && !j[key].get<std::string>().empty()) {
        j[key] = fs::absolute(j[key].get<std::string>()).lexically_normal().string();
      }
    };
    if (patch.contains("dataset")) {
      for (const char *k : {"annotations", "images", "labels", "classes"}) absolutize(patch["dataset"], k);
    }
    if (patch.contains("lighting")) absolutize(patch["lighting"], "overrides");
    if (patch.contains("roi")) absolutize(patch["roi"], "file");
    absolutize(patch, "output");
    if (patch.contains("report") && patch["report"].contains("variants")) {
      for (auto &[k, v] : patch["report"]["variants"].items()) {
        v = fs::absolute(v.get<std::string>()).lexically_normal().string();
      }
    }
    cli::merge_config(doc, patch);
    cfg = cli::resolve_config(doc, base_dir, name);
  } catch (const Error &e) {
    log.error(e.module(), e.what());
    return kExitConfigError;
  } catch (const std::exception &e) {
    log.error("config", e.what());
    return kExitConfigError;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    StagedOutput out(cfg.output);
    write_json(out.path() / "resolved_config.json", cli::to_json(cfg));
    log.info("run started", {{"output", cfg.output.string()}, {"workers", cfg.workers}, {"seed", cfg.seed}});
    const int rc = handlers.at(name)(cfg, out, log);
    if (rc == 0) out.commit();
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
    log.info("run finished", {{"exit", rc}, {"elapsed_ms", ms}});
    return rc;
  } catch (const ValidationError &e) {
    log.error(e.module(), e.what());
    return e.module() == "config" ? kExitConfigError : kExitModuleError;
  } catch (const Error &e) {
    log.error(e.module(), e.what());
    return kExitModuleError;
  } catch (const std::exception &e) {
    log.error("runtime", e.what());
    return kExitModuleError;
  }
}
