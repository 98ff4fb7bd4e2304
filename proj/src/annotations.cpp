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

#include "camaug/annotations.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "camaug/error.hpp"
#include "camaug/image.hpp"

namespace camaug {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

ValidationError invalid(const std::string &what) { return ValidationError("annotations", what); }

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Clamps `box` into a width x height frame. Returns false when nothing of
// the box remains.
bool clamp_box(BoundingBox &box, int width, int height, bool &clamped) {
  const double x0 = std::max(box.x, 0.0);
  const double y0 = std::max(box.y, 0.0);
  const double x1 = std::min(box.right(), static_cast<double>(width));
  const double y1 = std::min(box.bottom(), static_cast<double>(height));
  clamped = x0 != box.x || y0 != box.y || x1 != box.right() || y1 != box.bottom();
  if (clamped) box = BoundingBox{x0, y0, x1 - x0, y1 - y0};
  return box.valid();
}

std::string image_label(const ImageRecord &img) {
  return "image " + std::to_string(img.image_id) + " (" + img.file_path + ")";
}

bool is_image_file(const fs::path &p) {
  const std::string ext = lower(p.extension().string());
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

std::string_view to_string(Lighting lighting) {
  switch (lighting) {
    case Lighting::Day: return "day";
    case Lighting::Night: return "night";
    case Lighting::Untagged: return "untagged";
  }
  return "untagged";
}

std::string_view to_string(Origin origin) {
  return origin == Origin::Pasted ? "pasted" : "original";
}

std::optional<Lighting> parse_lighting(std::string_view text) {
  const std::string s = lower(text);
  if (s == "day") return Lighting::Day;
  if (s == "night") return Lighting::Night;
  if (s == "untagged") return Lighting::Untagged;
  return std::nullopt;
}

void validate(const Dataset &d) {
  if (d.class_names.empty()) throw invalid("dataset declares no classes");
  if (!d.category_ids.empty() && d.category_ids.size() != d.class_names.size()) {
    throw invalid("category id list does not match class list");
  }

  std::unordered_map<ImageId, const ImageRecord *> images;
  for (const auto &img : d.images) {
    if (img.width <= 0 || img.height <= 0) {
      throw invalid(image_label(img) + " has non-positive dimensions");
    }
    if (!images.emplace(img.image_id, &img).second) {
      throw invalid("duplicate image id " + std::to_string(img.image_id));
    }
  }

  std::unordered_set<InstanceId> seen;
  for (const auto &ann : d.annotations) {
    const std::string name = "annotation " + std::to_string(ann.instance_id);
    auto it = images.find(ann.image_id);
    if (it == images.end()) {
      throw invalid(name + " references unknown image id " + std::to_string(ann.image_id));
    }
    if (!seen.insert(ann.instance_id).second) throw invalid("duplicate " + name);
    if (ann.class_id < 0 || static_cast<std::size_t>(ann.class_id) >= d.class_names.size()) {
      throw invalid(name + " has class id " + std::to_string(ann.class_id) + " out of range");
    }
    if (!ann.bbox.valid()) throw invalid(name + " has non-positive bbox dimensions");
    const ImageRecord &img = *it->second;
    if (ann.bbox.x < 0 || ann.bbox.y < 0 || ann.bbox.right() > img.width ||
        ann.bbox.bottom() > img.height) {
      throw invalid(name + " lies outside " + image_label(img));
    }
  }
}

std::unordered_map<ImageId, std::size_t> image_positions(const Dataset &d) {
  std::unordered_map<ImageId, std::size_t> pos;
  pos.reserve(d.images.size());
  for (std::size_t i = 0; i < d.images.size(); ++i) pos.emplace(d.images[i].image_id, i);
  return pos;
}

std::vector<std::vector<std::size_t>> annotations_by_image(const Dataset &d) {
  const auto pos = image_positions(d);
  std::vector<std::vector<std::size_t>> out(d.images.size());
  for (std::size_t i = 0; i < d.annotations.size(); ++i) {
    out[pos.at(d.annotations[i].image_id)].push_back(i);
  }
  return out;
}

std::vector<std::size_t> class_counts(const Dataset &d) {
  std::vector<std::size_t> counts(d.class_names.size(), 0);
  for (const auto &ann : d.annotations) {
    if (ann.class_id >= 0 && static_cast<std::size_t>(ann.class_id) < counts.size()) {
      ++counts[ann.class_id];
    }
  }
  return counts;
}

Dataset parse_coco(std::string_view json_text, Diagnostics *diag) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("malformed COCO JSON: ") + e.what(), e.byte);
  }

  Dataset d;
  try {
    for (const char *key : {"images", "annotations", "categories"}) {
      if (!doc.contains(key) || !doc[key].is_array()) {
        throw invalid(std::string("COCO document lacks a '") + key + "' array");
      }
    }

    std::unordered_map<std::int64_t, int> class_of_category;
    for (const auto &cat : doc["categories"]) {
      const auto id = cat.at("id").get<std::int64_t>();
      const int index = static_cast<int>(d.class_names.size());
      if (!class_of_category.emplace(id, index).second) {
        throw invalid("duplicate category id " + std::to_string(id));
      }
      d.class_names.push_back(cat.at("name").get<std::string>());
      d.category_ids.push_back(id);
    }
    if (d.class_names.empty()) throw invalid("COCO document declares no categories");

    std::unordered_map<ImageId, std::size_t> image_pos;
    for (const auto &j : doc["images"]) {
      ImageRecord img;
      img.image_id = j.at("id").get<ImageId>();
      img.file_path = j.at("file_name").get<std::string>();
      img.width = j.at("width").get<int>();
      img.height = j.at("height").get<int>();
      img.camera_id = j.value("camera_id", std::string());
      img.frame_index = j.value("frame_index", std::int64_t{0});
      if (j.contains("lighting")) {
        const auto tag = parse_lighting(j["lighting"].get<std::string>());
        if (!tag) throw invalid(image_label(img) + " has unknown lighting tag");
        img.lighting = *tag;
      }
      if (img.width <= 0 || img.height <= 0) {
        throw invalid(image_label(img) + " has non-positive dimensions");
      }
      if (!image_pos.emplace(img.image_id, d.images.size()).second) {
        throw invalid("duplicate image id " + std::to_string(img.image_id));
      }
      d.images.push_back(std::move(img));
    }

    std::unordered_set<InstanceId> seen;
    for (const auto &j : doc["annotations"]) {
      Annotation ann;
      ann.instance_id = j.at("id").get<InstanceId>();
      const std::string name = "annotation " + std::to_string(ann.instance_id);
      if (!seen.insert(ann.instance_id).second) throw invalid("duplicate " + name);

      ann.image_id = j.at("image_id").get<ImageId>();
      auto img_it = image_pos.find(ann.image_id);
      if (img_it == image_pos.end()) {
        throw invalid(name + " references unknown image id " + std::to_string(ann.image_id));
      }
      const auto cat = j.at("category_id").get<std::int64_t>();
      auto cat_it = class_of_category.find(cat);
      if (cat_it == class_of_category.end()) {
        throw invalid(name + " references unknown category id " + std::to_string(cat));
      }
      ann.class_id = cat_it->second;

      const auto &bb = j.at("bbox");
      if (!bb.is_array() || bb.size() != 4) throw invalid(name + " bbox is not [x, y, w, h]");
      ann.bbox = {bb[0].get<double>(), bb[1].get<double>(), bb[2].get<double>(), bb[3].get<double>()};
      if (!ann.bbox.valid()) throw invalid(name + " has non-positive bbox dimensions");

      const ImageRecord &img = d.images[img_it->second];
      bool clamped = false;
      if (!clamp_box(ann.bbox, img.width, img.height, clamped)) {
        throw invalid(name + " lies entirely outside " + image_label(img));
      }
      if (clamped && diag) diag->warnings.push_back(name + " clamped to bounds of " + image_label(img));

      if (j.contains("origin") && j["origin"].get<std::string>() == "pasted") {
        ann.origin = Origin::Pasted;
      }
      if (j.contains("source_instance_id")) {
        ann.source_instance_id = j["source_instance_id"].get<InstanceId>();
      }
      d.annotations.push_back(std::move(ann));
    }
  } catch (const json::exception &e) {
    throw invalid(std::string("COCO field error: ") + e.what());
  }
  return d;
}

std::string write_coco(const Dataset &d) {
  auto category_id = [&](std::size_t cls) -> std::int64_t {
    return d.category_ids.empty() ? static_cast<std::int64_t>(cls) + 1 : d.category_ids[cls];
  };

  json doc;
  doc["images"] = json::array();
  for (const auto &img : d.images) {
    json j;
    j["id"] = img.image_id;
    j["file_name"] = img.file_path;
    j["width"] = img.width;
    j["height"] = img.height;
    if (!img.camera_id.empty()) j["camera_id"] = img.camera_id;
    j["frame_index"] = img.frame_index;
    if (img.lighting != Lighting::Untagged) j["lighting"] = std::string(to_string(img.lighting));
    doc["images"].push_back(std::move(j));
  }

  doc["annotations"] = json::array();
  for (const auto &ann : d.annotations) {
    json j;
    j["id"] = ann.instance_id;
    j["image_id"] = ann.image_id;
    j["category_id"] = category_id(static_cast<std::size_t>(ann.class_id));
    j["bbox"] = {ann.bbox.x, ann.bbox.y, ann.bbox.w, ann.bbox.h};
    j["area"] = ann.bbox.area();
    j["iscrowd"] = 0;
    if (ann.origin == Origin::Pasted) j["origin"] = "pasted";
    if (ann.source_instance_id) j["source_instance_id"] = *ann.source_instance_id;
    doc["annotations"].push_back(std::move(j));
  }

  doc["categories"] = json::array();
  json class_map = json::object();
  for (std::size_t c = 0; c < d.class_names.size(); ++c) {
    doc["categories"].push_back({{"id", category_id(c)}, {"name", d.class_names[c]}});
    class_map[std::to_string(c)] = category_id(c);
  }
  doc["class_id_map"] = std::move(class_map);
  return doc.dump(1) + "\n";
}

Dataset load_coco(const fs::path &path, Diagnostics *diag) {
  return parse_coco(read_text_file(path), diag);
}

Dataset parse_yolo(const fs::path &label_dir, const fs::path &image_dir,
                   const std::vector<std::string> &class_names, Diagnostics *diag) {
  if (class_names.empty()) throw invalid("YOLO dataset needs at least one class name");
  if (!fs::is_directory(image_dir)) throw IoError("annotations", "not a directory: " + image_dir.string());
  if (!fs::is_directory(label_dir)) throw IoError("annotations", "not a directory: " + label_dir.string());

  std::vector<fs::path> image_files;
  for (const auto &entry : fs::directory_iterator(image_dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) image_files.push_back(entry.path());
  }
  std::sort(image_files.begin(), image_files.end());

  std::set<std::string> stems;
  for (const auto &p : image_files) {
    if (!stems.insert(p.stem().string()).second) {
      throw invalid("two images share the stem '" + p.stem().string() + "'");
    }
  }
  for (const auto &entry : fs::directory_iterator(label_dir)) {
    const auto &p = entry.path();
    if (!entry.is_regular_file() || p.extension() != ".txt") continue;
    if (p.filename() == "classes.txt" && !stems.count("classes")) continue;
    if (!stems.count(p.stem().string())) {
      throw invalid("label file " + p.string() + " has no matching image");
    }
  }

  Dataset d;
  d.class_names = class_names;
  InstanceId next_instance = 1;
  for (std::size_t i = 0; i < image_files.size(); ++i) {
    const fs::path &file = image_files[i];
    ImageRecord img;
    img.image_id = static_cast<ImageId>(i) + 1;
    img.file_path = file.filename().string();
    std::tie(img.width, img.height) = image_size(file);

    const fs::path label = label_dir / (file.stem().string() + ".txt");
    if (fs::exists(label)) {
      std::ifstream in(label);
      if (!in) throw IoError("annotations", "cannot read " + label.string());
      std::string line;
      for (int lineno = 1; std::getline(in, line); ++lineno) {
        const std::string where = label.string() + ":" + std::to_string(lineno);
        std::istringstream ss(line);
        std::vector<std::string> tokens;
        for (std::string t; ss >> t;) tokens.push_back(t);
        if (tokens.empty()) continue;
        if (tokens.size() != 5) throw invalid(where + ": expected 'class cx cy w h'");

        int cls = 0;
        double v[4];
        try {
          std::size_t used = 0;
          cls = std::stoi(tokens[0], &used);
          if (used != tokens[0].size()) throw std::invalid_argument("class");
          for (int k = 0; k < 4; ++k) {
            v[k] = std::stod(tokens[k + 1], &used);
            if (used != tokens[k + 1].size()) throw std::invalid_argument("coord");
          }
        } catch (const std::logic_error &) {
          throw invalid(where + ": unparsable number");
        }
        if (cls < 0 || static_cast<std::size_t>(cls) >= class_names.size()) {
          throw invalid(where + ": class id " + tokens[0] + " out of range");
        }
        static constexpr const char *kNames[] = {"cx", "cy", "w", "h"};
        for (int k = 0; k < 4; ++k) {
          if (!(v[k] >= 0.0 && v[k] <= 1.0)) {
            throw invalid(where + ": " + kNames[k] + " = " + tokens[k + 1] + " outside [0, 1]");
          }
        }
        if (v[2] <= 0.0 || v[3] <= 0.0) throw invalid(where + ": non-positive box size");

        const double bw = v[2] * img.width;
        const double bh = v[3] * img.height;
        BoundingBox box{v[0] * img.width - bw / 2.0, v[1] * img.height - bh / 2.0, bw, bh};
        bool clamped = false;
        if (!clamp_box(box, img.width, img.height, clamped)) {
          throw invalid(where + ": box lies outside the image");
        }
        if (clamped && diag) diag->warnings.push_back(where + ": box clamped to image bounds");

        Annotation ann;
        ann.image_id = img.image_id;
        ann.class_id = cls;
        ann.bbox = box;
        ann.instance_id = next_instance++;
        d.annotations.push_back(ann);
      }
    }
    d.images.push_back(std::move(img));
  }
  return d;
}

void write_yolo(const Dataset &d, const fs::path &out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("annotations", "cannot create " + out_dir.string() + ": " + ec.message());

  const auto groups = annotations_by_image(d);
  char buf[160];
  for (std::size_t i = 0; i < d.images.size(); ++i) {
    const ImageRecord &img = d.images[i];
    std::string text;
    for (std::size_t a : groups[i]) {
      const Annotation &ann = d.annotations[a];
      const double cx = (ann.bbox.x + ann.bbox.w / 2.0) / img.width;
      const double cy = (ann.bbox.y + ann.bbox.h / 2.0) / img.height;
      std::snprintf(buf, sizeof buf, "%d %.6f %.6f %.6f %.6f\n", ann.class_id, cx, cy,
                    ann.bbox.w / img.width, ann.bbox.h / img.height);
      text += buf;
    }
    write_text_file(out_dir / fs::path(img.file_path).replace_extension(".txt"), text);
  }

  std::string names;
  for (const auto &n : d.class_names) names += n + "\n";
  write_text_file(out_dir / "classes.txt", names);
}

std::vector<std::string> load_class_names(const fs::path &path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::string> names;
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (!line.empty()) names.push_back(line);
  }
  return names;
}

std::string read_text_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("io", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path &path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("io", "cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("io", "short write to " + path.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("io", "cannot move " + tmp.string() + " into place: " + ec.message());
}

}  // namespace camaug
