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

#include "camaug/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "camaug/error.hpp"
#include "camaug/rng.hpp"

namespace camaug {

namespace {

// L1 distance between counts/total and the target proportions. An empty
// subset has all-zero proportions.
double distance_to(std::span<const double> counts, double total, std::span<const double> target) {
  double d = 0.0;
  for (std::size_t s = 0; s < target.size(); ++s) {
    const double share = total > 0.0 ? counts[s] / total : 0.0;
    d += std::abs(share - target[s]);
  }
  return d;
}

}  // namespace

StratumProfile profile(const Dataset &d) {
  if (d.annotations.empty()) throw ValidationError("sampler", "cannot profile a dataset with no annotations");
  std::map<Stratum, std::size_t> counts;
  for (const auto &ann : d.annotations) ++counts[{ann.class_id, size_bucket(ann.bbox)}];
  StratumProfile p;
  const double total = static_cast<double>(d.annotations.size());
  for (const auto &[s, n] : counts) p.proportions[s] = static_cast<double>(n) / total;
  return p;
}

double l1_distance(const StratumProfile &a, const StratumProfile &b) {
  double d = 0.0;
  for (const auto &[s, v] : a.proportions) d += std::abs(v - b.at(s));
  for (const auto &[s, v] : b.proportions) {
    if (!a.proportions.count(s)) d += std::abs(v);
  }
  return d;
}

Dataset subset_of(const Dataset &d, const std::vector<ImageId> &ids) {
  const std::unordered_set<ImageId> keep(ids.begin(), ids.end());
  Dataset out;
  out.class_names = d.class_names;
  out.category_ids = d.category_ids;
  for (const auto &img : d.images) {
    if (keep.count(img.image_id)) out.images.push_back(img);
  }
  for (const auto &ann : d.annotations) {
    if (keep.count(ann.image_id)) out.annotations.push_back(ann);
  }
  return out;
}

SampleResult stratified_sample(const Dataset &d, double fraction, std::uint64_t seed, int max_iters) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ValidationError("sampler", "sample fraction must lie in (0, 1]");
  }
  const std::size_t n_images = d.images.size();
  const auto target_size = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n_images)));
  if (target_size < 1) {
    throw ValidationError("sampler", "fraction " + std::to_string(fraction) + " of " + std::to_string(n_images) +
                                         " images selects no image");
  }
  if (max_iters < 0) throw ValidationError("sampler", "max_iters must be non-negative");

  const StratumProfile full = profile(d);
  std::map<Stratum, std::size_t> stratum_index;
  std::vector<double> target;
  for (const auto &[s, v] : full.proportions) {
    stratum_index.emplace(s, target.size());
    target.push_back(v);
  }
  const std::size_t n_strata = target.size();

  // Dense per-image stratum counts.
  const auto pos = image_positions(d);
  std::vector<double> image_counts(n_images * n_strata, 0.0);
  std::vector<double> image_totals(n_images, 0.0);
  for (const auto &ann : d.annotations) {
    const std::size_t i = pos.at(ann.image_id);
    image_counts[i * n_strata + stratum_index.at({ann.class_id, size_bucket(ann.bbox)})] += 1.0;
    image_totals[i] += 1.0;
  }
  auto counts_of = [&](std::size_t i) {
    return std::span<const double>(&image_counts[i * n_strata], n_strata);
  };

  std::vector<std::size_t> order(n_images);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<std::size_t> selected(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(target_size));
  std::vector<std::size_t> unselected(order.begin() + static_cast<std::ptrdiff_t>(target_size), order.end());
  std::sort(selected.begin(), selected.end());
  std::sort(unselected.begin(), unselected.end());

  std::vector<double> counts(n_strata, 0.0);
  double total = 0.0;
  for (std::size_t i : selected) {
    const auto c = counts_of(i);
    for (std::size_t s = 0; s < n_strata; ++s) counts[s] += c[s];
    total += image_totals[i];
  }

  SampleResult result;
  double current = distance_to(counts, total, target);
  result.trace.push_back(current);

  std::vector<double> trial(n_strata);
  for (int iter = 0; iter < max_iters && current > 0.0; ++iter) {
    double best = current;
    std::size_t best_out = 0;
    std::size_t best_in = 0;
    bool found = false;
    for (std::size_t a = 0; a < selected.size(); ++a) {
      const auto out_c = counts_of(selected[a]);
      const double out_t = image_totals[selected[a]];
      for (std::size_t b = 0; b < unselected.size(); ++b) {
        const auto in_c = counts_of(unselected[b]);
        for (std::size_t s = 0; s < n_strata; ++s) trial[s] = counts[s] - out_c[s] + in_c[s];
        const double dist = distance_to(trial, total - out_t + image_totals[unselected[b]], target);
        if (dist < best) {
          best = dist;
          best_out = a;
          best_in = b;
          found = true;
        }
      }
    }
    if (!found) break;

    const std::size_t out_img = selected[best_out];
    const std::size_t in_img = unselected[best_in];
    const auto out_c = counts_of(out_img);
    const auto in_c = counts_of(in_img);
    for (std::size_t s = 0; s < n_strata; ++s) counts[s] += in_c[s] - out_c[s];
    total += image_totals[in_img] - image_totals[out_img];
    selected[best_out] = in_img;
    unselected[best_in] = out_img;

    // Counts are integral, so this reproduces `best` exactly.
    current = distance_to(counts, total, target);
    result.trace.push_back(current);
  }

  std::sort(selected.begin(), selected.end());
  for (std::size_t i : selected) result.image_ids.push_back(d.images[i].image_id);
  result.subset = subset_of(d, result.image_ids);
  result.distance = current;
  return result;
}

}  // namespace camaug
