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
#include <map>
#include <utility>
#include <vector>

#include "camaug/annotations.hpp"
#include "camaug/indexer.hpp"

namespace camaug {

inline constexpr double kDefaultSampleFraction = 0.085;

using Stratum = std::pair<int, SizeBucket>;

/// Share of objects per (class, size bucket). Only non-empty strata appear.
struct StratumProfile {
  std::map<Stratum, double> proportions;

  double at(const Stratum &s) const {
    auto it = proportions.find(s);
    return it == proportions.end() ? 0.0 : it->second;
  }
};

/// Throws ValidationError when the dataset has no annotations.
StratumProfile profile(const Dataset &d);

/// Sum over the union of strata of |a - b|.
double l1_distance(const StratumProfile &a, const StratumProfile &b);

struct SampleResult {
  std::vector<ImageId> image_ids;  // dataset order
  Dataset subset;
  double distance = 0.0;
  // Objective after initialization, then after each accepted swap.
  std::vector<double> trace;
};

/// Keeps whole images. Starts from a seeded random subset of
/// round(fraction * N) images, then repeatedly applies the single swap
/// (one selected image out, one unselected in) that lowers the L1 distance
/// to the full dataset's profile the most, stopping at a local optimum or
/// after `max_iters` swaps.
SampleResult stratified_sample(const Dataset &d, double fraction, std::uint64_t seed, int max_iters = 1000);

/// The images listed in `ids`, with their annotations, in dataset order.
Dataset subset_of(const Dataset &d, const std::vector<ImageId> &ids);

}  // namespace camaug
