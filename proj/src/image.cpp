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

#include "camaug/image.hpp"

#include <algorithm>
#include <cstring>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "camaug/error.hpp"

namespace camaug {

Image::Image(int width, int height, std::uint8_t fill)
    : width_(width),
      height_(height),
      pixels_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * kChannels, fill) {}

void copy_rect(const Image &src, Image &dst, const PixelRect &rect) {
  if (src.width() != dst.width() || src.height() != dst.height()) {
    throw IoError("image", "copy_rect: source and destination sizes differ");
  }
  const int c0 = std::max(rect.col0, 0);
  const int c1 = std::min(rect.col1, src.width());
  const int r0 = std::max(rect.row0, 0);
  const int r1 = std::min(rect.row1, src.height());
  if (c1 <= c0 || r1 <= r0) return;
  const std::size_t span = static_cast<std::size_t>(c1 - c0) * Image::kChannels;
  for (int row = r0; row < r1; ++row) {
    std::memcpy(dst.pixel(row, c0), src.pixel(row, c0), span);
  }
}

Image load_image(const std::filesystem::path &path) {
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (mat.empty()) throw IoError("image", "cannot decode image: " + path.string());
  if (mat.depth() != CV_8U) mat.convertTo(mat, CV_8U);

  Image out(mat.cols, mat.rows);
  for (int row = 0; row < mat.rows; ++row) {
    const auto *src = mat.ptr<std::uint8_t>(row);
    std::uint8_t *dst = out.pixel(row, 0);
    for (int col = 0; col < mat.cols; ++col) {
      dst[3 * col + 0] = src[3 * col + 2];
      dst[3 * col + 1] = src[3 * col + 1];
      dst[3 * col + 2] = src[3 * col + 0];
    }
  }
  return out;
}

std::pair<int, int> image_size(const std::filesystem::path &path) {
  // imgcodecs has no header-only probe; decode at reduced cost for JPEG.
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw IoError("image", "cannot decode image: " + path.string());
  return {mat.cols, mat.rows};
}

void save_image(const Image &image, const std::filesystem::path &path) {
  cv::Mat mat(image.height(), image.width(), CV_8UC3);
  for (int row = 0; row < image.height(); ++row) {
    const std::uint8_t *src = image.pixel(row, 0);
    auto *dst = mat.ptr<std::uint8_t>(row);
    for (int col = 0; col < image.width(); ++col) {
      dst[3 * col + 0] = src[3 * col + 2];
      dst[3 * col + 1] = src[3 * col + 1];
      dst[3 * col + 2] = src[3 * col + 0];
    }
  }
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat);
  } catch (const cv::Exception &e) {
    throw IoError("image", "cannot write image " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("image", "cannot write image: " + path.string());
}

}  // namespace camaug
