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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace camaug {

/// 8-bit interleaved RGB raster.
class Image {
 public:
  static constexpr int kChannels = 3;

  Image() = default;
  Image(int width, int height, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t *pixel(int row, int col) {
    return &pixels_[(static_cast<std::size_t>(row) * width_ + col) * kChannels];
  }
  const std::uint8_t *pixel(int row, int col) const {
    return &pixels_[(static_cast<std::size_t>(row) * width_ + col) * kChannels];
  }

  std::span<std::uint8_t> data() { return pixels_; }
  std::span<const std::uint8_t> data() const { return pixels_; }

  friend bool operator==(const Image &, const Image &) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Pixel rectangle [col0, col1) x [row0, row1).
struct PixelRect {
  int col0 = 0;
  int row0 = 0;
  int col1 = 0;
  int row1 = 0;

  bool empty() const { return col1 <= col0 || row1 <= row0; }
  bool contains(int row, int col) const {
    return row >= row0 && row < row1 && col >= col0 && col < col1;
  }
};

/// Copies `rect` from `src` into `dst` at the same coordinates. Both images
/// must share dimensions.
void copy_rect(const Image &src, Image &dst, const PixelRect &rect);

/// Decodes PNG or JPEG (anything imgcodecs reads). Grayscale and alpha
/// inputs are converted to RGB. Throws IoError.
Image load_image(const std::filesystem::path &path);

/// Reads only the dimensions. Throws IoError.
std::pair<int, int> image_size(const std::filesystem::path &path);

/// Encodes by file extension. PNG is lossless. Creates parent directories.
void save_image(const Image &image, const std::filesystem::path &path);

}  // namespace camaug
