#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace bev {

/// 8-bit interleaved image, row-major, 1, 3 or 4 channels. Pixel (x, y) has its
/// centre at (x + 0.5, y + 0.5).
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, std::uint8_t fill = 0);
  RasterImage(int width, int height, int channels, std::vector<std::uint8_t> data);

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] int channels() const { return channels_; }
  [[nodiscard]] bool empty() const { return data_.empty(); }

  [[nodiscard]] std::uint8_t at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }

  [[nodiscard]] std::span<const std::uint8_t> row(int y) const {
    return {data_.data() + static_cast<std::size_t>(y) * width_ * channels_, static_cast<std::size_t>(width_) * channels_};
  }
  [[nodiscard]] std::span<std::uint8_t> row(int y) {
    return {data_.data() + static_cast<std::size_t>(y) * width_ * channels_, static_cast<std::size_t>(width_) * channels_};
  }
  [[nodiscard]] const std::vector<std::uint8_t>& data() const { return data_; }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  [[nodiscard]] std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_{0};
  int height_{0};
  int channels_{0};
  std::vector<std::uint8_t> data_;
};

/// Reads PNG, binary PGM (P5) or binary PPM (P6); dispatch on file content.
RasterImage read_image(const std::filesystem::path& path);
/// Writes by extension: .png, .pgm (1 channel) or .ppm (3 channels).
void write_image(const RasterImage& image, const std::filesystem::path& path);

}  // namespace bev
