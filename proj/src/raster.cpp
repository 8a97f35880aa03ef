#include "bev/raster.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <string>

#include "bev/errors.hpp"

namespace bev {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

RasterImage read_png(const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw IoError("cannot read PNG " + path.string() + ": " + img.message);
  }
  int channels = 3;
  if (img.format & PNG_FORMAT_FLAG_ALPHA) {
    img.format = PNG_FORMAT_RGBA;
    channels = 4;
  } else if (img.format & PNG_FORMAT_FLAG_COLOR) {
    img.format = PNG_FORMAT_RGB;
  } else {
    img.format = PNG_FORMAT_GRAY;
    channels = 1;
  }
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, data.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw IoError("cannot decode PNG " + path.string() + ": " + msg);
  }
  return RasterImage(static_cast<int>(img.width), static_cast<int>(img.height), channels, std::move(data));
}

void write_png(const RasterImage& image, const std::filesystem::path& path) {
  png_image img;
  std::memset(&img, 0, sizeof img);
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  switch (image.channels()) {
    case 1: img.format = PNG_FORMAT_GRAY; break;
    case 3: img.format = PNG_FORMAT_RGB; break;
    case 4: img.format = PNG_FORMAT_RGBA; break;
    default: throw IoError("unsupported channel count for PNG");
  }
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.data().data(), 0, nullptr)) {
    throw IoError("cannot write PNG " + path.string() + ": " + img.message);
  }
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int ch = 0;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {}
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

RasterImage read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pnm_token(in);
  int channels = 0;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    throw IoError("unsupported PNM variant in " + path.string());
  }
  int width = 0;
  int height = 0;
  int maxval = 0;
  try {
    width = std::stoi(pnm_token(in));
    height = std::stoi(pnm_token(in));
    maxval = std::stoi(pnm_token(in));
  } catch (const std::exception&) {
    throw IoError("malformed PNM header in " + path.string());
  }
  if (width <= 0 || height <= 0 || maxval != 255) throw IoError("unsupported PNM geometry or depth in " + path.string());
  std::vector<std::uint8_t> data(static_cast<std::size_t>(width) * height * channels);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (in.gcount() != static_cast<std::streamsize>(data.size())) throw IoError("truncated PNM data in " + path.string());
  return RasterImage(width, height, channels, std::move(data));
}

void write_pnm(const RasterImage& image, const std::filesystem::path& path, int channels) {
  if (image.channels() != channels) {
    throw IoError(path.string() + ": " + std::to_string(image.channels()) + "-channel image cannot be written as " +
                  (channels == 1 ? "PGM" : "PPM"));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << (channels == 1 ? "P5" : "P6") << '\n' << image.width() << ' ' << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data().data()), static_cast<std::streamsize>(image.data().size()));
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

RasterImage::RasterImage(int width, int height, int channels, std::uint8_t fill)
    : RasterImage(width, height, channels,
                  std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0) *
                                                std::max(channels, 0),
                                            fill)) {}

RasterImage::RasterImage(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  if (width < 1 || height < 1) throw IoError("image dimensions must be >= 1");
  if (channels != 1 && channels != 3 && channels != 4) throw IoError("image must have 1, 3 or 4 channels");
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) throw IoError("image buffer size mismatch");
}

RasterImage read_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("cannot open " + path.string());
  char magic[8] = {};
  probe.read(magic, sizeof magic);
  probe.close();
  static constexpr unsigned char kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (std::memcmp(magic, kPngSignature, sizeof kPngSignature) == 0) return read_png(path);
  if (magic[0] == 'P') return read_pnm(path);
  throw IoError("unrecognised image format: " + path.string());
}

void write_image(const RasterImage& image, const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") {
    write_png(image, path);
  } else if (ext == ".pgm") {
    write_pnm(image, path, 1);
  } else if (ext == ".ppm") {
    write_pnm(image, path, 3);
  } else {
    throw IoError("unsupported output extension '" + ext + "' (use .png, .pgm or .ppm)");
  }
}

}  // namespace bev
