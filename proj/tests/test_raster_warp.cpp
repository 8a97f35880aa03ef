#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "bev/errors.hpp"
#include "bev/raster.hpp"
#include "bev/warp.hpp"

using namespace bev;
namespace fs = std::filesystem;

namespace {

RasterImage noise_image(int w, int h, int channels, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * channels);
  for (auto& v : data) v = static_cast<std::uint8_t>(rng() & 0xff);
  return {w, h, channels, std::move(data)};
}

fs::path tmp(const std::string& name) {
  const fs::path dir = fs::path(BEV_TEST_TMPDIR) / "raster";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("raster construction") {
  const RasterImage img(3, 2, 3, 7);
  CHECK(img.width() == 3);
  CHECK(img.row(1).size() == 9);
  CHECK(img.at(2, 1, 2) == 7);
  CHECK_THROWS_AS(RasterImage(2, 2, 2), IoError);
  CHECK_THROWS_AS(RasterImage(2, 2, 1, std::vector<std::uint8_t>(3)), IoError);
}

TEST_CASE("image files round trip") {
  for (int channels : {1, 3, 4}) {
    const RasterImage img = noise_image(37, 23, channels, 10u + static_cast<unsigned>(channels));
    const fs::path p = tmp("noise" + std::to_string(channels) + ".png");
    write_image(img, p);
    CHECK(read_image(p) == img);
  }
  const RasterImage gray = noise_image(19, 11, 1, 3);
  write_image(gray, tmp("g.pgm"));
  CHECK(read_image(tmp("g.pgm")) == gray);
  const RasterImage rgb = noise_image(19, 11, 3, 4);
  write_image(rgb, tmp("c.ppm"));
  CHECK(read_image(tmp("c.ppm")) == rgb);

  // Content decides the format, not the extension.
  fs::copy_file(tmp("c.ppm"), tmp("c_actually_ppm.png"), fs::copy_options::overwrite_existing);
  CHECK(read_image(tmp("c_actually_ppm.png")) == rgb);

  CHECK_THROWS_AS(write_image(rgb, tmp("c.pgm")), IoError);
  CHECK_THROWS_AS(write_image(rgb, tmp("c.bmp")), IoError);
  CHECK_THROWS_AS((void)read_image(tmp("missing.png")), IoError);
  std::ofstream(tmp("junk.png")) << "not an image";
  CHECK_THROWS_AS((void)read_image(tmp("junk.png")), IoError);
}

TEST_CASE("warp") {
  const RasterImage src = noise_image(64, 48, 3, 99);

  SUBCASE("identity is byte exact in both sampling modes") {
    for (Sampling mode : {Sampling::Bilinear, Sampling::Nearest}) {
      WarpSpec spec;
      spec.width = 64;
      spec.height = 48;
      spec.mode = mode;
      CHECK(warp(src, spec) == src);
    }
  }

  SUBCASE("quarter turn moves pixels exactly") {
    Mat3 m;
    m << 0, -1, 48, 1, 0, 0, 0, 0, 1;
    WarpSpec spec;
    spec.H = Homography(m);
    spec.width = 48;
    spec.height = 64;
    spec.mode = Sampling::Nearest;
    const RasterImage out = warp(src, spec);
    bool same = true;
    for (int y = 0; y < 48; ++y)
      for (int x = 0; x < 64; ++x)
        for (int c = 0; c < 3; ++c) same = same && out.at(47 - y, x, c) == src.at(x, y, c);
    CHECK(same);
  }

  SUBCASE("bilinear halfway between two pixels averages them") {
    RasterImage two(2, 1, 1);
    two.at(0, 0) = 10;
    two.at(1, 0) = 30;
    Mat3 m;
    m << 1, 0, 0.5, 0, 1, 0, 0, 0, 1;
    WarpSpec spec;
    spec.H = Homography(m);
    spec.width = 4;
    spec.height = 1;
    spec.fill = 200;
    const RasterImage out = warp(two, spec);
    CHECK(out.at(0, 0) == 10);
    CHECK(out.at(1, 0) == 20);
    CHECK(out.at(2, 0) == 30);
    CHECK(out.at(3, 0) == 200);
  }

  SUBCASE("thread count does not change the result") {
    Mat3 m;
    m << 1.3, 0.2, -5, -0.1, 0.9, 4, 0.001, 0.0005, 1;
    WarpSpec spec;
    spec.H = Homography(m);
    spec.width = 90;
    spec.height = 77;
    spec.threads = 1;
    const RasterImage one = warp(src, spec);
    for (unsigned t : {2u, 3u, 8u, 0u}) {
      spec.threads = t;
      CHECK(warp(src, spec) == one);
    }
  }

  SUBCASE("alpha marks unmapped pixels and retained half-plane") {
    WarpSpec spec;
    spec.width = 80;
    spec.height = 48;
    spec.alpha_output = true;
    spec.fill = 9;
    spec.retained = HomogeneousLine(1, 0, -20);  // keep x >= 20 in the source
    const RasterImage out = warp(noise_image(64, 48, 1, 5), spec);
    REQUIRE(out.channels() == 4);
    CHECK(out.at(5, 10, 3) == 0);
    CHECK(out.at(5, 10, 0) == 9);
    CHECK(out.at(30, 10, 3) == 255);
    CHECK(out.at(70, 10, 3) == 0);
  }

  SUBCASE("invalid inputs") {
    WarpSpec spec;
    spec.H = Homography(Mat3::Zero());
    try {
      (void)warp(src, spec);
      FAIL("expected SingularH");
    } catch (const GeometryError& e) {
      CHECK(e.code() == ErrorCode::SingularH);
    }
    WarpSpec empty;
    empty.width = 0;
    CHECK_THROWS_AS((void)warp(src, empty), GeometryError);
    CHECK_THROWS_AS((void)warp(RasterImage{}, WarpSpec{}), GeometryError);
  }
}
