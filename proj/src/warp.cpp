#include "bev/warp.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace bev {

namespace {

struct RowContext {
  const RasterImage& src;
  const WarpSpec& spec;
  Mat3 inv;
  Vec3 keep{0.0, 0.0, 0.0};
  bool has_keep{false};
  int out_channels{0};
};

void warp_rows(const RowContext& ctx, RasterImage& dst, int y0, int y1) {
  const RasterImage& src = ctx.src;
  const int sc = src.channels();
  const int w = src.width();
  const int h = src.height();
  const double fw = w;
  const double fh = h;
  const bool alpha_extra = ctx.out_channels > sc;

  for (int y = y0; y < y1; ++y) {
    std::span<std::uint8_t> row = dst.row(y);
    const double cy = y + 0.5;
    // Homogeneous source point at canvas (0.5, cy); stepping x by one adds inv.col(0).
    Vec3 p = ctx.inv.col(0) * 0.5 + ctx.inv.col(1) * cy + ctx.inv.col(2);
    const Vec3 step = ctx.inv.col(0);
    for (int x = 0; x < dst.width(); ++x, p += step) {
      std::uint8_t* out = row.data() + static_cast<std::size_t>(x) * ctx.out_channels;
      const double pw = p.z();
      bool mapped = pw > 0.0;
      double sx = 0.0;
      double sy = 0.0;
      if (mapped) {
        sx = p.x() / pw;
        sy = p.y() / pw;
        mapped = sx >= 0.0 && sx <= fw && sy >= 0.0 && sy <= fh;
        if (mapped && ctx.has_keep) mapped = ctx.keep.x() * sx + ctx.keep.y() * sy + ctx.keep.z() >= 0.0;
      }
      if (!mapped) {
        for (int c = 0; c < ctx.out_channels; ++c) out[c] = ctx.spec.fill;
        if (ctx.spec.alpha_output) out[ctx.out_channels - 1] = 0;
        continue;
      }
      if (ctx.spec.mode == Sampling::Nearest) {
        const int ix = std::min(static_cast<int>(sx), w - 1);
        const int iy = std::min(static_cast<int>(sy), h - 1);
        for (int c = 0; c < sc; ++c) out[c] = src.at(ix, iy, c);
      } else {
        // Sample grid is at pixel centres; clamp to the border.
        const double gx = std::clamp(sx - 0.5, 0.0, fw - 1.0);
        const double gy = std::clamp(sy - 0.5, 0.0, fh - 1.0);
        const int x0 = static_cast<int>(gx);
        const int y0s = static_cast<int>(gy);
        const int x1 = std::min(x0 + 1, w - 1);
        const int y1s = std::min(y0s + 1, h - 1);
        const double ax = gx - x0;
        const double ay = gy - y0s;
        for (int c = 0; c < sc; ++c) {
          const double top = (1.0 - ax) * src.at(x0, y0s, c) + ax * src.at(x1, y0s, c);
          const double bot = (1.0 - ax) * src.at(x0, y1s, c) + ax * src.at(x1, y1s, c);
          const double v = (1.0 - ay) * top + ay * bot;
          out[c] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
      }
      if (alpha_extra) out[ctx.out_channels - 1] = 255;
    }
  }
}

}  // namespace

RasterImage warp(const RasterImage& src, const WarpSpec& spec) {
  if (src.empty()) throw GeometryError(ErrorCode::InvalidArgument, "source image is empty");
  if (spec.width < 1 || spec.height < 1) throw GeometryError(ErrorCode::InvalidArgument, "canvas dimensions must be >= 1");

  RowContext ctx{src, spec, spec.H.inverse().m};
  if (spec.retained) {
    ctx.keep = spec.retained->v;
    ctx.has_keep = true;
  }
  // An existing alpha channel is carried through; otherwise one is appended on request.
  ctx.out_channels = src.channels() + ((spec.alpha_output && src.channels() != 4) ? 1 : 0);
  if (spec.alpha_output && src.channels() == 1) ctx.out_channels = 2;
  if (ctx.out_channels == 2) {
    // Gray + alpha is not a supported raster layout; expand to RGBA.
    RasterImage rgb(src.width(), src.height(), 3);
    for (int y = 0; y < src.height(); ++y)
      for (int x = 0; x < src.width(); ++x)
        for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = src.at(x, y);
    WarpSpec s = spec;
    return warp(rgb, s);
  }

  RasterImage dst(spec.width, spec.height, ctx.out_channels);
  unsigned threads = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : spec.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(spec.height));
  if (threads <= 1) {
    warp_rows(ctx, dst, 0, spec.height);
    return dst;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (spec.height + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const int y0 = static_cast<int>(t) * chunk;
    const int y1 = std::min(spec.height, y0 + chunk);
    if (y0 >= y1) break;
    pool.emplace_back([&ctx, &dst, y0, y1] { warp_rows(ctx, dst, y0, y1); });
  }
  for (std::thread& th : pool) th.join();
  return dst;
}

}  // namespace bev
