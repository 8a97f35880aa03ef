#include <doctest.h>

#include <functional>
#include <random>

#include "bev/rectify.hpp"
#include "bev/sphere_codec.hpp"
#include "oracles.hpp"

using namespace bev;
using oracle::deg;

namespace {

struct Scene {
  oracle::Camera cam;
  HomogeneousLine horizon;
  HomogeneousPoint vz;
  HomogeneousPoint vx;
  ImageSize image;
};

Scene scene_of(const oracle::Camera& cam) {
  Scene s;
  s.cam = cam;
  const oracle::V3 vx = cam.vanishing(oracle::V3::UnitX());
  const oracle::V3 vy = cam.vanishing(oracle::V3::UnitY());
  s.horizon = HomogeneousLine(vx.cross(vy));
  s.vz = HomogeneousPoint(cam.vanishing(oracle::V3::UnitZ()));
  s.vx = HomogeneousPoint(vx);
  s.image = {cam.w, cam.h};
  return s;
}

// 5 x 5 ground grid with 1 m spacing centred where the optical axis meets the ground.
std::vector<oracle::V2> ground_grid(const oracle::Camera& cam) {
  const oracle::V3 axis = cam.R().row(2).transpose();
  const double t = cam.height / -axis.z();
  const oracle::V2 centre = (cam.centre() + t * axis).head<2>();
  std::vector<oracle::V2> g;
  for (int j = -2; j <= 2; ++j)
    for (int i = -2; i <= 2; ++i) g.push_back(centre + oracle::V2(i, j));
  return g;
}

std::vector<oracle::V2> map_grid(const oracle::Camera& cam, const std::vector<oracle::V2>& world, const Mat3& h) {
  std::vector<oracle::V2> out;
  for (const oracle::V2& w : world) {
    const oracle::V3 x = cam.project_h(oracle::V3(w.x(), w.y(), 0.0));
    out.push_back((h * x).hnormalized());
  }
  return out;
}

oracle::Camera example_camera() { return {500.0, 1000, 1000, deg(30), 0.0, 0.0, 2.0}; }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e.code();
  }
  FAIL("no GeometryError raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("focal length and field of view") {
  CHECK(focal_from_fov(deg(90), 1000) == doctest::Approx(500.0).epsilon(1e-15));
  CHECK(fov_from_focal(500, 1000) == doctest::Approx(deg(90)).epsilon(1e-15));
  // 500 / tan(57.5 deg) = 318.53; the value is often quoted as 318.50.
  CHECK(focal_from_fov(deg(115), 1000) == doctest::Approx(318.53).epsilon(2e-5));
  CHECK(code_of([] { (void)focal_from_fov(deg(180), 1000); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("focal_from_horizon_and_vp") {
  SUBCASE("example camera") {
    const Scene s = scene_of(example_camera());
    CHECK(s.vz.euclidean().isApprox(Vec2(500, 1366.0254037844386), 1e-12));
    CHECK(s.horizon.normalized().v.z() == doctest::Approx(-211.32486540518713).epsilon(1e-12));
    const FocalEstimate est = focal_from_horizon_and_vp(s.horizon, s.vz, s.image);
    CHECK(est.focal == doctest::Approx(500.0).epsilon(1e-12));
    CHECK(est.collinear());
    // The rounded published values.
    const FocalEstimate rounded =
        focal_from_horizon_and_vp(HomogeneousLine(0, 1, -211.325), HomogeneousPoint(500, 1366.025), {1000, 1000});
    CHECK(rounded.focal == doctest::Approx(500.0).epsilon(1e-5));
  }

  SUBCASE("45 degree tilt recovers f exactly") {
    for (double f : {120.0, 500.0, 2400.0}) {
      const FocalEstimate est = focal_from_horizon_and_vp(HomogeneousLine(0, 1, -(400 - f)),
                                                          HomogeneousPoint(600, 400 + f), {1200, 800});
      CHECK(est.focal == doctest::Approx(f).epsilon(1e-15));
    }
  }

  SUBCASE("10^3 random cameras") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      oracle::Camera cam{focal_from_fov(deg(15 + 100 * u(rng)), 1280), 1280, 720, deg(40) - u(rng) * deg(35),
                         deg(-20 + 40 * u(rng)), deg(360 * u(rng)), 3.0};
      const Scene s = scene_of(cam);
      worst = std::max(worst, std::abs(focal_from_horizon_and_vp(s.horizon, s.vz, s.image).focal / cam.f - 1.0));
    }
    CHECK(worst < 1e-9);
  }

  SUBCASE("inconsistent inputs") {
    const ImageSize img{1000, 1000};
    CHECK(code_of([&] { (void)focal_from_horizon_and_vp(HomogeneousLine(0, 1, -200), HomogeneousPoint(500, 100), img); }) ==
          ErrorCode::SameSide);
    CHECK(code_of([&] {
            (void)focal_from_horizon_and_vp(HomogeneousLine(0, 1, -500), HomogeneousPoint::at_infinity(0, 1), img);
          }) == ErrorCode::VzAtInfinity);
    const FocalEstimate skew =
        focal_from_horizon_and_vp(HomogeneousLine(0, 1, -200), HomogeneousPoint(700, 1300), img);
    CHECK_FALSE(skew.collinear());
    CHECK(skew.collinearity_residual == doctest::Approx(std::atan2(200.0, 800.0)).epsilon(1e-12));
  }
}

TEST_CASE("roll_from_horizon") {
  CHECK(roll_from_horizon(HomogeneousLine(0, 1, -211.325)) == 0.0);
  const double a = std::sin(deg(5));
  const double b = std::cos(deg(5));
  CHECK(roll_from_horizon(HomogeneousLine(a, b, -300)) == doctest::Approx(-deg(5)).epsilon(1e-14));
  CHECK(roll_from_horizon(HomogeneousLine(-a, -b, 300)) == doctest::Approx(-deg(5)).epsilon(1e-14));
  CHECK(code_of([] { (void)roll_from_horizon(HomogeneousLine(1, 0, -3)); }) == ErrorCode::VerticalHorizon);

  std::mt19937_64 rng(22);
  std::normal_distribution<double> roll(0.0, deg(5));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    oracle::Camera cam{600, 1280, 720, deg(20), std::clamp(roll(rng), -deg(30), deg(30)), 0.4, 2.0};
    worst = std::max(worst, std::abs(roll_from_horizon(scene_of(cam).horizon) - cam.roll));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("tilt estimators") {
  const Vec2 p(500, 500);
  CHECK(tilt_from_vertical_vp(500, HomogeneousPoint(500, 1000), p) == doctest::Approx(deg(45)).epsilon(1e-15));
  CHECK(tilt_from_vertical_vp(500, HomogeneousPoint(500, 500 + 866.0254037844386), p) ==
        doctest::Approx(deg(30)).epsilon(1e-14));
  CHECK(tilt_from_vertical_vp(500, HomogeneousPoint(500, 500), p) == doctest::Approx(deg(90)).epsilon(1e-15));
  CHECK(tilt_from_horizon(500, HomogeneousLine(0, 1, 0), p) == doctest::Approx(deg(45)).epsilon(1e-15));
  CHECK(tilt_from_horizon(500, HomogeneousLine(0, 1, -(500 - 288.67513459481287)), p) ==
        doctest::Approx(deg(30)).epsilon(1e-14));

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    oracle::Camera cam{300 + 900 * u(rng), 1920, 1080, deg(0.5) + u(rng) * deg(39.5), deg(-10 + 20 * u(rng)), 1.0, 4.0};
    const Scene s = scene_of(cam);
    const Vec2 c = s.image.centre();
    worst = std::max(worst, std::abs(tilt_from_vertical_vp(cam.f, s.vz, c) - tilt_from_horizon(cam.f, s.horizon, c)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("rotation homography") {
  SUBCASE("overhead camera is the identity") {
    const Homography h = build_rotation_homography(700, deg(90), 0.0, {1280, 720});
    CHECK((h.canonical().m - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("example camera sends the horizon to infinity and the ground to a similarity") {
    const Scene s = scene_of(example_camera());
    const Homography h = build_rotation_homography(500, deg(30), 0.0, s.image);
    const Vec3 l = h.inverse().m.transpose() * s.horizon.v;
    CHECK(std::hypot(l.x(), l.y()) / std::abs(l.z()) < 1e-12);
    const std::vector<oracle::V2> world = ground_grid(s.cam);
    const auto d = oracle::similarity_deviation(world, map_grid(s.cam, world, h.m));
    CHECK(d.angle < 1e-9);
    CHECK(d.ratio < 1e-9);
  }

  SUBCASE("roll homography turns the image about the principal point") {
    oracle::Camera cam{800, 1280, 720, deg(25), deg(10), 0.0, 2.0};
    const Scene s = scene_of(cam);
    const Homography roll = roll_homography(800, roll_from_horizon(s.horizon), s.image);
    const Vec2 p = s.image.centre();
    CHECK((apply_homography(roll, HomogeneousPoint(p.x(), p.y())).euclidean() - p).norm() < 1e-9);
    // After levelling, the vertical vanishing point lies straight below p.
    const Vec2 vz = apply_homography(roll, s.vz).euclidean();
    CHECK(std::abs(std::atan2(vz.x() - p.x(), vz.y() - p.y())) < 1e-9);
  }

  SUBCASE("ground lines along the heading become parallel to the y-axis") {
    oracle::Camera cam{800, 1280, 720, deg(25), deg(10), 0.0, 2.0};
    const Scene s = scene_of(cam);
    const Homography h = build_rotation_homography(800, deg(25), deg(10), s.image);
    for (double x : {-3.0, 0.0, 2.5}) {
      const oracle::V2 a = (h.m * cam.project_h({x, 4.0, 0.0})).hnormalized();
      const oracle::V2 b = (h.m * cam.project_h({x, 9.0, 0.0})).hnormalized();
      CHECK(std::atan2(std::abs(b.x() - a.x()), std::abs(b.y() - a.y())) < 1e-9);
    }
  }

  CHECK(code_of([] { (void)build_rotation_homography(500, 0.0, 0.0, {100, 100}); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("fit_canvas") {
  SUBCASE("identity with a matching canvas") {
    const CanvasFit fit = fit_canvas(Homography::identity(), {640, 480}, {640, 480, 20.0});
    CHECK((fit.scene.m - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(fit.retained.is_at_infinity());
  }

  SUBCASE("example camera fits tightly inside the canvas") {
    const Homography h = build_rotation_homography(500, deg(30), 0.0, {1000, 1000});
    const CanvasFit fit = fit_canvas(h, {1000, 1000}, CanvasSpec{});
    const Mat3 full = fit.align.m * fit.scene.m * h.m;
    double lo = 1e300;
    double hi = -1e300;
    for (const Vec2& c : fit.region) {
      const Vec2 y = (full * c.homogeneous()).hnormalized();
      CHECK(y.x() >= -1e-9);
      CHECK(y.y() >= -1e-9);
      CHECK(y.x() <= 1000 + 1e-9);
      CHECK(y.y() <= 1000 + 1e-9);
      lo = std::min({lo, y.x(), y.y()});
      hi = std::max({hi, y.x(), y.y()});
    }
    CHECK((std::abs(lo) < 1e-9 || std::abs(hi - 1000) < 1e-9));
    // Scale plus translation only.
    CHECK(fit.scene.m(0, 0) > 0.0);
    CHECK(fit.scene.m(0, 0) == fit.scene.m(1, 1));
    CHECK(fit.scene.m(0, 1) == 0.0);
    CHECK(fit.scene.m(1, 0) == 0.0);
    CHECK(fit.scene.m.row(2) == Eigen::RowVector3d(0, 0, 1));
  }

  SUBCASE("margin bounds the magnification across the retained region") {
    const Homography h = build_rotation_homography(500, deg(30), 0.0, {1000, 1000});
    const CanvasFit fit = fit_canvas(h, {1000, 1000}, {1000, 1000, 20.0});
    // Linear magnification of a horizontal row is proportional to 1 / (distance below the horizon).
    const double d_near = 1000 - 211.32486540518713;
    CHECK(fit.margin == doctest::Approx(d_near / 20).epsilon(1e-12));
    const Vec2 far = fit.region.front();
    CHECK(HomogeneousLine(0, 1, -211.32486540518713).signed_distance(far) >= fit.margin - 1e-9);
  }

  SUBCASE("image above the horizon is an empty region") {
    const Homography up{(Mat3() << 1, 0, 0, 0, 1, 0, 0, 0, -1).finished()};
    CHECK(code_of([&] { (void)fit_canvas(up, {100, 100}, CanvasSpec{}); }) == ErrorCode::EmptyRegion);
    const Homography tilted{(Mat3() << 1, 0, 0, 0, 1, 0, 0, 1, -200).finished()};
    CHECK(code_of([&] { (void)fit_canvas(tilted, {100, 100}, CanvasSpec{}); }) == ErrorCode::EmptyRegion);
  }
}

TEST_CASE("full rectification") {
  SUBCASE("nadir view reduces to T_scene") {
    RectifyInput in;
    in.horizon = HomogeneousLine::at_infinity();
    in.image = {800, 600};
    in.focal = 600.0;
    const RectifyResult r = rectify(in);
    CHECK(r.tilt == doctest::Approx(deg(90)));
    CHECK(r.H.m(0, 1) == 0.0);
    CHECK(r.H.m(1, 0) == 0.0);
    CHECK(r.H.m(0, 0) == r.H.m(1, 1));
    CHECK(r.H.m.row(2) == Eigen::RowVector3d(0, 0, 1));
    CHECK(std::isinf(r.condition));
  }

  SUBCASE("example camera rectifies a ground grid to a similarity") {
    const Scene s = scene_of(example_camera());
    const RectifyResult r = rectify({s.horizon, s.vz, s.image});
    CHECK(r.focal == doctest::Approx(500).epsilon(1e-12));
    CHECK(r.tilt == doctest::Approx(deg(30)).epsilon(1e-12));
    CHECK(r.condition == doctest::Approx(3.0).epsilon(1e-12));
    const std::vector<oracle::V2> world = ground_grid(s.cam);
    const auto d = oracle::similarity_deviation(world, map_grid(s.cam, world, r.H.m));
    CHECK(d.angle < 1e-6);
    CHECK(d.ratio < 1e-6);
    CHECK(horizon_annihilation_residual(r, s.horizon) < 1e-6);
  }

  SUBCASE("alignment from v_x of a yawed camera squares the grid to the canvas") {
    oracle::Camera cam{700, 1280, 720, deg(35), deg(3), deg(20), 3.0};
    const Scene s = scene_of(cam);
    RectifyInput in{s.horizon, s.vz, s.image};
    in.align_angle = encode_horizontal_vp(s.horizon, s.vx, CodecFrame(s.image));
    const RectifyResult r = rectify(in);
    const std::vector<oracle::V2> world = ground_grid(cam);
    const std::vector<oracle::V2> img = map_grid(cam, world, r.H.m);
    double worst = 0.0;
    for (int j = 0; j < 5; ++j) {
      for (int i = 0; i < 4; ++i) {
        const oracle::V2 ex = img[static_cast<std::size_t>(j * 5 + i + 1)] - img[static_cast<std::size_t>(j * 5 + i)];
        const oracle::V2 ey = img[static_cast<std::size_t>(i * 5 + j + 5)] - img[static_cast<std::size_t>(i * 5 + j)];
        worst = std::max(worst, std::abs(std::atan2(ex.y(), ex.x())) > oracle::kPi / 2
                                    ? oracle::kPi - std::abs(std::atan2(ex.y(), ex.x()))
                                    : std::abs(std::atan2(ex.y(), ex.x())));
        worst = std::max(worst, std::abs(std::abs(std::atan2(ey.y(), ey.x())) - oracle::kPi / 2));
      }
    }
    CHECK(worst < 1e-6);
  }

  SUBCASE("known focal length with the horizon alone gives the same H") {
    oracle::Camera cam{900, 1920, 1080, deg(22), deg(-6), 1.1, 6.0};
    const Scene s = scene_of(cam);
    const RectifyResult four = rectify({s.horizon, s.vz, s.image});
    RectifyInput two{s.horizon, std::nullopt, s.image};
    two.focal = cam.f;
    const RectifyResult r2 = rectify(two);
    CHECK((four.H.canonical().m - r2.H.canonical().m).norm() < 1e-9);
  }

  SUBCASE("parameter recovery is reported") {
    oracle::Camera cam{640, 1280, 720, deg(17), deg(8), 0.0, 2.0};
    const Scene s = scene_of(cam);
    const RectifyResult r = rectify({s.horizon, s.vz, s.image});
    CHECK(r.roll == doctest::Approx(deg(8)).epsilon(1e-12));
    CHECK(*r.tilt_from_vp == doctest::Approx(*r.tilt_from_horizon).epsilon(1e-12));
    CHECK(r.collinearity_residual < 1e-9);
    CHECK(r.scale > 0.0);
  }

  SUBCASE("invalid geometry") {
    const ImageSize img{1000, 1000};
    CHECK(code_of([&] { (void)rectify({HomogeneousLine(0, 1, -800), HomogeneousPoint(500, -300), img}); }) ==
          ErrorCode::UpwardTilt);
    RectifyInput flat{HomogeneousLine(0, 1, -500), std::nullopt, img};
    flat.focal = 500.0;
    CHECK(code_of([&] { (void)rectify(flat); }) == ErrorCode::ZeroTilt);
    CHECK(code_of([&] { (void)rectify({HomogeneousLine(0, 1, -200), std::nullopt, img}); }) ==
          ErrorCode::FocalUnrecoverable);
    CHECK(code_of([&] { (void)rectify({HomogeneousLine(0, 1, -200), HomogeneousPoint::at_infinity(0, 1), img}); }) ==
          ErrorCode::VzAtInfinity);
    CHECK(code_of([&] { (void)rectify({HomogeneousLine::at_infinity(), std::nullopt, img}); }) ==
          ErrorCode::FocalUnrecoverable);
  }
}
