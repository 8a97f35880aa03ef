#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "bev/raster.hpp"
#include "bev/records.hpp"
#include "cli.hpp"

namespace fs = std::filesystem;
using bev::cli::kExitGeometry;
using bev::cli::kExitIo;
using bev::cli::kExitOk;
using bev::cli::kExitUsage;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "bevtool");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = bev::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
  const fs::path dir = fs::path(BEV_TEST_TMPDIR);
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("generate is reproducible and readable") {
  REQUIRE(run({"generate", "--n", "30", "--seed", "5", "--out", tmp("a.jsonl")}).code == kExitOk);
  REQUIRE(run({"generate", "--n", "30", "--seed", "5", "--out", tmp("b.jsonl")}).code == kExitOk);
  CHECK(slurp(tmp("a.jsonl")) == slurp(tmp("b.jsonl")));
  const Result to_stdout = run({"generate", "--n", "30", "--seed", "5"});
  CHECK(to_stdout.out == slurp(tmp("a.jsonl")));
  const bev::Dataset d = bev::read_dataset(tmp("a.jsonl"));
  CHECK(d.records.size() == 30);
  REQUIRE(d.manifest.has_value());
  CHECK(d.manifest->seed == 5);
  CHECK(run({"generate", "--n", "30", "--seed", "6"}).out != to_stdout.out);
}

TEST_CASE("eval against itself and after the bin round trip") {
  REQUIRE(run({"generate", "--n", "200", "--seed", "8", "--min-tilt-deg", "0.5", "--out", tmp("gt.jsonl")}).code ==
          kExitOk);
  const Result self = run({"eval", "--gt", tmp("gt.jsonl"), "--pred", tmp("gt.jsonl"), "--summary",
                           tmp("self.json"), "--csv", tmp("self.csv")});
  REQUIRE(self.code == kExitOk);
  const auto s = nlohmann::json::parse(slurp(tmp("self.json")));
  CHECK(s["auc"].get<double>() == 1.0);
  CHECK(s["images"].get<int>() == 200);
  CHECK(s["mean_fov_error_deg"].get<double>() < 1e-6);
  CHECK(slurp(tmp("self.csv")).rfind("threshold,fraction\n", 0) == 0);

  REQUIRE(run({"encode", "--in", tmp("gt.jsonl"), "--one-hot", "--out", tmp("probs.jsonl")}).code == kExitOk);
  REQUIRE(run({"decode", "--in", tmp("probs.jsonl"), "--out", tmp("pred.jsonl")}).code == kExitOk);
  REQUIRE(run({"eval", "--gt", tmp("gt.jsonl"), "--pred", tmp("pred.jsonl"), "--summary", tmp("rt.json")}).code ==
          kExitOk);
  const auto rt = nlohmann::json::parse(slurp(tmp("rt.json")));
  CHECK(rt["auc"].get<double>() > 0.95);
  CHECK(rt["auc"].get<double>() < 1.0);

  const Result idx = run({"encode", "--in", tmp("gt.jsonl")});
  REQUIRE(idx.code == kExitOk);
  const auto first = nlohmann::json::parse(idx.out.substr(0, idx.out.find('\n')));
  CHECK(first["bins"].size() == 4);
}

TEST_CASE("rectify writes an image and a parameter record") {
  bev::RasterImage img(320, 240, 3);
  for (int y = 0; y < 240; ++y)
    for (int x = 0; x < 320; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<std::uint8_t>(((x / 20 + y / 20) % 2) * 200 + c);
  bev::write_image(img, tmp("src.png"));

  // Camera with f = 300, tilt 30 deg: horizon y = 120 - 300 tan 30, v_z at y = 120 + 300 / tan 30.
  const Result r = run({"rectify", "--image", tmp("src.png"), "--horizon", "0,1,53.2050807569",
                        "--vpz", "160,639.6152422707", "--canvas", "200x150", "--out", tmp("bev.png")});
  REQUIRE_MESSAGE(r.code == kExitOk, r.err);
  const bev::RasterImage warped = bev::read_image(tmp("bev.png"));
  CHECK(warped.width() == 200);
  CHECK(warped.height() == 150);
  const auto side = nlohmann::json::parse(slurp(tmp("bev.png.json")));
  CHECK(side["focal"].get<double>() == doctest::Approx(300.0).epsilon(1e-8));
  CHECK(side["tilt"].get<double>() == doctest::Approx(0.5235987756).epsilon(1e-8));
  CHECK(side["H"].size() == 9);

  const Result geometry_only =
      run({"rectify", "--size", "320x240", "--horizon", "0,1,53.2050807569", "--vpz", "160,639.6152422707"});
  REQUIRE(geometry_only.code == kExitOk);
  CHECK(nlohmann::json::parse(geometry_only.out)["focal"].get<double>() == doctest::Approx(300.0).epsilon(1e-8));
}

TEST_CASE("video trace") {
  REQUIRE(run({"generate", "--n", "10", "--seed", "2", "--min-tilt-deg", "0.5", "--out", tmp("v.jsonl")}).code ==
          kExitOk);
  const Result r = run({"video", "--in", tmp("v.jsonl"), "--ref-focal", "500", "--trace", tmp("trace.csv")});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("frames 10") != std::string::npos);
  const std::string csv = slurp(tmp("trace.csv"));
  CHECK(csv.rfind("frames,relative_focal_error\n1,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
  CHECK(run({"video", "--in", tmp("v.jsonl"), "--trace", tmp("t2.csv")}).code == kExitUsage);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"generate"}).code == kExitUsage);
  CHECK(run({"generate", "--n", "many"}).code == kExitUsage);
  CHECK(run({"rectify", "--size", "320x", "--horizon", "0,1,-10", "--vpz", "0,900"}).code == kExitUsage);
  CHECK(run({"rectify", "--size", "320x240", "--horizon", "0,1"}).code == kExitUsage);

  const Result missing = run({"eval", "--gt", tmp("does_not_exist.jsonl"), "--pred", tmp("gt.jsonl")});
  CHECK(missing.code == kExitIo);
  CHECK(missing.err.rfind("error: ", 0) == 0);
  std::ofstream(tmp("broken.jsonl")) << "{\"id\": \n";
  CHECK(run({"eval", "--gt", tmp("broken.jsonl"), "--pred", tmp("broken.jsonl")}).code == kExitIo);
  CHECK(run({"rectify", "--image", tmp("does_not_exist.png"), "--horizon", "0,1,-10", "--vpz", "0,900"}).code ==
        kExitIo);

  // Vertical vanishing point above the horizon: the camera looks up.
  const Result up = run({"rectify", "--size", "320x240", "--horizon", "0,1,-200", "--vpz", "160,-300"});
  CHECK(up.code == kExitGeometry);
  CHECK(up.err.rfind("geometry error: ", 0) == 0);
  // Horizon through the vanishing point.
  CHECK(run({"rectify", "--size", "320x240", "--horizon", "0,1,-200", "--vpz", "160,200"}).code == kExitGeometry);
  CHECK(run({"--help"}).code == kExitOk);
}
