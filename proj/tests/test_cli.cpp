// Copyright 2026 The occkit Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "occ/depth.hpp"
#include "occ/voxelize.hpp"
#include "testutil.hpp"

namespace {

namespace fs = std::filesystem;

std::string binary() {
  const char* bin = std::getenv("OCCKIT_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "OCCKIT_BIN must point at the occkit binary");
  return bin;
}

/// Runs the occkit binary with the given arguments and returns its exit code.
int run(const std::string& args) {
  const std::string command = binary() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string quoted(const fs::path& path) { return "'" + path.string() + "'"; }

std::vector<std::uint8_t> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

/// One scene generated through the command line, shared by the cases below.
const fs::path& scene() {
  static occtest::TempDir dir("cliscene");
  static const bool generated = [] {
    const int code =
        run("synth static-street --seed 321 --out " + quoted(dir.path()));
    REQUIRE(code == 0);
    return true;
  }();
  (void)generated;
  return dir.path();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("synth writes a scene the other subcommands can consume") {
  const fs::path dir = scene();
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "clouds" / "lidar_000000.ocpc"));
  CHECK(fs::exists(dir / "clouds" / "radar_000006.ocpc"));
  CHECK(fs::exists(dir / "images" / "image_000003.ppm"));
  CHECK(fs::exists(dir / "gt" / "occ_000002.occg"));
  CHECK(fs::exists(dir / "gt" / "occ_000004.occg"));
}

TEST_CASE("autolabel then eval closes the loop") {
  const fs::path manifest = scene() / "manifest.json";
  occtest::TempDir out("cliauto");
  const fs::path labels = out.path() / "labels";
  REQUIRE(run("autolabel --manifest " + quoted(manifest) + " --out " +
              quoted(labels)) == 0);
  for (const int f : {2, 3, 4}) {
    char name[32];
    std::snprintf(name, sizeof(name), "occ_%06d.occg", f);
    CHECK(fs::exists(labels / name));
    std::snprintf(name, sizeof(name), "observed_%06d.occm", f);
    CHECK(fs::exists(labels / name));
  }
  CHECK(fs::exists(labels / "stats.json"));

  const fs::path report = out.path() / "report";
  REQUIRE(run("eval " + quoted(labels) + " " + quoted(scene() / "gt") +
              " --out " + quoted(report)) == 0);
  CHECK(fs::exists(report / "report.json"));
  CHECK(fs::exists(report / "report.txt"));
}

TEST_CASE("autolabel output does not depend on reruns or thread count") {
  const fs::path manifest = scene() / "manifest.json";
  occtest::TempDir out("clidet");
  const fs::path a = out.path() / "a";
  const fs::path b = out.path() / "b";
  const fs::path c = out.path() / "c";
  const std::string base =
      "autolabel --manifest " + quoted(manifest) + " --frames 3..3 --out ";
  REQUIRE(run(base + quoted(a) + " --threads 1") == 0);
  REQUIRE(run(base + quoted(b) + " --threads 1") == 0);
  REQUIRE(run(base + quoted(c) + " --threads 8") == 0);
  CHECK(slurp(a / "occ_000003.occg") == slurp(b / "occ_000003.occg"));
  CHECK(slurp(a / "occ_000003.occg") == slurp(c / "occ_000003.occg"));
  CHECK(slurp(a / "observed_000003.occm") == slurp(c / "observed_000003.occm"));
}

TEST_CASE("depth writes the requested product") {
  const fs::path manifest = scene() / "manifest.json";
  occtest::TempDir out("clidepth");
  REQUIRE(run("depth --manifest " + quoted(manifest) +
              " --frame 3 --mode pseudo --out " + quoted(out.path())) == 0);
  const occ::DepthImage pseudo =
      occ::read_depth_image(out.path() / "pseudo_000003.dpth");
  CHECK(pseudo.width == 44);
  CHECK(pseudo.height == 16);

  REQUIRE(run("depth --manifest " + quoted(manifest) +
              " --frame 3 --mode rgbd --out " + quoted(out.path())) == 0);
  CHECK(fs::exists(out.path() / "rgbd_000003.ppm"));
  CHECK(fs::exists(out.path() / "rgbd_000003.dpth"));
}

TEST_CASE("fov-mask writes a partial coverage mask") {
  const fs::path manifest = scene() / "manifest.json";
  occtest::TempDir out("clifov");
  REQUIRE(run("fov-mask --manifest " + quoted(manifest) + " --out " +
              quoted(out.path())) == 0);
  const occ::VoxelMask mask =
      occ::read_voxel_mask(out.path() / "fovmask.occm");
  CHECK(mask.count_set() > 0);
  CHECK(mask.count_set() < mask.flags.size());
}

TEST_CASE("failures map to distinct exit codes") {
  occtest::TempDir out("clifail");

  SUBCASE("config errors exit 3") {
    CHECK(run("synth urban-canyon --out " + quoted(out.path() / "x")) == 3);
    CHECK(run("depth --manifest " + quoted(scene() / "manifest.json") +
              " --frame 3 --mode stereo --out " + quoted(out.path())) == 3);
    CHECK(run("autolabel --manifest " + quoted(scene() / "manifest.json") +
              " --frames 9..9 --out " + quoted(out.path())) == 3);
    CHECK(run("autolabel --manifest " + quoted(scene() / "manifest.json") +
              " --frames 4..2 --out " + quoted(out.path())) == 3);
  }

  SUBCASE("corrupt inputs exit 2") {
    const fs::path broken = out.path() / "broken";
    fs::create_directories(broken / "clouds");
    fs::copy(scene() / "manifest.json", broken / "manifest.json");
    fs::copy(scene() / "images", broken / "images", fs::copy_options::recursive);
    for (const auto& entry : fs::directory_iterator(scene() / "clouds")) {
      fs::copy(entry.path(), broken / "clouds" / entry.path().filename());
    }
    std::ofstream(broken / "clouds" / "lidar_000003.ocpc", std::ios::trunc)
        << "JUNK";
    CHECK(run("depth --manifest " + quoted(broken / "manifest.json") +
              " --frame 3 --mode lidar-gt --out " + quoted(out.path())) == 2);
  }

  SUBCASE("evaluation mismatches exit 4") {
    const fs::path empty = out.path() / "empty";
    fs::create_directories(empty);
    CHECK(run("eval " + quoted(empty) + " " + quoted(scene() / "gt") +
              " --out " + quoted(out.path() / "r")) == 4);
  }

  SUBCASE("usage errors are nonzero without reaching the pipeline") {
    CHECK(run("") != 0);
    CHECK(run("autolabel") != 0);
  }
}

TEST_SUITE_END();
