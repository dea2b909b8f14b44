#include <gtest/gtest.h>

#include <fstream>
#include <iterator>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"
#include "vsrsynth/io.hpp"

namespace vsrsynth {
namespace {

using nlohmann::json;
using testing::TempDir;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  json summary() const {
    std::string line;
    std::istringstream lines(out);
    for (std::string l; std::getline(lines, l);)
      if (!l.empty()) line = l;
    return json::parse(line);
  }
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "vsrsynth");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> tree_bytes(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    files[fs::relative(e.path(), root).string()] = {std::istreambuf_iterator<char>(in), {}};
  }
  return files;
}

void write_clips(const fs::path& root, int clips, std::size_t frames, int h, int w) {
  for (int c = 0; c < clips; ++c) {
    save_clip(testing::random_clip(frames, h, w, 10 + c), root / ("clip" + std::to_string(c)));
  }
}

TEST(Cli, SynthIsByteReproducible) {
  TempDir tmp;
  write_clips(tmp / "in", 2, 7, 8, 12);
  const auto a = invoke({"synth", "--in", (tmp / "in").string(), "--out", (tmp / "a").string(),
                         "--seed", "5", "--order", "2"});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = invoke({"synth", "--in", (tmp / "in").string(), "--out", (tmp / "b").string(),
                         "--seed", "5", "--order", "2", "-j", "3"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(tree_bytes(tmp / "a"), tree_bytes(tmp / "b"));
  EXPECT_TRUE(fs::exists(tmp / "a" / "clip1" / "blur.json"));
  const json s = a.summary();
  EXPECT_EQ(s["status"], "ok");
  EXPECT_EQ(s["subcommand"], "synth");
  EXPECT_EQ(s["seed"], 5);
  EXPECT_EQ(s["counts"]["frames"], 14);
}

TEST(Cli, SynthExplicitZeroCoefficientCopiesFrames) {
  TempDir tmp;
  write_clips(tmp / "in", 1, 5, 4, 4);
  const auto r = invoke({"synth", "--in", (tmp / "in" / "clip0").string(), "--out",
                         (tmp / "o").string(), "--n-frames", "3", "--r", "0", "--p", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(load_frame(tmp / "o" / frame_filename(i)), load_frame(tmp / "in" / "clip0" / frame_filename(i)));
  }
  EXPECT_EQ(r.summary()["counts"]["blurred_frames"], 2);
}

TEST(Cli, SynthRejectsBadParams) {
  TempDir tmp;
  write_clips(tmp / "in", 1, 5, 4, 4);
  const auto r = invoke({"synth", "--in", (tmp / "in").string(), "--out", (tmp / "o").string(),
                         "--n-frames", "4", "--r", "0.1", "--p", "0.9"});
  EXPECT_EQ(r.code, 1);
  const json e = json::parse(r.err);
  EXPECT_EQ(e["status"], "error");
  EXPECT_EQ(e["error"]["code"], "invalid_argument");
  EXPECT_NE(e["error"]["message"].get<std::string>().find("n_frames"), std::string::npos);
}

TEST(Cli, MaskgtCountsMatchInputs) {
  TempDir tmp;
  write_clips(tmp / "clear", 2, 3, 16, 24);
  ASSERT_EQ(invoke({"synth", "--in", (tmp / "clear").string(), "--out", (tmp / "blur").string(),
                    "--n-frames", "3", "--r", "0.3", "--p", "1"})
                .code,
            0);
  const auto r = invoke({"maskgt", "--clear", (tmp / "clear").string(), "--blur",
                         (tmp / "blur").string(), "--out", (tmp / "m").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.summary()["counts"]["masks"], 6);
  EXPECT_EQ(list_frame_files(tmp / "m" / "clip1").size(), 3u);
  EXPECT_EQ(load_mask(tmp / "m" / "clip0" / "00000000.png").width(), 6);
  // Boundary frames are untouched, so their masks are all ones.
  const GrayMap first = load_mask(tmp / "m" / "clip0" / "00000000.png");
  for (float v : first.data()) EXPECT_EQ(v, 1.0f);
  EXPECT_TRUE(fs::exists(tmp / "m" / "gating.json"));
}

TEST(Cli, DegradeWritesTracesAndQuarterSize) {
  TempDir tmp;
  write_clips(tmp / "in", 1, 2, 32, 48);
  const auto r = invoke({"degrade", "--in", (tmp / "in").string(), "--out", (tmp / "o").string(),
                         "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto info = read_png_info(tmp / "o" / "clip0" / "00000001.png");
  EXPECT_EQ(info.width, 12);
  EXPECT_EQ(info.height, 8);
  EXPECT_TRUE(fs::exists(tmp / "o" / "clip0" / "00000001.trace.json"));
}

TEST(Cli, DatasetThenValidateAndCorruption) {
  TempDir tmp;
  for (int v = 0; v < 3; ++v) {
    save_clip(testing::random_clip(15, 36, 60, 30 + v), tmp / "src" / ("v" + std::to_string(v)));
  }
  const auto b = invoke({"dataset", "--src", (tmp / "src").string(), "--out", (tmp / "ds").string(),
                         "--hr-width", "64", "--hr-height", "32", "--ratios", "1:1:1", "--train-clips",
                         "1", "--train-len", "7", "--eval-len", "7", "--eval-clips-max", "2"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(b.summary()["counts"]["videos"], 3);
  const auto ok = invoke({"validate", "--dataset", (tmp / "ds").string()});
  EXPECT_EQ(ok.code, 0) << ok.err;

  std::ifstream in(tmp / "ds" / "manifest.json");
  json m = json::parse(in);
  in.close();
  m["splits"]["test"]["frames"] = m["splits"]["test"]["frames"].get<int>() + 1;
  std::ofstream(tmp / "ds" / "manifest.json") << m.dump(2);
  const auto bad = invoke({"validate", "--dataset", (tmp / "ds").string()});
  EXPECT_EQ(bad.code, 1);
  const json e = json::parse(bad.err);
  EXPECT_EQ(e["error"]["code"], "validation_failed");
  EXPECT_NE(e["error"]["message"].get<std::string>().find("'test'"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({"synth", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  const auto help = invoke({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("synth"), std::string::npos);
}

TEST(Cli, DryRunWritesNothing) {
  TempDir tmp;
  write_clips(tmp / "in", 1, 5, 4, 4);
  const auto r = invoke({"synth", "--in", (tmp / "in").string(), "--out", (tmp / "o").string(),
                         "--dry-run"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(fs::exists(tmp / "o"));
  EXPECT_EQ(r.summary()["dry_run"], true);
  EXPECT_EQ(r.summary()["params"]["mode"], "random");
}

TEST(Cli, MetricsCountMismatchFails) {
  TempDir tmp;
  save_clip(testing::random_clip(3, 16, 16, 1), tmp / "ref");
  save_clip(testing::random_clip(2, 16, 16, 2), tmp / "test");
  const auto r = invoke({"metrics", "--ref", (tmp / "ref").string(), "--test", (tmp / "test").string()});
  EXPECT_NE(r.code, 0);

  save_clip(testing::random_clip(3, 16, 16, 2), tmp / "test3");
  const auto ok = invoke({"metrics", "--ref", (tmp / "ref").string(), "--test", (tmp / "test3").string(),
                          "--metrics", "l1,psnr,ssim", "--out", (tmp / "report.json").string()});
  ASSERT_EQ(ok.code, 0) << ok.err;
  std::ifstream in(tmp / "report.json");
  const json report = json::parse(in);
  EXPECT_EQ(report["metrics"]["l1"]["per_frame"].size(), 3u);
}

TEST(Cli, ConfigFileSuppliesDefaults) {
  TempDir tmp;
  write_clips(tmp / "in", 1, 5, 4, 4);
  std::ofstream(tmp / "cfg.json") << R"({"n-frames": 3, "r": 0.0, "p": 1.0})";
  const auto r = invoke({"synth", "--in", (tmp / "in").string(), "--out", (tmp / "o").string(),
                         "--config", (tmp / "cfg.json").string(), "--dry-run"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.summary()["params"]["mode"], "explicit");
}

}  // namespace
}  // namespace vsrsynth
