#include "vsrsynth/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "vsrsynth/error.hpp"
#include "vsrsynth/image_ops.hpp"
#include "vsrsynth/io.hpp"
#include "vsrsynth/parallel.hpp"

namespace vsrsynth {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxStackFrames = 7;

struct VideoResult {
  VideoRecord video;
  std::vector<ClipRecord> clips;
};

std::vector<fs::path> list_video_dirs(const fs::path& src) {
  std::error_code ec;
  if (!fs::is_directory(src, ec)) fail(Errc::kFileNotFound, src.string() + ": not a directory");
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(src)) {
    if (entry.is_directory() && !list_frame_files(entry.path()).empty()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) fail(Errc::kInsufficientFrames, src.string() + ": no video frame directories");
  return dirs;
}

std::string clip_id_for(const std::string& video_id, std::size_t start) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%06zu", start);
  return video_id + "_" + buf;
}

Frame load_hr(const fs::path& file, const DatasetOptions& o, int expect_h, int expect_w,
              const std::string& video_id) {
  Frame raw = load_frame(file);
  if (raw.height() != expect_h || raw.width() != expect_w) {
    fail(Errc::kDimensionMismatch, "video '" + video_id + "': frame " + file.filename().string() +
                                       " is " + std::to_string(raw.width()) + "x" +
                                       std::to_string(raw.height()) + ", expected " +
                                       std::to_string(expect_w) + "x" + std::to_string(expect_h));
  }
  return scale_and_center_crop(raw, o.hr_height, o.hr_width);
}

VideoResult process_video(const fs::path& dir, std::size_t video_index, Split split,
                          const fs::path& out, const DatasetOptions& o) {
  const std::string video_id = dir.filename().string();
  const auto files = list_frame_files(dir);
  const PngInfo first = read_png_info(files.front());
  const int lr_h = o.hr_height / o.scale_factor;
  const int lr_w = o.hr_width / o.scale_factor;

  VideoResult result;
  result.video = {video_id, files.size(), first.width, first.height, split};

  // Flow is ranked on clear LR frames; only those are kept in memory.
  std::vector<Frame> lr_clear;
  lr_clear.reserve(files.size());
  for (const auto& f : files) {
    lr_clear.push_back(resize_bicubic(load_hr(f, o, first.height, first.width, video_id), lr_h, lr_w));
  }
  const FlowStats flow = compute_flow_stats(lr_clear, o.flow);
  lr_clear.clear();

  const bool train = split == Split::kTrain;
  const std::size_t clip_len = train ? o.train_clip_len : o.eval_clip_len;
  std::size_t count = o.train_clips_per_video;
  if (!train) {
    Rng rng(derive_seed(o.seed, {tag(Stream::kClipCount), video_index}));
    count = static_cast<std::size_t>(rng.between(o.eval_clips_min, o.eval_clips_max));
  }
  count = std::min(count, files.size() / clip_len);
  if (count == 0) return result;

  const auto windows =
      select_clips(files.size(), flow, train ? ClipPolicy::kTrain : ClipPolicy::kEval, count,
                   clip_len, derive_seed(o.seed, {tag(Stream::kClipSelect), video_index}));

  for (std::size_t ci = 0; ci < windows.size(); ++ci) {
    const ClipWindow& win = windows[ci];
    ClipRecord rec;
    rec.clip_id = clip_id_for(video_id, win.start);
    rec.video_id = video_id;
    rec.split = split;
    rec.start = win.start;
    rec.length = win.length;
    rec.mean_flow = win.mean_flow;

    std::vector<Frame> hr;
    for (std::size_t i = win.start; i < win.end(); ++i) {
      hr.push_back(load_hr(files[i], o, first.height, first.width, video_id));
    }
    const Clip clear(std::move(hr));
    const fs::path clip_dir = out / split_name(split) / rec.clip_id;
    fs::create_directories(clip_dir / "hr");
    fs::create_directories(clip_dir / "lr");

    const Clip* source = &clear;
    std::optional<BlurOutcome> outcome;
    if (o.synthesize_blur) {
      BlurParams params = sample_params(derive_seed(o.seed, {tag(Stream::kBlurParams), video_index, ci}));
      params.order = o.blur_order;
      outcome = synthesize_clip(clear, params);
      source = &outcome->clip;
      ClipBlurRecord blur;
      for (const auto& pass : outcome->passes) blur.passes.push_back(pass.params);
      blur.blurred_frames =
          static_cast<std::size_t>(std::count(outcome->applied.begin(), outcome->applied.end(), true));
      rec.blur = blur;
      fs::create_directories(clip_dir / "mask");
    }

    std::size_t gated = 0;
    for (std::size_t fi = 0; fi < clear.size(); ++fi) {
      const std::string name = frame_filename(fi);
      save_frame(clear[fi], clip_dir / "hr" / name);
      if (o.degrade) {
        DegradeConfig cfg = *o.degrade;
        cfg.seed = derive_seed(o.seed, {tag(Stream::kDegrade), video_index, ci, fi});
        save_frame(degrade_frame((*source)[fi], cfg).frame, clip_dir / "lr" / name);
      } else {
        save_frame(resize_bicubic((*source)[fi], lr_h, lr_w), clip_dir / "lr" / name);
      }
      if (outcome) {
        const MaskPair mask = make_mask_gt(clear[fi], (*source)[fi], o.mask);
        save_mask(mask.mask_gt, clip_dir / "mask" / name);
        gated += mask.gated ? 1 : 0;
      }
    }
    rec.gated_fraction = static_cast<double>(gated) / static_cast<double>(clear.size());
    result.clips.push_back(std::move(rec));
  }
  return result;
}

json blur_params_json(const BlurParams& p) {
  return {{"n_frames", p.n_frames}, {"r", p.r}, {"p", p.p}, {"seed", p.seed}};
}

BlurParams blur_params_from(const json& j) {
  BlurParams p;
  p.n_frames = j.at("n_frames").get<int>();
  p.r = j.at("r").get<double>();
  p.p = j.at("p").get<double>();
  p.seed = j.at("seed").get<Seed>();
  return p;
}

}  // namespace

const char* split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "train";
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "valid") return Split::kValid;
  if (name == "test") return Split::kTest;
  fail(Errc::kInvalidArgument, "unknown split '" + name + "'");
}

std::array<std::size_t, 3> split_counts(std::size_t videos, const SplitRatios& ratios) {
  // Indexed like Split; allocation order on equal remainders is train, test, valid.
  const std::array<double, 3> weight = {ratios.train, ratios.valid, ratios.test};
  const double total = weight[0] + weight[1] + weight[2];
  if (!(total > 0.0) || weight[0] < 0 || weight[1] < 0 || weight[2] < 0) {
    fail(Errc::kInvalidArgument, "split ratios must be non-negative with a positive sum");
  }
  std::array<std::size_t, 3> count{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = static_cast<double>(videos) * weight[i] / total;
    count[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[i] = exact - static_cast<double>(count[i]);
    assigned += count[i];
  }
  constexpr std::array<int, 3> kTieOrder = {0, 2, 1};
  while (assigned < videos) {
    int best = kTieOrder[0];
    for (int i : kTieOrder) {
      if (remainder[i] > remainder[best]) best = i;
    }
    ++count[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  return count;
}

std::vector<Split> assign_splits(std::size_t videos, const SplitRatios& ratios, Seed seed) {
  const auto counts = split_counts(videos, ratios);
  std::vector<std::size_t> order(videos);
  for (std::size_t i = 0; i < videos; ++i) order[i] = i;
  Rng rng(derive_seed(seed, {tag(Stream::kSplit)}));
  for (std::size_t i = videos; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::vector<Split> out(videos, Split::kTrain);
  std::size_t k = 0;
  for (Split s : {Split::kTrain, Split::kTest, Split::kValid}) {
    for (std::size_t j = 0; j < counts[static_cast<int>(s)]; ++j) out[order[k++]] = s;
  }
  return out;
}

void recompute_totals(DatasetManifest& manifest) {
  for (Split s : kAllSplits) {
    auto& t = manifest.totals_for(s);
    t.videos = t.clips = t.frames = 0;
  }
  for (const auto& v : manifest.videos) ++manifest.totals_for(v.split).videos;
  for (const auto& c : manifest.clips) {
    auto& t = manifest.totals_for(c.split);
    ++t.clips;
    t.frames += c.length;
  }
}

void ValidationReport::add(std::optional<Split> split, std::string message) {
  if (split) {
    message = "split '" + std::string(split_name(*split)) + "': " + message;
    if (std::find(failing_splits.begin(), failing_splits.end(), *split) == failing_splits.end()) {
      failing_splits.push_back(*split);
    }
  }
  issues.push_back(std::move(message));
}

ValidationReport validate_manifest(const DatasetManifest& m) {
  ValidationReport report;
  if (m.schema_version != kManifestSchemaVersion) {
    report.add(std::nullopt, "unsupported schema_version " + std::to_string(m.schema_version));
  }
  if (m.scale_factor < 1 || m.hr_width != m.lr_width * m.scale_factor ||
      m.hr_height != m.lr_height * m.scale_factor) {
    report.add(std::nullopt, "HR/LR resolutions disagree with scale factor");
  }

  std::array<std::size_t, 3> clips{};
  std::array<std::size_t, 3> frames{};
  std::array<std::size_t, 3> videos{};
  for (const auto& v : m.videos) ++videos[static_cast<int>(v.split)];
  std::map<std::string, std::vector<const ClipRecord*>> by_video;
  for (const auto& c : m.clips) {
    const int s = static_cast<int>(c.split);
    ++clips[s];
    frames[s] += c.length;
    const std::size_t want = m.totals_for(c.split).clip_length;
    if (want != 0 && c.length != want) {
      report.add(c.split, "clip " + c.clip_id + " has " + std::to_string(c.length) +
                              " frames, split requires " + std::to_string(want));
    }
    by_video[c.video_id].push_back(&c);
  }
  for (Split s : kAllSplits) {
    const auto& t = m.totals_for(s);
    const int i = static_cast<int>(s);
    if (t.frames != frames[i]) {
      report.add(s, "declared " + std::to_string(t.frames) + " frames but clips sum to " +
                        std::to_string(frames[i]));
    }
    if (t.clips != clips[i]) {
      report.add(s, "declared " + std::to_string(t.clips) + " clips but " +
                        std::to_string(clips[i]) + " are listed");
    }
    if (t.videos != videos[i]) {
      report.add(s, "declared " + std::to_string(t.videos) + " videos but " +
                        std::to_string(videos[i]) + " are listed");
    }
  }
  if (!m.videos.empty()) {
    const auto expect = split_counts(m.videos.size(), m.ratios);
    for (Split s : kAllSplits) {
      const int i = static_cast<int>(s);
      if (videos[i] != expect[i]) {
        report.add(s, std::to_string(videos[i]) + " videos, split ratios call for " +
                          std::to_string(expect[i]));
      }
    }
  }
  for (auto& [video, list] : by_video) {
    std::sort(list.begin(), list.end(),
              [](const ClipRecord* a, const ClipRecord* b) { return a->start < b->start; });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i]->start < list[i - 1]->start + list[i - 1]->length) {
        report.add(list[i]->split, "clips " + list[i - 1]->clip_id + " and " + list[i]->clip_id +
                                       " of video " + video + " overlap");
      }
    }
  }
  return report;
}

ValidationReport validate_dataset(const fs::path& root) {
  const fs::path manifest_path = root / "manifest.json";
  std::ifstream in(manifest_path);
  if (!in) fail(Errc::kFileNotFound, manifest_path.string() + ": cannot open manifest");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(Errc::kValidationFailed, manifest_path.string() + ": " + e.what());
  }
  const DatasetManifest m = manifest_from_json(doc);
  ValidationReport report = validate_manifest(m);

  std::array<std::size_t, 3> on_disk{};
  for (const auto& c : m.clips) {
    const fs::path dir = root / split_name(c.split) / c.clip_id;
    std::vector<std::pair<std::string, std::pair<int, int>>> kinds = {
        {"hr", {m.hr_width, m.hr_height}}, {"lr", {m.lr_width, m.lr_height}}};
    if (m.masks) kinds.push_back({"mask", {m.lr_width, m.lr_height}});
    std::size_t hr_count = 0;
    for (const auto& [kind, dims] : kinds) {
      std::error_code ec;
      if (!fs::is_directory(dir / kind, ec)) {
        report.add(c.split, "clip " + c.clip_id + " is missing its " + kind + "/ directory");
        continue;
      }
      const auto files = list_frame_files(dir / kind);
      if (kind == "hr") hr_count = files.size();
      if (files.size() != c.length) {
        report.add(c.split, "clip " + c.clip_id + " " + kind + "/ holds " +
                                std::to_string(files.size()) + " frames, manifest says " +
                                std::to_string(c.length));
      }
      for (std::size_t i = 0; i < files.size(); ++i) {
        if (files[i].filename() != frame_filename(i)) {
          report.add(c.split, "clip " + c.clip_id + " " + kind + "/ has unexpected file " +
                                  files[i].filename().string());
          break;
        }
        const PngInfo info = read_png_info(files[i]);
        if (info.width != dims.first || info.height != dims.second) {
          report.add(c.split, "clip " + c.clip_id + " " + kind + "/" +
                                  files[i].filename().string() + " is " +
                                  std::to_string(info.width) + "x" + std::to_string(info.height));
          break;
        }
      }
    }
    on_disk[static_cast<int>(c.split)] += hr_count;
  }
  for (Split s : kAllSplits) {
    const std::size_t declared = m.totals_for(s).frames;
    if (on_disk[static_cast<int>(s)] != declared) {
      report.add(s, "declared " + std::to_string(declared) + " frames, found " +
                        std::to_string(on_disk[static_cast<int>(s)]) + " on disk");
    }
  }
  return report;
}

json to_json(const DatasetManifest& m) {
  json splits = json::object();
  for (Split s : kAllSplits) {
    const auto& t = m.totals_for(s);
    splits[split_name(s)] = {{"videos", t.videos},
                             {"clips", t.clips},
                             {"frames", t.frames},
                             {"clip_length", t.clip_length}};
  }
  json videos = json::array();
  for (const auto& v : m.videos) {
    videos.push_back({{"video_id", v.video_id},
                      {"frame_count", v.frame_count},
                      {"resolution", {v.width, v.height}},
                      {"split", split_name(v.split)}});
  }
  json clips = json::array();
  for (const auto& c : m.clips) {
    json j = {{"clip_id", c.clip_id},
              {"video_id", c.video_id},
              {"split", split_name(c.split)},
              {"frame_range", {c.start, c.start + c.length}},
              {"clip_length", c.length},
              {"mean_flow", c.mean_flow},
              {"gated_mask_fraction", c.gated_fraction}};
    if (c.blur) {
      json passes = json::array();
      for (const auto& p : c.blur->passes) passes.push_back(blur_params_json(p));
      j["blur"] = {{"passes", passes}, {"blurred_frames", c.blur->blurred_frames}};
    }
    clips.push_back(std::move(j));
  }
  return {
      {"schema_version", m.schema_version},
      {"global",
       {{"scale_factor", m.scale_factor},
        {"hr_resolution", {m.hr_width, m.hr_height}},
        {"lr_resolution", {m.lr_width, m.lr_height}},
        {"seed", m.seed},
        {"masks", m.masks},
        {"split_ratios", {{"train", m.ratios.train}, {"valid", m.ratios.valid}, {"test", m.ratios.test}}}}},
      {"splits", splits},
      {"videos", videos},
      {"clips", clips},
  };
}

DatasetManifest manifest_from_json(const json& doc) {
  try {
    DatasetManifest m;
    m.schema_version = doc.at("schema_version").get<int>();
    const json& g = doc.at("global");
    m.scale_factor = g.at("scale_factor").get<int>();
    m.hr_width = g.at("hr_resolution").at(0).get<int>();
    m.hr_height = g.at("hr_resolution").at(1).get<int>();
    m.lr_width = g.at("lr_resolution").at(0).get<int>();
    m.lr_height = g.at("lr_resolution").at(1).get<int>();
    m.seed = g.value("seed", Seed{0});
    m.masks = g.value("masks", false);
    if (g.contains("split_ratios")) {
      const json& r = g.at("split_ratios");
      m.ratios = {r.at("train").get<double>(), r.at("test").get<double>(), r.at("valid").get<double>()};
    }
    for (Split s : kAllSplits) {
      const json& t = doc.at("splits").at(split_name(s));
      m.totals_for(s) = {t.at("videos").get<std::size_t>(), t.at("clips").get<std::size_t>(),
                         t.at("frames").get<std::size_t>(), t.value("clip_length", std::size_t{0})};
    }
    for (const json& v : doc.at("videos")) {
      m.videos.push_back({v.at("video_id").get<std::string>(), v.at("frame_count").get<std::size_t>(),
                          v.at("resolution").at(0).get<int>(), v.at("resolution").at(1).get<int>(),
                          split_from_name(v.at("split").get<std::string>())});
    }
    for (const json& c : doc.at("clips")) {
      ClipRecord r;
      r.clip_id = c.at("clip_id").get<std::string>();
      r.video_id = c.at("video_id").get<std::string>();
      r.split = split_from_name(c.at("split").get<std::string>());
      r.start = c.at("frame_range").at(0).get<std::size_t>();
      r.length = c.at("clip_length").get<std::size_t>();
      r.mean_flow = c.value("mean_flow", 0.0);
      r.gated_fraction = c.value("gated_mask_fraction", 0.0);
      if (c.contains("blur")) {
        ClipBlurRecord b;
        for (const json& p : c.at("blur").at("passes")) b.passes.push_back(blur_params_from(p));
        b.blurred_frames = c.at("blur").value("blurred_frames", std::size_t{0});
        r.blur = b;
      }
      m.clips.push_back(std::move(r));
    }
    return m;
  } catch (const json::exception& e) {
    fail(Errc::kValidationFailed, std::string("malformed manifest: ") + e.what());
  }
}

DatasetManifest build_dataset(const fs::path& src, const fs::path& out,
                              const DatasetOptions& o) {
  if (o.scale_factor < 1 || o.hr_height % o.scale_factor != 0 || o.hr_width % o.scale_factor != 0) {
    fail(Errc::kInvalidArgument, "HR resolution must be divisible by the scale factor");
  }
  if (o.train_clip_len < 1 || o.eval_clip_len < 1 || o.eval_clips_min < 0 ||
      o.eval_clips_min > o.eval_clips_max) {
    fail(Errc::kInvalidArgument, "invalid clip length or eval clip count range");
  }
  if (o.synthesize_blur && std::min(o.train_clip_len, o.eval_clip_len) < kMaxStackFrames) {
    fail(Errc::kInvalidArgument, "clips must hold at least " + std::to_string(kMaxStackFrames) +
                                     " frames when blur synthesis is on (sampled N can be " +
                                     std::to_string(kMaxStackFrames) + ")");
  }
  validate(o.mask);
  if (o.degrade) validate(*o.degrade);
  if (o.synthesize_blur && o.blur_order != 1 && o.blur_order != 2) {
    fail(Errc::kInvalidArgument, "blur order must be 1 or 2");
  }

  const auto dirs = list_video_dirs(src);
  const auto splits = assign_splits(dirs.size(), o.ratios, o.seed);
  fs::create_directories(out);

  std::vector<VideoResult> results(dirs.size());
  parallel_for(dirs.size(), o.jobs,
               [&](std::size_t i) { results[i] = process_video(dirs[i], i, splits[i], out, o); });

  DatasetManifest m;
  m.scale_factor = o.scale_factor;
  m.hr_width = o.hr_width;
  m.hr_height = o.hr_height;
  m.lr_width = o.hr_width / o.scale_factor;
  m.lr_height = o.hr_height / o.scale_factor;
  m.seed = o.seed;
  m.masks = o.synthesize_blur;
  m.ratios = o.ratios;
  for (auto& r : results) {
    m.videos.push_back(std::move(r.video));
    for (auto& c : r.clips) m.clips.push_back(std::move(c));
  }
  m.totals_for(Split::kTrain).clip_length = o.train_clip_len;
  m.totals_for(Split::kValid).clip_length = o.eval_clip_len;
  m.totals_for(Split::kTest).clip_length = o.eval_clip_len;
  recompute_totals(m);

  std::ofstream f(out / "manifest.json");
  if (!f) fail(Errc::kIoError, (out / "manifest.json").string() + ": cannot write manifest");
  f << to_json(m).dump(2) << '\n';
  return m;
}

}  // namespace vsrsynth
