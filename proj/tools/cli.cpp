#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "vsrsynth/blur_synth.hpp"
#include "vsrsynth/dataset.hpp"
#include "vsrsynth/degrade.hpp"
#include "vsrsynth/error.hpp"
#include "vsrsynth/image_ops.hpp"
#include "vsrsynth/io.hpp"
#include "vsrsynth/mask_gt.hpp"
#include "vsrsynth/metrics.hpp"
#include "vsrsynth/parallel.hpp"

namespace vsrsynth::cli {
namespace {

using nlohmann::json;

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Common {
  Seed seed = 0;
  int jobs = 1;
  bool dry_run = false;
  std::string config;
};

void add_common(CLI::App& sub, Common& c, bool seeded,
                const char* config_help = "JSON file of option defaults") {
  if (seeded) sub.add_option("--seed", c.seed, "Base random seed (default 0)");
  sub.add_option("--jobs,-j", c.jobs, "Worker threads (default: $VSRSYNTH_JOBS or CPU count)")
      ->check(CLI::PositiveNumber);
  sub.add_flag("--dry-run", c.dry_run, "Print the resolved parameters and exit without writing");
  sub.add_option("--config", c.config, config_help);
}

std::string to_option_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

// Fills options the command line left unset from a JSON object whose keys are
// long option names without the leading dashes.
void apply_config_defaults(CLI::App& sub, const json& doc, const std::set<std::string>& skip = {}) {
  if (!doc.is_object()) fail(Errc::kInvalidConfig, "config file must hold a JSON object");
  for (const auto& item : doc.items()) {
    if (skip.count(item.key())) continue;
    CLI::Option* opt = sub.get_option_no_throw("--" + item.key());
    if (opt == nullptr) fail(Errc::kInvalidConfig, "config key '" + item.key() + "' is not an option");
    if (opt->count() != 0) continue;
    opt->add_result(to_option_value(item.value()));
    opt->run_callback();
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::kFileNotFound, path + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(Errc::kInvalidConfig, path + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) fail(Errc::kIoError, path.string() + ": cannot write");
  f << doc.dump(2) << '\n';
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) fail(Errc::kInvalidArgument, std::string(flag) + " is required");
}

// Output directory for a clip discovered under `root`.
fs::path mirror(const fs::path& clip_dir, const fs::path& root, const fs::path& out) {
  if (fs::equivalent(clip_dir, root)) return out;
  return out / fs::relative(clip_dir, root);
}

std::string clip_label(const fs::path& clip_dir, const fs::path& root) {
  return fs::equivalent(clip_dir, root) ? std::string(".") : fs::relative(clip_dir, root).string();
}

json blur_params_json(const BlurParams& p) {
  return {{"n_frames", p.n_frames}, {"r", p.r}, {"p", p.p}, {"order", p.order}, {"seed", p.seed}};
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  Common common;
  std::string in;
  std::string out;
  int order = 1;
  std::optional<int> n_frames;
  std::optional<double> r;
  std::optional<double> p;
  bool random = false;
};

json run_synth(const SynthArgs& a) {
  require(a.in, "--in");
  require(a.out, "--out");
  const bool explicit_params = a.n_frames || a.r || a.p;
  if (explicit_params && a.random) {
    fail(Errc::kInvalidArgument, "--random cannot be combined with --n-frames/--r/--p");
  }
  if (explicit_params && !(a.n_frames && a.r && a.p)) {
    fail(Errc::kInvalidArgument, "--n-frames, --r and --p must be given together");
  }
  const bool random = !explicit_params;
  if (!random) validate(BlurParams{*a.n_frames, *a.r, *a.p, a.order, a.common.seed});
  if (a.order != 1 && a.order != 2) fail(Errc::kInvalidArgument, "--order must be 1 or 2");

  const fs::path root(a.in);
  const auto clips = discover_clip_dirs(root);
  if (clips.empty()) fail(Errc::kInsufficientFrames, a.in + ": no clips found");

  auto params_for = [&](std::size_t ci) {
    BlurParams p;
    if (random) {
      p = sample_params(derive_seed(a.common.seed, {tag(Stream::kBlurParams), ci}));
    } else {
      p = {*a.n_frames, *a.r, *a.p, 1, derive_seed(a.common.seed, {tag(Stream::kBernoulli), ci})};
    }
    p.order = a.order;
    return p;
  };

  json resolved = {{"in", a.in}, {"out", a.out}, {"order", a.order}, {"mode", random ? "random" : "explicit"}};
  if (!random) resolved.update({{"n_frames", *a.n_frames}, {"r", *a.r}, {"p", *a.p}});
  json per_clip = json::array();
  for (std::size_t ci = 0; ci < clips.size(); ++ci) {
    per_clip.push_back({{"clip", clip_label(clips[ci], root)}, {"params", blur_params_json(params_for(ci))}});
  }
  resolved["clips"] = per_clip;
  if (a.common.dry_run) return {{"params", resolved}, {"counts", {{"clips", clips.size()}}}};

  std::vector<std::size_t> frames(clips.size(), 0);
  std::vector<std::size_t> blurred(clips.size(), 0);
  const int outer = clips.size() > 1 ? a.common.jobs : 1;
  const int inner = clips.size() > 1 ? 1 : a.common.jobs;
  parallel_for(clips.size(), outer, [&](std::size_t ci) {
    const Clip clip = load_clip(clips[ci]);
    const BlurOutcome outcome = synthesize_clip(clip, params_for(ci), inner);
    const fs::path dst = mirror(clips[ci], root, a.out);
    save_clip(outcome.clip, dst);
    json passes = json::array();
    for (const auto& pass : outcome.passes) {
      passes.push_back({{"params", blur_params_json(pass.params)}, {"applied", pass.applied}});
    }
    write_json_file(dst / "blur.json", {{"passes", passes}, {"applied", outcome.applied}});
    frames[ci] = clip.size();
    blurred[ci] = static_cast<std::size_t>(std::count(outcome.applied.begin(), outcome.applied.end(), true));
  });
  std::size_t total_frames = 0;
  std::size_t total_blurred = 0;
  for (std::size_t i = 0; i < clips.size(); ++i) {
    total_frames += frames[i];
    total_blurred += blurred[i];
  }
  return {{"params", resolved},
          {"counts", {{"clips", clips.size()}, {"frames", total_frames}, {"blurred_frames", total_blurred}}}};
}

// ---------------------------------------------------------------- maskgt

struct MaskArgs {
  Common common;
  std::string clear;
  std::string blur;
  std::string out;
  MaskParams params;
  bool lr = false;
};

json run_maskgt(const MaskArgs& a) {
  require(a.clear, "--clear");
  require(a.blur, "--blur");
  require(a.out, "--out");
  validate(a.params);
  const fs::path clear_root(a.clear);
  const fs::path blur_root(a.blur);
  const auto clips = discover_clip_dirs(clear_root);
  if (clips.empty()) fail(Errc::kInsufficientFrames, a.clear + ": no clips found");

  // Pair every clear frame with the same relative path under --blur.
  struct Job {
    fs::path clear;
    fs::path blur;
    fs::path out;
    std::string key;
  };
  std::vector<Job> jobs;
  for (const auto& dir : clips) {
    const fs::path rel = fs::equivalent(dir, clear_root) ? fs::path() : fs::relative(dir, clear_root);
    const auto files = list_frame_files(dir);
    const auto blur_files = list_frame_files(blur_root / rel);
    if (files.size() != blur_files.size()) {
      fail(Errc::kDimensionMismatch, "clip '" + (rel.empty() ? std::string(".") : rel.string()) +
                                         "': " + std::to_string(files.size()) + " clear vs " +
                                         std::to_string(blur_files.size()) + " blurred frames");
    }
    for (const auto& f : files) {
      const fs::path b = blur_root / rel / f.filename();
      jobs.push_back({f, b, fs::path(a.out) / rel / f.filename(), (rel / f.filename()).generic_string()});
    }
  }

  const json resolved = {{"clear", a.clear},
                         {"blur", a.blur},
                         {"out", a.out},
                         {"k", a.params.k},
                         {"kernel_size", a.params.kernel_size},
                         {"sigma", a.params.sigma},
                         {"threshold", a.params.gate_threshold},
                         {"scale", a.params.scale_factor},
                         {"lr_inputs", a.lr}};
  if (a.common.dry_run) return {{"params", resolved}, {"counts", {{"clips", clips.size()}, {"frames", jobs.size()}}}};

  std::vector<char> gated(jobs.size(), 0);
  std::vector<double> means(jobs.size(), 0.0);
  parallel_for(jobs.size(), a.common.jobs, [&](std::size_t i) {
    const Frame c = load_frame(jobs[i].clear);
    const Frame b = load_frame(jobs[i].blur);
    const MaskPair m = a.lr ? make_mask_gt_lr(c, b, a.params) : make_mask_gt(c, b, a.params);
    fs::create_directories(jobs[i].out.parent_path());
    save_mask(m.mask_gt, jobs[i].out);
    gated[i] = m.gated ? 1 : 0;
    means[i] = mean(m.mask_gt);
  });

  json gating = json::object();
  std::size_t gated_count = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    gating[jobs[i].key] = {{"gated", gated[i] != 0}, {"mean", means[i]}};
    gated_count += gated[i];
  }
  write_json_file(fs::path(a.out) / "gating.json", gating);
  const double fraction = jobs.empty() ? 0.0 : static_cast<double>(gated_count) / static_cast<double>(jobs.size());
  return {{"params", resolved},
          {"counts", {{"clips", clips.size()}, {"masks", jobs.size()}, {"gated", gated_count}}},
          {"gated_fraction", fraction}};
}

// ---------------------------------------------------------------- degrade

struct DegradeArgs {
  Common common;
  std::string in;
  std::string out;
};

json run_degrade(const DegradeArgs& a) {
  require(a.in, "--in");
  require(a.out, "--out");
  DegradeConfig config;
  if (!a.common.config.empty()) config = degrade_config_from_json(read_json_file(a.common.config));
  validate(config);

  const fs::path root(a.in);
  const auto clips = discover_clip_dirs(root);
  if (clips.empty()) fail(Errc::kInsufficientFrames, a.in + ": no clips found");
  struct Job {
    fs::path src;
    fs::path dst;
    std::size_t clip;
    std::size_t frame;
  };
  std::vector<Job> jobs;
  for (std::size_t ci = 0; ci < clips.size(); ++ci) {
    const auto files = list_frame_files(clips[ci]);
    const fs::path dst = mirror(clips[ci], root, a.out);
    for (std::size_t fi = 0; fi < files.size(); ++fi) {
      jobs.push_back({files[fi], dst / files[fi].filename(), ci, fi});
    }
  }
  const json resolved = {{"in", a.in}, {"out", a.out}, {"config", to_json(config)}};
  if (a.common.dry_run) return {{"params", resolved}, {"counts", {{"clips", clips.size()}, {"frames", jobs.size()}}}};

  parallel_for(jobs.size(), a.common.jobs, [&](std::size_t i) {
    DegradeConfig cfg = config;
    cfg.seed = derive_seed(a.common.seed, {tag(Stream::kDegrade), jobs[i].clip, jobs[i].frame});
    const DegradeResult r = degrade_frame(load_frame(jobs[i].src), cfg);
    fs::create_directories(jobs[i].dst.parent_path());
    save_frame(r.frame, jobs[i].dst);
    fs::path trace = jobs[i].dst;
    trace.replace_extension(".trace.json");
    write_json_file(trace, to_json(r.trace));
  });
  return {{"params", resolved}, {"counts", {{"clips", clips.size()}, {"frames", jobs.size()}}}};
}

// ---------------------------------------------------------------- dataset

struct DatasetArgs {
  Common common;
  std::string src;
  std::string out;
  DatasetOptions options;
  bool no_blur = false;
  std::string ratios = "90:6:4";
  std::string degrade_config;
};

SplitRatios parse_ratios(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  std::vector<double> v;
  while (std::getline(ss, part, ':')) {
    try {
      v.push_back(std::stod(part));
    } catch (...) {
      fail(Errc::kInvalidArgument, "--ratios must look like train:test:valid, got '" + text + "'");
    }
  }
  if (v.size() != 3) fail(Errc::kInvalidArgument, "--ratios must have three parts (train:test:valid)");
  return {v[0], v[1], v[2]};
}

json run_dataset(DatasetArgs a) {
  require(a.src, "--src");
  require(a.out, "--out");
  DatasetOptions& o = a.options;
  o.seed = a.common.seed;
  o.jobs = a.common.jobs;
  o.synthesize_blur = !a.no_blur;
  o.ratios = parse_ratios(a.ratios);
  if (!a.degrade_config.empty()) o.degrade = degrade_config_from_json(read_json_file(a.degrade_config));

  const json resolved = {
      {"src", a.src},
      {"out", a.out},
      {"hr_resolution", {o.hr_width, o.hr_height}},
      {"scale_factor", o.scale_factor},
      {"ratios", {{"train", o.ratios.train}, {"test", o.ratios.test}, {"valid", o.ratios.valid}}},
      {"train_clips", o.train_clips_per_video},
      {"train_len", o.train_clip_len},
      {"eval_clips", {o.eval_clips_min, o.eval_clips_max}},
      {"eval_len", o.eval_clip_len},
      {"blur", o.synthesize_blur},
      {"order", o.blur_order},
      {"k", o.mask.k},
      {"degrade", o.degrade ? to_json(*o.degrade) : json(nullptr)},
  };
  if (a.common.dry_run) return {{"params", resolved}, {"counts", json::object()}};

  const DatasetManifest m = build_dataset(a.src, a.out, o);
  json counts = {{"videos", m.videos.size()}, {"clips", m.clips.size()}};
  for (Split s : kAllSplits) {
    const auto& t = m.totals_for(s);
    counts[split_name(s)] = {{"videos", t.videos}, {"clips", t.clips}, {"frames", t.frames}};
  }
  return {{"params", resolved}, {"counts", counts}};
}

// ---------------------------------------------------------------- metrics

struct MetricsArgs {
  Common common;
  std::string ref;
  std::string test;
  std::string metrics = "l1,psnr,ssim";
  std::string out;
  std::string merge;
  int scale = 4;
};

json run_metrics(const MetricsArgs& a) {
  require(a.ref, "--ref");
  require(a.test, "--test");
  std::vector<std::string> names;
  {
    std::stringstream ss(a.metrics);
    std::string n;
    while (std::getline(ss, n, ',')) {
      if (n != "l1" && n != "psnr" && n != "ssim" && n != "clean") {
        fail(Errc::kInvalidArgument, "unknown metric '" + n + "' (expected l1, psnr, ssim, clean)");
      }
      names.push_back(n);
    }
  }
  const auto ref = list_frame_files(a.ref);
  const auto test = list_frame_files(a.test);
  if (ref.size() != test.size()) {
    fail(Errc::kDimensionMismatch, "frame count mismatch: " + std::to_string(ref.size()) + " reference vs " +
                                       std::to_string(test.size()) + " test frames");
  }
  const json resolved = {{"ref", a.ref}, {"test", a.test}, {"metrics", names}, {"scale", a.scale}, {"out", a.out}};
  if (a.common.dry_run) return {{"params", resolved}, {"counts", {{"frames", ref.size()}}}};

  std::vector<std::map<std::string, double>> values(ref.size());
  parallel_for(ref.size(), a.common.jobs, [&](std::size_t i) {
    const Frame r = load_frame(ref[i]);
    const Frame t = load_frame(test[i]);
    for (const auto& n : names) {
      if (n == "l1") values[i][n] = l1(r, t);
      if (n == "psnr") values[i][n] = psnr(r, t);
      if (n == "ssim") values[i][n] = ssim(r, t);
      if (n == "clean") values[i][n] = cleaning_residual(r, t, a.scale);
    }
  });
  MetricReport report;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    report.frames.push_back(ref[i].filename().string());
    for (const auto& [n, v] : values[i]) report.add(n, v);
  }
  report.finalize();
  if (!a.merge.empty()) merge_external(report, read_json_file(a.merge));
  const json doc = to_json(report);
  if (!a.out.empty()) write_json_file(a.out, doc);
  json means = json::object();
  for (const auto& [n, s] : doc.at("metrics").items()) means[n] = s.at("mean");
  return {{"params", resolved}, {"counts", {{"frames", ref.size()}}}, {"means", means}};
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
  Common common;
  std::string dataset;
};

json run_validate(const ValidateArgs& a) {
  require(a.dataset, "--dataset");
  const json resolved = {{"dataset", a.dataset}};
  if (a.common.dry_run) return {{"params", resolved}, {"counts", json::object()}};
  const ValidationReport report = validate_dataset(a.dataset);
  if (!report.ok()) {
    std::string msg = "dataset validation failed";
    if (!report.failing_splits.empty()) {
      msg += " in split";
      for (Split s : report.failing_splits) msg += std::string(" '") + split_name(s) + "'";
    }
    msg += ": " + report.issues.front();
    throw Error(Errc::kValidationFailed, msg);
  }
  return {{"params", resolved}, {"counts", {{"issues", 0}}}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Motion-blurred low-resolution video training data synthesis", "vsrsynth"};
  app.require_subcommand(1);

  const int jobs = default_jobs();

  SynthArgs synth;
  synth.common.jobs = jobs;
  auto* s = app.add_subcommand("synth", "Multi-frame stacking motion blur over clip directories");
  add_common(*s, synth.common, true);
  s->add_option("--in", synth.in, "Clip directory, or directory of clip directories");
  s->add_option("--out", synth.out, "Output root (mirrors --in)");
  s->add_option("--order", synth.order, "1 = single pass, 2 = second pass on the first's output");
  s->add_option("--n-frames", synth.n_frames, "Stacked frame count N (3, 5 or 7)");
  s->add_option("--r", synth.r, "Stacking coefficient r in [0, 1/N]");
  s->add_option("--p", synth.p, "Per-frame synthesis probability p in (0.5, 1]");
  s->add_flag("--random", synth.random, "Sample N, r, p per clip from --seed (default without --n-frames)");

  MaskArgs mask;
  mask.common.jobs = jobs;
  auto* m = app.add_subcommand("maskgt", "Blurring-mask ground truth from clear/blurred pairs");
  add_common(*m, mask.common, false);
  m->add_option("--clear", mask.clear, "Clear HR frames (clip dir or dir of clip dirs)");
  m->add_option("--blur", mask.blur, "Blurred HR frames, same layout as --clear");
  m->add_option("--out", mask.out, "Mask output root");
  m->add_option("--k", mask.params.k, "Residual magnification factor");
  m->add_option("--kernel-size", mask.params.kernel_size, "Softening Gaussian size (odd)");
  m->add_option("--sigma", mask.params.sigma, "Softening Gaussian sigma");
  m->add_option("--threshold", mask.params.gate_threshold, "Gate threshold on the mask mean");
  m->add_option("--scale", mask.params.scale_factor, "HR -> LR downscale before differencing");
  m->add_flag("--lr", mask.lr, "Inputs are already LR; skip the downscale");

  DegradeArgs degrade;
  degrade.common.jobs = jobs;
  auto* d = app.add_subcommand("degrade", "Higher-order blur/resize/noise/JPEG degradation to LR");
  add_common(*d, degrade.common, true, "Degradation config JSON (defaults built in)");
  d->add_option("--in", degrade.in, "HR frames (clip dir or dir of clip dirs)");
  d->add_option("--out", degrade.out, "LR output root; traces are written beside each frame");

  DatasetArgs dataset;
  dataset.common.jobs = jobs;
  auto* ds = app.add_subcommand("dataset", "Build an HR/LR/mask clip dataset with a manifest");
  add_common(*ds, dataset.common, true);
  ds->add_option("--src", dataset.src, "Directory of per-video frame directories");
  ds->add_option("--out", dataset.out, "Dataset output root");
  ds->add_option("--hr-width", dataset.options.hr_width, "HR width after scale-and-crop");
  ds->add_option("--hr-height", dataset.options.hr_height, "HR height after scale-and-crop");
  ds->add_option("--scale", dataset.options.scale_factor, "HR/LR scale factor");
  ds->add_option("--ratios", dataset.ratios, "Video split ratios train:test:valid");
  ds->add_option("--train-clips", dataset.options.train_clips_per_video, "Clips per training video");
  ds->add_option("--train-len", dataset.options.train_clip_len, "Frames per training clip");
  ds->add_option("--eval-clips-min", dataset.options.eval_clips_min, "Min clips per valid/test video");
  ds->add_option("--eval-clips-max", dataset.options.eval_clips_max, "Max clips per valid/test video");
  ds->add_option("--eval-len", dataset.options.eval_clip_len, "Frames per valid/test clip");
  ds->add_flag("--no-blur", dataset.no_blur, "Skip blur synthesis and masks (LR from clear HR)");
  ds->add_option("--order", dataset.options.blur_order, "Blur synthesis order (1 or 2)");
  ds->add_option("--k", dataset.options.mask.k, "Mask magnification factor");
  ds->add_option("--degrade-config", dataset.degrade_config, "Degradation config JSON for LR frames");

  MetricsArgs metrics;
  metrics.common.jobs = jobs;
  auto* mt = app.add_subcommand("metrics", "Reference metrics between two frame directories");
  add_common(*mt, metrics.common, false);
  mt->add_option("--ref", metrics.ref, "Reference frames");
  mt->add_option("--test", metrics.test, "Frames to score");
  mt->add_option("--metrics", metrics.metrics, "Comma list of l1, psnr, ssim, clean");
  mt->add_option("--scale", metrics.scale, "Downscale for the clean metric (ref is HR)");
  mt->add_option("--out", metrics.out, "Write the JSON report here");
  mt->add_option("--merge", metrics.merge, "Merge externally computed per-frame metrics (JSON)");

  ValidateArgs validate_args;
  validate_args.common.jobs = jobs;
  auto* v = app.add_subcommand("validate", "Check a built dataset against its manifest");
  add_common(*v, validate_args.common, false);
  v->add_option("--dataset", validate_args.dataset, "Dataset root holding manifest.json");

  try {
    std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(reversed.begin(), reversed.end());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const auto start = std::chrono::steady_clock::now();
  try {
    json result;
    Seed seed = 0;
    if (name == "synth") {
      if (!synth.common.config.empty()) apply_config_defaults(*sub, read_json_file(synth.common.config));
      seed = synth.common.seed;
      result = run_synth(synth);
    } else if (name == "maskgt") {
      if (!mask.common.config.empty()) apply_config_defaults(*sub, read_json_file(mask.common.config));
      result = run_maskgt(mask);
    } else if (name == "degrade") {
      seed = degrade.common.seed;
      result = run_degrade(degrade);
    } else if (name == "dataset") {
      if (!dataset.common.config.empty()) apply_config_defaults(*sub, read_json_file(dataset.common.config));
      seed = dataset.common.seed;
      result = run_dataset(dataset);
    } else if (name == "metrics") {
      if (!metrics.common.config.empty()) apply_config_defaults(*sub, read_json_file(metrics.common.config));
      result = run_metrics(metrics);
    } else {
      if (!validate_args.common.config.empty()) {
        apply_config_defaults(*sub, read_json_file(validate_args.common.config));
      }
      result = run_validate(validate_args);
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json summary = {{"status", "ok"}, {"subcommand", name}, {"seed", seed},
                    {"dry_run", sub->get_option("--dry-run")->as<bool>()}, {"wall_time_s", wall}};
    summary.update(result);
    out << summary.dump() << std::endl;
    return kOk;
  } catch (const Error& e) {
    err << json{{"status", "error"}, {"subcommand", name},
                {"error", {{"code", errc_name(e.code())}, {"message", e.what()}}}}
               .dump()
        << std::endl;
    return kFailure;
  } catch (const std::exception& e) {
    err << json{{"status", "error"}, {"subcommand", name},
                {"error", {{"code", "internal"}, {"message", e.what()}}}}
               .dump()
        << std::endl;
    return kFailure;
  }
}

}  // namespace vsrsynth::cli
