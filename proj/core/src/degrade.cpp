#include "vsrsynth/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "vsrsynth/error.hpp"
#include "vsrsynth/image_ops.hpp"
#include "vsrsynth/jpeg.hpp"

namespace vsrsynth {
namespace {

using nlohmann::json;

void check_probability(double p, const std::string& name) {
  if (!(p >= 0.0 && p <= 1.0)) fail(Errc::kInvalidConfig, name + " must lie in [0,1]");
}

void check_range(const RealRange& r, double lo, double hi, const std::string& name) {
  if (!(r.lo <= r.hi && r.lo >= lo && r.hi <= hi)) {
    fail(Errc::kInvalidConfig, name + " must satisfy " + std::to_string(lo) + " <= lo <= hi <= " +
                                   std::to_string(hi));
  }
}

int odd_between(Rng& rng, IntRange r) { return 2 * rng.between(r.lo / 2, r.hi / 2) + 1; }

// --- JSON helpers -------------------------------------------------------

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
  if (!obj.is_object()) fail(Errc::kInvalidConfig, where + " must be a JSON object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      fail(Errc::kInvalidConfig, "unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(Errc::kInvalidConfig, where + "." + key + ": " + e.what());
  }
}

void read_range(const json& obj, const char* key, RealRange& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(Errc::kInvalidConfig, where + "." + key + " must be a [lo, hi] pair");
  }
  out = {v[0].get<double>(), v[1].get<double>()};
}

void read_range(const json& obj, const char* key, IntRange& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    fail(Errc::kInvalidConfig, where + "." + key + " must be an integer [lo, hi] pair");
  }
  out = {v[0].get<int>(), v[1].get<int>()};
}

StageConfig stage_from_json(const json& doc, const std::string& where) {
  reject_unknown(doc, {"blur", "resize", "noise", "jpeg"}, where);
  StageConfig s;
  if (doc.contains("blur")) {
    const json& b = doc.at("blur");
    const std::string w = where + ".blur";
    reject_unknown(b, {"probability", "isotropic_probability", "kernel_size", "sigma"}, w);
    read(b, "probability", s.blur.probability, w);
    read(b, "isotropic_probability", s.blur.isotropic_probability, w);
    read_range(b, "kernel_size", s.blur.kernel_size, w);
    read_range(b, "sigma", s.blur.sigma, w);
  }
  if (doc.contains("resize")) {
    const json& r = doc.at("resize");
    const std::string w = where + ".resize";
    reject_unknown(r, {"probability", "mode", "scale"}, w);
    read(r, "probability", s.resize.probability, w);
    if (r.contains("mode") && r.at("mode") != "bicubic") {
      fail(Errc::kInvalidConfig, w + ".mode: only \"bicubic\" is supported");
    }
    read_range(r, "scale", s.resize.scale, w);
  }
  if (doc.contains("noise")) {
    const json& n = doc.at("noise");
    const std::string w = where + ".noise";
    reject_unknown(n, {"probability", "gaussian_probability", "gaussian_sigma", "poisson_scale",
                       "gray_probability"}, w);
    read(n, "probability", s.noise.probability, w);
    read(n, "gaussian_probability", s.noise.gaussian_probability, w);
    read_range(n, "gaussian_sigma", s.noise.gaussian_sigma, w);
    read_range(n, "poisson_scale", s.noise.poisson_scale, w);
    read(n, "gray_probability", s.noise.gray_probability, w);
  }
  if (doc.contains("jpeg")) {
    const json& j = doc.at("jpeg");
    const std::string w = where + ".jpeg";
    reject_unknown(j, {"probability", "quality"}, w);
    read(j, "probability", s.jpeg.probability, w);
    read_range(j, "quality", s.jpeg.quality, w);
  }
  return s;
}

json stage_to_json(const StageConfig& s) {
  return {
      {"blur",
       {{"probability", s.blur.probability},
        {"isotropic_probability", s.blur.isotropic_probability},
        {"kernel_size", {s.blur.kernel_size.lo, s.blur.kernel_size.hi}},
        {"sigma", {s.blur.sigma.lo, s.blur.sigma.hi}}}},
      {"resize",
       {{"probability", s.resize.probability},
        {"mode", "bicubic"},
        {"scale", {s.resize.scale.lo, s.resize.scale.hi}}}},
      {"noise",
       {{"probability", s.noise.probability},
        {"gaussian_probability", s.noise.gaussian_probability},
        {"gaussian_sigma", {s.noise.gaussian_sigma.lo, s.noise.gaussian_sigma.hi}},
        {"poisson_scale", {s.noise.poisson_scale.lo, s.noise.poisson_scale.hi}},
        {"gray_probability", s.noise.gray_probability}}},
      {"jpeg",
       {{"probability", s.jpeg.probability},
        {"quality", {s.jpeg.quality.lo, s.jpeg.quality.hi}}}},
  };
}

const char* noise_kind_name(NoiseKind k) { return k == NoiseKind::kGaussian ? "gaussian" : "poisson"; }

}  // namespace

std::vector<StageConfig> DegradeConfig::default_stages() {
  StageConfig first;
  StageConfig second;
  second.blur.probability = 0.8;
  second.resize.scale = {0.6, 1.2};
  return {first, second};
}

void validate(const DegradeConfig& config) {
  if (config.stages.empty()) fail(Errc::kInvalidConfig, "at least one degradation stage required");
  if (config.final_scale < 1) fail(Errc::kInvalidConfig, "final_scale must be >= 1");
  for (std::size_t i = 0; i < config.stages.size(); ++i) {
    const StageConfig& s = config.stages[i];
    const std::string at = "stages[" + std::to_string(i) + "].";
    check_probability(s.blur.probability, at + "blur.probability");
    check_probability(s.blur.isotropic_probability, at + "blur.isotropic_probability");
    if (s.blur.kernel_size.lo < 1 || s.blur.kernel_size.lo > s.blur.kernel_size.hi ||
        s.blur.kernel_size.lo % 2 == 0 || s.blur.kernel_size.hi % 2 == 0) {
      fail(Errc::kInvalidConfig, at + "blur.kernel_size bounds must be odd with lo <= hi");
    }
    check_range(s.blur.sigma, 1e-6, 1e3, at + "blur.sigma");
    check_probability(s.resize.probability, at + "resize.probability");
    check_range(s.resize.scale, 1e-3, 16.0, at + "resize.scale");
    check_probability(s.noise.probability, at + "noise.probability");
    check_probability(s.noise.gaussian_probability, at + "noise.gaussian_probability");
    check_probability(s.noise.gray_probability, at + "noise.gray_probability");
    check_range(s.noise.gaussian_sigma, 0.0, 1.0, at + "noise.gaussian_sigma");
    check_range(s.noise.poisson_scale, 0.0, 1.0, at + "noise.poisson_scale");
    check_probability(s.jpeg.probability, at + "jpeg.probability");
    if (s.jpeg.quality.lo < 1 || s.jpeg.quality.hi > 100 || s.jpeg.quality.lo > s.jpeg.quality.hi) {
      fail(Errc::kInvalidConfig, at + "jpeg.quality must satisfy 1 <= lo <= hi <= 100");
    }
  }
}

Frame add_noise(const Frame& frame, NoiseKind kind, double strength, bool gray, Seed seed) {
  if (!(strength >= 0.0)) fail(Errc::kInvalidArgument, "noise strength must be non-negative");
  if (strength == 0.0) return frame;
  Rng rng(seed);
  const auto src = frame.data();
  std::vector<float> out(src.size());
  const std::size_t pixels = frame.view().pixel_count();
  for (std::size_t i = 0; i < pixels; ++i) {
    const float* px = src.data() + 3 * i;
    float* dst = out.data() + 3 * i;
    if (gray) {
      const double n = rng.normal();
      double sd = strength;
      if (kind == NoiseKind::kPoisson) {
        const double luma = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
        sd = std::sqrt(strength * luma);
      }
      for (int c = 0; c < 3; ++c) dst[c] = static_cast<float>(px[c] + sd * n);
    } else {
      for (int c = 0; c < 3; ++c) {
        const double sd = kind == NoiseKind::kGaussian ? strength : std::sqrt(strength * px[c]);
        dst[c] = static_cast<float>(px[c] + sd * rng.normal());
      }
    }
  }
  return Frame::clamped(frame.height(), frame.width(), std::move(out));
}

DegradeTrace sample_trace(int height, int width, const DegradeConfig& config) {
  validate(config);
  if (height % config.final_scale != 0 || width % config.final_scale != 0) {
    fail(Errc::kInvalidArgument, "frame size " + std::to_string(height) + "x" +
                                     std::to_string(width) + " not divisible by final_scale " +
                                     std::to_string(config.final_scale));
  }
  DegradeTrace trace;
  trace.seed = config.seed;
  trace.out_h = height / config.final_scale;
  trace.out_w = width / config.final_scale;
  Rng rng(derive_seed(config.seed, {tag(Stream::kDegrade)}));
  int h = height;
  int w = width;
  for (std::size_t i = 0; i < config.stages.size(); ++i) {
    const StageConfig& s = config.stages[i];
    StageTrace t;
    if (rng.bernoulli(s.blur.probability)) {
      t.blur.applied = true;
      t.blur.kernel_size = odd_between(rng, s.blur.kernel_size);
      t.blur.isotropic = rng.bernoulli(s.blur.isotropic_probability);
      t.blur.sigma_x = rng.uniform(s.blur.sigma.lo, s.blur.sigma.hi);
      if (t.blur.isotropic) {
        t.blur.sigma_y = t.blur.sigma_x;
      } else {
        t.blur.sigma_y = rng.uniform(s.blur.sigma.lo, s.blur.sigma.hi);
        t.blur.theta = rng.uniform(-std::numbers::pi, std::numbers::pi);
      }
    }
    if (rng.bernoulli(s.resize.probability)) {
      const double scale = rng.uniform(s.resize.scale.lo, s.resize.scale.hi);
      t.resize.applied = true;
      t.resize.out_h = std::max(1, static_cast<int>(std::lround(h * scale)));
      t.resize.out_w = std::max(1, static_cast<int>(std::lround(w * scale)));
      h = t.resize.out_h;
      w = t.resize.out_w;
    }
    if (rng.bernoulli(s.noise.probability)) {
      t.noise.applied = true;
      if (rng.bernoulli(s.noise.gaussian_probability)) {
        t.noise.kind = NoiseKind::kGaussian;
        t.noise.strength = rng.uniform(s.noise.gaussian_sigma.lo, s.noise.gaussian_sigma.hi);
      } else {
        t.noise.kind = NoiseKind::kPoisson;
        t.noise.strength = rng.uniform(s.noise.poisson_scale.lo, s.noise.poisson_scale.hi);
      }
      t.noise.gray = rng.bernoulli(s.noise.gray_probability);
      t.noise.seed = derive_seed(config.seed, {tag(Stream::kNoise), i});
    }
    if (rng.bernoulli(s.jpeg.probability)) {
      t.jpeg.applied = true;
      t.jpeg.quality = rng.between(s.jpeg.quality.lo, s.jpeg.quality.hi);
    }
    trace.stages.push_back(t);
  }
  return trace;
}

Frame replay_trace(const Frame& frame, const DegradeTrace& trace) {
  Frame current = frame;
  for (const StageTrace& t : trace.stages) {
    if (t.blur.applied) {
      if (t.blur.isotropic) {
        current = gaussian_blur(current, t.blur.kernel_size, t.blur.sigma_x);
      } else {
        current = convolve(current, anisotropic_gaussian_kernel(t.blur.kernel_size, t.blur.sigma_x,
                                                                t.blur.sigma_y, t.blur.theta));
      }
    }
    if (t.resize.applied) current = resize_bicubic(current, t.resize.out_h, t.resize.out_w);
    if (t.noise.applied) {
      current = add_noise(current, t.noise.kind, t.noise.strength, t.noise.gray, t.noise.seed);
    }
    if (t.jpeg.applied) current = jpeg_cycle(current, t.jpeg.quality);
  }
  return resize_bicubic(current, trace.out_h, trace.out_w);
}

DegradeResult degrade_frame(const Frame& frame, const DegradeConfig& config) {
  if (frame.empty()) fail(Errc::kInvalidArgument, "cannot degrade an empty frame");
  DegradeTrace trace = sample_trace(frame.height(), frame.width(), config);
  Frame out = replay_trace(frame, trace);
  return {std::move(out), std::move(trace)};
}

DegradeConfig degrade_config_from_json(const json& doc) {
  reject_unknown(doc, {"order", "stages", "final_scale", "seed"}, "degradation config");
  DegradeConfig config;
  read(doc, "final_scale", config.final_scale, "config");
  read(doc, "seed", config.seed, "config");
  if (doc.contains("stages")) {
    const json& stages = doc.at("stages");
    if (!stages.is_array() || stages.empty()) {
      fail(Errc::kInvalidConfig, "config.stages must be a non-empty array");
    }
    config.stages.clear();
    for (std::size_t i = 0; i < stages.size(); ++i) {
      config.stages.push_back(stage_from_json(stages[i], "stages[" + std::to_string(i) + "]"));
    }
  }
  if (doc.contains("order")) {
    int order = 0;
    read(doc, "order", order, "config");
    if (order < 1) fail(Errc::kInvalidConfig, "config.order must be >= 1");
    if (config.stages.size() == 1) {
      config.stages.assign(static_cast<std::size_t>(order), config.stages.front());
    } else if (static_cast<int>(config.stages.size()) != order) {
      fail(Errc::kInvalidConfig, "config.order disagrees with the number of stages");
    }
  }
  validate(config);
  return config;
}

json to_json(const DegradeConfig& config) {
  json stages = json::array();
  for (const auto& s : config.stages) stages.push_back(stage_to_json(s));
  return {{"order", config.stages.size()},
          {"final_scale", config.final_scale},
          {"seed", config.seed},
          {"stages", stages}};
}

json to_json(const DegradeTrace& trace) {
  json stages = json::array();
  for (const StageTrace& t : trace.stages) {
    json s;
    s["blur"] = {{"applied", t.blur.applied}};
    if (t.blur.applied) {
      s["blur"].update({{"isotropic", t.blur.isotropic},
                        {"kernel_size", t.blur.kernel_size},
                        {"sigma_x", t.blur.sigma_x},
                        {"sigma_y", t.blur.sigma_y},
                        {"theta", t.blur.theta}});
    }
    s["resize"] = {{"applied", t.resize.applied}};
    if (t.resize.applied) s["resize"].update({{"height", t.resize.out_h}, {"width", t.resize.out_w}});
    s["noise"] = {{"applied", t.noise.applied}};
    if (t.noise.applied) {
      s["noise"].update({{"kind", noise_kind_name(t.noise.kind)},
                         {"strength", t.noise.strength},
                         {"gray", t.noise.gray},
                         {"seed", t.noise.seed}});
    }
    s["jpeg"] = {{"applied", t.jpeg.applied}};
    if (t.jpeg.applied) s["jpeg"]["quality"] = t.jpeg.quality;
    stages.push_back(std::move(s));
  }
  return {{"seed", trace.seed}, {"stages", stages}, {"height", trace.out_h}, {"width", trace.out_w}};
}

DegradeTrace degrade_trace_from_json(const json& doc) {
  try {
    DegradeTrace trace;
    trace.seed = doc.at("seed").get<Seed>();
    trace.out_h = doc.at("height").get<int>();
    trace.out_w = doc.at("width").get<int>();
    for (const json& s : doc.at("stages")) {
      StageTrace t;
      const json& b = s.at("blur");
      t.blur.applied = b.at("applied").get<bool>();
      if (t.blur.applied) {
        t.blur.isotropic = b.at("isotropic").get<bool>();
        t.blur.kernel_size = b.at("kernel_size").get<int>();
        t.blur.sigma_x = b.at("sigma_x").get<double>();
        t.blur.sigma_y = b.at("sigma_y").get<double>();
        t.blur.theta = b.at("theta").get<double>();
      }
      const json& r = s.at("resize");
      t.resize.applied = r.at("applied").get<bool>();
      if (t.resize.applied) {
        t.resize.out_h = r.at("height").get<int>();
        t.resize.out_w = r.at("width").get<int>();
      }
      const json& n = s.at("noise");
      t.noise.applied = n.at("applied").get<bool>();
      if (t.noise.applied) {
        t.noise.kind = n.at("kind") == "gaussian" ? NoiseKind::kGaussian : NoiseKind::kPoisson;
        t.noise.strength = n.at("strength").get<double>();
        t.noise.gray = n.at("gray").get<bool>();
        t.noise.seed = n.at("seed").get<Seed>();
      }
      const json& j = s.at("jpeg");
      t.jpeg.applied = j.at("applied").get<bool>();
      if (t.jpeg.applied) t.jpeg.quality = j.at("quality").get<int>();
      trace.stages.push_back(t);
    }
    return trace;
  } catch (const json::exception& e) {
    fail(Errc::kInvalidConfig, std::string("malformed degradation trace: ") + e.what());
  }
}

}  // namespace vsrsynth
