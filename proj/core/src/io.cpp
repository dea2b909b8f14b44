#include "vsrsynth/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "vsrsynth/error.hpp"

namespace vsrsynth {
namespace {

constexpr std::array<unsigned char, 8> kPngSignature = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint32_t read_be32(const unsigned char* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

// Decodes with the libpng simplified API into the requested 8-bit layout.
std::vector<unsigned char> decode_png(const fs::path& path, png_uint_32 format, int& width,
                                      int& height) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    const std::string msg = image.message;
    png_image_free(&image);
    fail(Errc::kUnsupportedFormat, path.string() + ": " + msg);
  }
  image.format = format;
  std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    fail(Errc::kIoError, path.string() + ": " + msg);
  }
  width = static_cast<int>(image.width);
  height = static_cast<int>(image.height);
  return buffer;
}

void encode_png(const fs::path& path, png_uint_32 format, int width, int height,
                const std::vector<unsigned char>& pixels) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  if (!png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    fail(Errc::kIoError, path.string() + ": " + msg);
  }
}

void require_exists(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) fail(Errc::kFileNotFound, path.string() + ": no such file");
}

}  // namespace

PngInfo read_png_info(const fs::path& path) {
  require_exists(path);
  std::ifstream in(path, std::ios::binary);
  std::array<unsigned char, 33> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  if (in.gcount() != static_cast<std::streamsize>(head.size()) ||
      !std::equal(kPngSignature.begin(), kPngSignature.end(), head.begin()) ||
      std::memcmp(head.data() + 12, "IHDR", 4) != 0) {
    fail(Errc::kUnsupportedFormat, path.string() + ": not a PNG file");
  }
  PngInfo info;
  info.width = static_cast<int>(read_be32(head.data() + 16));
  info.height = static_cast<int>(read_be32(head.data() + 20));
  info.bit_depth = head[24];
  info.color_type = head[25];
  return info;
}

unsigned char quantize_sample(float v) {
  const long q = std::lround(static_cast<double>(std::clamp(v, 0.0f, 1.0f)) * 255.0);
  return static_cast<unsigned char>(q);
}

Frame quantize(const Frame& frame) {
  std::vector<float> out(frame.sample_count());
  const auto src = frame.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = quantize_sample(src[i]) / 255.0f;
  return Frame(frame.height(), frame.width(), std::move(out));
}

Frame load_frame(const fs::path& path) {
  const PngInfo info = read_png_info(path);
  if (info.bit_depth != 8 || info.color_type != PNG_COLOR_TYPE_RGB) {
    fail(Errc::kUnsupportedFormat, path.string() + ": expected 8-bit RGB PNG, got bit depth " +
                                       std::to_string(info.bit_depth) + " color type " +
                                       std::to_string(info.color_type));
  }
  int w = 0;
  int h = 0;
  const auto bytes = decode_png(path, PNG_FORMAT_RGB, w, h);
  std::vector<float> data(bytes.size());
  std::transform(bytes.begin(), bytes.end(), data.begin(),
                 [](unsigned char v) { return v / 255.0f; });
  return Frame(h, w, std::move(data));
}

void save_frame(const Frame& frame, const fs::path& path) {
  if (frame.empty()) fail(Errc::kInvalidArgument, "cannot save an empty frame");
  std::vector<unsigned char> bytes(frame.sample_count());
  std::transform(frame.data().begin(), frame.data().end(), bytes.begin(), quantize_sample);
  encode_png(path, PNG_FORMAT_RGB, frame.width(), frame.height(), bytes);
}

GrayMap load_mask(const fs::path& path) {
  const PngInfo info = read_png_info(path);
  if (info.bit_depth != 8 || info.color_type != PNG_COLOR_TYPE_GRAY) {
    fail(Errc::kUnsupportedFormat, path.string() + ": expected 8-bit grayscale PNG");
  }
  int w = 0;
  int h = 0;
  const auto bytes = decode_png(path, PNG_FORMAT_GRAY, w, h);
  std::vector<float> data(bytes.size());
  std::transform(bytes.begin(), bytes.end(), data.begin(),
                 [](unsigned char v) { return v / 255.0f; });
  return GrayMap(h, w, std::move(data));
}

void save_mask(const GrayMap& mask, const fs::path& path) {
  if (mask.empty()) fail(Errc::kInvalidArgument, "cannot save an empty mask");
  std::vector<unsigned char> bytes(mask.sample_count());
  std::transform(mask.data().begin(), mask.data().end(), bytes.begin(), quantize_sample);
  encode_png(path, PNG_FORMAT_GRAY, mask.width(), mask.height(), bytes);
}

std::string frame_filename(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08zu.png", index);
  return buf;
}

std::vector<fs::path> list_frame_files(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) fail(Errc::kFileNotFound, dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

Clip load_clip(const fs::path& dir) {
  const auto files = list_frame_files(dir);
  if (files.empty()) fail(Errc::kInsufficientFrames, dir.string() + ": no PNG frames");
  std::vector<Frame> frames;
  frames.reserve(files.size());
  for (const auto& f : files) frames.push_back(load_frame(f));
  return Clip(std::move(frames));
}

void save_clip(const Clip& clip, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < clip.size(); ++i) save_frame(clip[i], dir / frame_filename(i));
}

std::vector<fs::path> discover_clip_dirs(const fs::path& root) {
  if (!list_frame_files(root).empty()) return {root};
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && !list_frame_files(entry.path()).empty()) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace vsrsynth
