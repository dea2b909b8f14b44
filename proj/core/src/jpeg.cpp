#include "vsrsynth/jpeg.hpp"

// clang-format off
#include <cstdio>
#include <jpeglib.h>
// clang-format on

#include <csetjmp>
#include <cstdlib>
#include <string>
#include <vector>

#include "vsrsynth/error.hpp"
#include "vsrsynth/io.hpp"

namespace vsrsynth {
namespace {

struct JpegError {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void on_error(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegError*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void on_message(j_common_ptr) {}

// Only trivially destructible state lives across setjmp in these helpers.
bool encode(const unsigned char* rgb, int width, int height, int quality, unsigned char** out,
            unsigned long* out_size, char* message) {
  jpeg_compress_struct cinfo;
  JpegError err;
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = on_error;
  err.mgr.output_message = on_message;
  if (setjmp(err.jump)) {
    std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, out, out_size);
  cinfo.image_width = static_cast<JDIMENSION>(width);
  cinfo.image_height = static_cast<JDIMENSION>(height);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  cinfo.dct_method = JDCT_ISLOW;
  cinfo.optimize_coding = FALSE;
  const int luma_sampling = quality < 90 ? 2 : 1;
  cinfo.comp_info[0].h_samp_factor = luma_sampling;
  cinfo.comp_info[0].v_samp_factor = luma_sampling;
  cinfo.comp_info[1].h_samp_factor = cinfo.comp_info[1].v_samp_factor = 1;
  cinfo.comp_info[2].h_samp_factor = cinfo.comp_info[2].v_samp_factor = 1;
  jpeg_start_compress(&cinfo, TRUE);
  const std::size_t stride = static_cast<std::size_t>(width) * 3;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(rgb + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

bool decode(const unsigned char* data, unsigned long size, unsigned char* rgb, int width,
            int height, char* message) {
  jpeg_decompress_struct cinfo;
  JpegError err;
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = on_error;
  err.mgr.output_message = on_message;
  if (setjmp(err.jump)) {
    std::snprintf(message, JMSG_LENGTH_MAX, "%s", err.message);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, data, size);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  cinfo.dct_method = JDCT_ISLOW;
  jpeg_start_decompress(&cinfo);
  if (static_cast<int>(cinfo.output_width) != width ||
      static_cast<int>(cinfo.output_height) != height || cinfo.output_components != 3) {
    std::snprintf(message, JMSG_LENGTH_MAX, "decoded geometry mismatch");
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  const std::size_t stride = static_cast<std::size_t>(width) * 3;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = rgb + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

}  // namespace

Frame jpeg_cycle(const Frame& frame, int quality) {
  if (quality < 1 || quality > 100) {
    fail(Errc::kInvalidArgument, "jpeg quality must lie in [1,100], got " + std::to_string(quality));
  }
  if (frame.empty()) fail(Errc::kInvalidArgument, "cannot compress an empty frame");
  std::vector<unsigned char> rgb(frame.sample_count());
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb[i] = quantize_sample(frame.data()[i]);

  unsigned char* encoded = nullptr;
  unsigned long encoded_size = 0;
  char message[JMSG_LENGTH_MAX] = {};
  const bool ok = encode(rgb.data(), frame.width(), frame.height(), quality, &encoded,
                         &encoded_size, message);
  if (!ok) {
    std::free(encoded);
    fail(Errc::kIoError, std::string("jpeg encode failed: ") + message);
  }
  const bool decoded =
      decode(encoded, encoded_size, rgb.data(), frame.width(), frame.height(), message);
  std::free(encoded);
  if (!decoded) fail(Errc::kIoError, std::string("jpeg decode failed: ") + message);

  std::vector<float> out(rgb.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rgb[i] / 255.0f;
  return Frame(frame.height(), frame.width(), std::move(out));
}

}  // namespace vsrsynth
