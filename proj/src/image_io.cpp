#include "printqc/image_io.hpp"

#include <png.h>

#include <cstring>
#include <vector>

namespace printqc {
namespace {

png_image make_header(int width, int height, png_uint_32 format) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  return image;
}

std::vector<png_byte> interleave(const RgbImage& img) {
  std::vector<png_byte> buf(static_cast<std::size_t>(img.width()) * img.height() * 3);
  std::size_t i = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      buf[i++] = img.r(y, x);
      buf[i++] = img.g(y, x);
      buf[i++] = img.b(y, x);
    }
  return buf;
}

void check_dims(long width, long height) {
  if (width < 1 || height < 1) throw Error(Errc::Io, "cannot write an empty image");
}

}  // namespace

RgbImage read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw Error(Errc::Io, "cannot read PNG '" + path.string() + "': " + image.message);

  image.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buf(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(Errc::Io, "cannot decode PNG '" + path.string() + "': " + image.message);
  }

  const int width = static_cast<int>(image.width);
  const int height = static_cast<int>(image.height);
  RgbImage out(width, height);
  std::size_t i = 0;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      out.r(y, x) = buf[i++];
      out.g(y, x) = buf[i++];
      out.b(y, x) = buf[i++];
    }
  return out;
}

void write_png(const std::filesystem::path& path, const GrayImage& img) {
  check_dims(img.cols(), img.rows());
  png_image image = make_header(static_cast<int>(img.cols()), static_cast<int>(img.rows()),
                                PNG_FORMAT_GRAY);
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.data(), 0, nullptr))
    throw Error(Errc::Io, "cannot write PNG '" + path.string() + "': " + image.message);
}

void write_png(const std::filesystem::path& path, const RgbImage& img) {
  check_dims(img.width(), img.height());
  const std::vector<png_byte> buf = interleave(img);
  png_image image = make_header(img.width(), img.height(), PNG_FORMAT_RGB);
  if (!png_image_write_to_file(&image, path.c_str(), 0, buf.data(), 0, nullptr))
    throw Error(Errc::Io, "cannot write PNG '" + path.string() + "': " + image.message);
}

std::string encode_png(const GrayImage& img) {
  check_dims(img.cols(), img.rows());
  png_image image = make_header(static_cast<int>(img.cols()), static_cast<int>(img.rows()),
                                PNG_FORMAT_GRAY);
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.data(), 0, nullptr))
    throw Error(Errc::Io, std::string("cannot size PNG: ") + image.message);
  std::string bytes(size, '\0');
  if (!png_image_write_to_memory(&image, bytes.data(), &size, 0, img.data(), 0, nullptr))
    throw Error(Errc::Io, std::string("cannot encode PNG: ") + image.message);
  bytes.resize(size);
  return bytes;
}

}  // namespace printqc
