#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "printqc/error.hpp"

namespace printqc {

/// Row-major raster. rows() is the image height, cols() the width.
template <typename Scalar>
using Image = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using GrayImage = Image<std::uint8_t>;
using RealImage = Image<double>;

/// Which way the ink sits relative to the substrate.
enum class Polarity { InkDark, InkLight };

struct RgbImage {
  GrayImage r, g, b;

  RgbImage() = default;
  RgbImage(int width, int height) : r(height, width), g(height, width), b(height, width) {}

  static RgbImage from_gray(const GrayImage& gray) {
    RgbImage out;
    out.r = out.g = out.b = gray;
    return out;
  }

  int width() const { return static_cast<int>(r.cols()); }
  int height() const { return static_cast<int>(r.rows()); }

  bool operator==(const RgbImage& o) const {
    return r.rows() == o.r.rows() && r.cols() == o.r.cols() && (r == o.r).all() &&
           (g == o.g).all() && (b == o.b).all();
  }
};

/// Axis-aligned box, top-left origin, y grows downward.
struct BBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  int right() const { return x + w; }
  int bottom() const { return y + h; }
  long area() const { return static_cast<long>(w) * h; }
  bool valid() const { return w >= 1 && h >= 1 && x >= 0 && y >= 0; }
  bool inside(int width, int height) const {
    return valid() && right() <= width && bottom() <= height;
  }
  bool contains(const BBox& o) const {
    return o.x >= x && o.y >= y && o.right() <= right() && o.bottom() <= bottom();
  }
  BBox translated(int dx, int dy) const { return {x + dx, y + dy, w, h}; }

  bool operator==(const BBox&) const = default;
};

/// Rectangular all-ones structuring element; both sides odd.
struct StructuringElement {
  int width = 3;
  int height = 3;

  static StructuringElement rect(int width, int height) {
    if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0)
      throw Error(Errc::EvenKernel, "structuring element sides must be odd and positive");
    return {width, height};
  }
};

enum class MorphOp { Erode, Dilate, Open, Close, TopHat };

struct Component {
  BBox box;
  long area = 0;

  bool operator==(const Component&) const = default;
};

struct OtsuResult {
  int threshold = 0;
  GrayImage binary;
};

using Histogram = std::array<long, 256>;

inline std::uint8_t round_to_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

/// Round-half-up and saturate any real-valued raster expression to 8 bits.
template <typename Derived>
GrayImage round_to_gray(const Eigen::ArrayBase<Derived>& values) {
  return values.unaryExpr([](auto v) { return round_to_u8(static_cast<double>(v)); });
}

inline bool is_binary(const GrayImage& img) {
  return ((img == 0) || (img == 255)).all();
}

Histogram histogram(const GrayImage& img);

GrayImage to_grayscale(const RgbImage& img);

/// Bilinear resample to target_width, height scaled to keep the aspect ratio.
GrayImage resize_to_width(const GrayImage& img, int target_width);
RgbImage resize_to_width(const RgbImage& img, int target_width);

/// sigma = 0.3 * ((k - 1) / 2 - 1) + 0.8
double gaussian_sigma(int ksize);
GrayImage gaussian_blur(const GrayImage& img, int kw, int kh);

GrayImage equalize_histogram(const GrayImage& img);
GrayImage median_filter(const GrayImage& img, int k);
GrayImage bilateral_filter(const GrayImage& img, int d, double sigma_color, double sigma_space);

GrayImage morphology(const GrayImage& img, MorphOp op, StructuringElement se);
inline GrayImage erode(const GrayImage& img, StructuringElement se) {
  return morphology(img, MorphOp::Erode, se);
}
inline GrayImage dilate(const GrayImage& img, StructuringElement se) {
  return morphology(img, MorphOp::Dilate, se);
}

/// |Scharr d/dx| min-max rescaled to [0, 255]; all zeros when flat.
GrayImage gradient_x_normalized(const GrayImage& img);

/// Throws DegenerateHistogram when every pixel has the same value.
OtsuResult otsu_threshold(const GrayImage& img);

inline GrayImage bitwise_not(const GrayImage& img) {
  return (255 - img.cast<int>()).cast<std::uint8_t>();
}

/// 8-connected labeling of the 255 pixels, sorted by (y, x) of each
/// component's top-left corner, ties in raster discovery order. Throws NotBinary.
std::vector<Component> connected_components(const GrayImage& binary);

inline GrayImage crop(const GrayImage& img, const BBox& box) {
  if (!box.inside(static_cast<int>(img.cols()), static_cast<int>(img.rows())))
    throw Error(Errc::OutOfBounds, "crop box outside image");
  return img.block(box.y, box.x, box.h, box.w);
}

}  // namespace printqc
