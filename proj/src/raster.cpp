#include "printqc/raster.hpp"

#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>

namespace printqc {
namespace {

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

void require_odd(int k, const char* what) {
  if (k < 1 || k % 2 == 0)
    throw Error(Errc::EvenKernel, std::string(what) + " must be odd and positive, got " +
                                      std::to_string(k));
}

Eigen::ArrayXd gaussian_weights(int ksize) {
  const double sigma = gaussian_sigma(ksize);
  const int r = ksize / 2;
  Eigen::ArrayXd w(ksize);
  for (int i = 0; i < ksize; ++i) {
    const double d = i - r;
    w[i] = std::exp(-d * d / (2.0 * sigma * sigma));
  }
  return w / w.sum();
}

// Separable rectangular min or max with edge replication.
template <typename Pick>
GrayImage rank_filter(const GrayImage& img, StructuringElement se, Pick pick) {
  const int rows = static_cast<int>(img.rows());
  const int cols = static_cast<int>(img.cols());
  const int rx = se.width / 2;
  const int ry = se.height / 2;

  GrayImage tmp(rows, cols);
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      std::uint8_t v = img(y, clamp_index(x - rx, cols));
      for (int dx = -rx + 1; dx <= rx; ++dx) v = pick(v, img(y, clamp_index(x + dx, cols)));
      tmp(y, x) = v;
    }

  GrayImage out(rows, cols);
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      std::uint8_t v = tmp(clamp_index(y - ry, rows), x);
      for (int dy = -ry + 1; dy <= ry; ++dy) v = pick(v, tmp(clamp_index(y + dy, rows), x));
      out(y, x) = v;
    }
  return out;
}

GrayImage erode_impl(const GrayImage& img, StructuringElement se) {
  return rank_filter(img, se, [](std::uint8_t a, std::uint8_t b) { return std::min(a, b); });
}

GrayImage dilate_impl(const GrayImage& img, StructuringElement se) {
  return rank_filter(img, se, [](std::uint8_t a, std::uint8_t b) { return std::max(a, b); });
}

}  // namespace

Histogram histogram(const GrayImage& img) {
  Histogram hist{};
  for (Eigen::Index i = 0; i < img.size(); ++i) ++hist[img.data()[i]];
  return hist;
}

GrayImage to_grayscale(const RgbImage& img) {
  // Integer BT.601 weights in thousandths; +500 rounds half up exactly.
  const Image<int> weighted =
      299 * img.r.cast<int>() + 587 * img.g.cast<int>() + 114 * img.b.cast<int>() + 500;
  return (weighted / 1000).min(255).cast<std::uint8_t>();
}

GrayImage resize_to_width(const GrayImage& img, int target_width) {
  if (target_width < 1) throw Error(Errc::OutOfBounds, "target width must be positive");
  const long src_w = img.cols();
  const long src_h = img.rows();
  if (target_width == src_w) return img;

  const long target_height = std::max<long>(1, (2 * src_h * target_width + src_w) / (2 * src_w));
  const double sx = static_cast<double>(src_w) / target_width;
  const double sy = static_cast<double>(src_h) / static_cast<double>(target_height);

  GrayImage out(target_height, target_width);
  for (long y = 0; y < target_height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(src_h - 1));
    const long y0 = static_cast<long>(fy);
    const long y1 = std::min(y0 + 1, src_h - 1);
    const double ay = fy - y0;
    for (long x = 0; x < target_width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(src_w - 1));
      const long x0 = static_cast<long>(fx);
      const long x1 = std::min(x0 + 1, src_w - 1);
      const double ax = fx - x0;
      const double top = (1 - ax) * img(y0, x0) + ax * img(y0, x1);
      const double bottom = (1 - ax) * img(y1, x0) + ax * img(y1, x1);
      out(y, x) = round_to_u8((1 - ay) * top + ay * bottom);
    }
  }
  return out;
}

RgbImage resize_to_width(const RgbImage& img, int target_width) {
  RgbImage out;
  out.r = resize_to_width(img.r, target_width);
  out.g = resize_to_width(img.g, target_width);
  out.b = resize_to_width(img.b, target_width);
  return out;
}

double gaussian_sigma(int ksize) { return 0.3 * ((ksize - 1) * 0.5 - 1.0) + 0.8; }

GrayImage gaussian_blur(const GrayImage& img, int kw, int kh) {
  require_odd(kw, "gaussian kernel width");
  require_odd(kh, "gaussian kernel height");
  const int rows = static_cast<int>(img.rows());
  const int cols = static_cast<int>(img.cols());
  const Eigen::ArrayXd wx = gaussian_weights(kw);
  const Eigen::ArrayXd wy = gaussian_weights(kh);
  const int rx = kw / 2;
  const int ry = kh / 2;

  RealImage horizontal(rows, cols);
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kw; ++i) acc += wx[i] * img(y, clamp_index(x + i - rx, cols));
      horizontal(y, x) = acc;
    }

  RealImage out(rows, cols);
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kh; ++i) acc += wy[i] * horizontal(clamp_index(y + i - ry, rows), x);
      out(y, x) = acc;
    }
  return round_to_gray(out);
}

GrayImage equalize_histogram(const GrayImage& img) {
  const Histogram hist = histogram(img);
  const long total = img.size();
  if (total == 0) return img;

  int first = 0;
  while (hist[first] == 0) ++first;
  if (hist[first] == total) return img;

  const long cdf_min = hist[first];
  std::array<std::uint8_t, 256> lut{};
  long cdf = 0;
  for (int i = 0; i < 256; ++i) {
    cdf += hist[i];
    lut[i] = round_to_u8(static_cast<double>(cdf - cdf_min) * 255.0 /
                         static_cast<double>(total - cdf_min));
  }
  return img.unaryExpr([&lut](std::uint8_t v) { return lut[v]; });
}

GrayImage median_filter(const GrayImage& img, int k) {
  require_odd(k, "median kernel");
  const int rows = static_cast<int>(img.rows());
  const int cols = static_cast<int>(img.cols());
  const int r = k / 2;
  const std::size_t mid = static_cast<std::size_t>(k) * k / 2;

  GrayImage out(rows, cols);
  std::vector<std::uint8_t> window(static_cast<std::size_t>(k) * k);
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      std::size_t n = 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          window[n++] = img(clamp_index(y + dy, rows), clamp_index(x + dx, cols));
      std::nth_element(window.begin(), window.begin() + static_cast<long>(mid), window.end());
      out(y, x) = window[mid];
    }
  return out;
}

GrayImage bilateral_filter(const GrayImage& img, int d, double sigma_color, double sigma_space) {
  require_odd(d, "bilateral diameter");
  const int rows = static_cast<int>(img.rows());
  const int cols = static_cast<int>(img.cols());
  const int r = d / 2;

  std::array<double, 256> range{};
  for (int i = 0; i < 256; ++i)
    range[i] = std::exp(-static_cast<double>(i) * i / (2.0 * sigma_color * sigma_color));

  Eigen::ArrayXXd space(d, d);
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      space(dy + r, dx + r) =
          std::exp(-static_cast<double>(dx * dx + dy * dy) / (2.0 * sigma_space * sigma_space));

  RealImage out(rows, cols);
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      const int center = img(y, x);
      double num = 0.0;
      double den = 0.0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const int v = img(clamp_index(y + dy, rows), clamp_index(x + dx, cols));
          const double w = space(dy + r, dx + r) * range[std::abs(v - center)];
          num += w * v;
          den += w;
        }
      out(y, x) = num / den;
    }
  return round_to_gray(out);
}

GrayImage morphology(const GrayImage& img, MorphOp op, StructuringElement se) {
  se = StructuringElement::rect(se.width, se.height);
  switch (op) {
    case MorphOp::Erode: return erode_impl(img, se);
    case MorphOp::Dilate: return dilate_impl(img, se);
    case MorphOp::Open: return dilate_impl(erode_impl(img, se), se);
    case MorphOp::Close: return erode_impl(dilate_impl(img, se), se);
    case MorphOp::TopHat: {
      const GrayImage opened = dilate_impl(erode_impl(img, se), se);
      return (img.cast<int>() - opened.cast<int>()).max(0).cast<std::uint8_t>();
    }
  }
  return img;
}

GrayImage gradient_x_normalized(const GrayImage& img) {
  const int rows = static_cast<int>(img.rows());
  const int cols = static_cast<int>(img.cols());
  constexpr std::array<int, 3> kRowWeights{3, 10, 3};

  Image<int> mag(rows, cols);
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      int acc = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        const int yy = clamp_index(y + dy, rows);
        acc += kRowWeights[dy + 1] *
               (img(yy, clamp_index(x + 1, cols)) - img(yy, clamp_index(x - 1, cols)));
      }
      mag(y, x) = std::abs(acc);
    }

  const int lo = mag.minCoeff();
  const int hi = mag.maxCoeff();
  if (hi == lo) return GrayImage::Zero(rows, cols);
  return round_to_gray((mag - lo).cast<double>() * (255.0 / (hi - lo)));
}

OtsuResult otsu_threshold(const GrayImage& img) {
  const Histogram hist = histogram(img);
  const long total = img.size();
  if (total == 0 || std::any_of(hist.begin(), hist.end(), [total](long c) { return c == total; }))
    throw Error(Errc::DegenerateHistogram, "all pixels share one intensity");

  long total_sum = 0;
  for (int i = 0; i < 256; ++i) total_sum += i * hist[i];

  // Between-class variance is proportional to (N*S0 - n0*S)^2 / (n0*n1);
  // the numerator difference is an exact integer.
  long n0 = 0;
  long s0 = 0;
  double best = -1.0;
  int best_t = 0;
  for (int t = 0; t < 255; ++t) {
    n0 += hist[t];
    s0 += t * hist[t];
    const long n1 = total - n0;
    if (n0 == 0 || n1 == 0) continue;
    const double diff = static_cast<double>(total * s0 - n0 * total_sum);
    const double score = diff * diff / (static_cast<double>(n0) * static_cast<double>(n1));
    if (score > best) {
      best = score;
      best_t = t;
    }
  }

  OtsuResult result;
  result.threshold = best_t;
  result.binary = (img.cast<int>() > best_t).select(GrayImage::Constant(img.rows(), img.cols(), 255),
                                                     GrayImage::Zero(img.rows(), img.cols()));
  return result;
}

std::vector<Component> connected_components(const GrayImage& binary) {
  if (!is_binary(binary)) throw Error(Errc::NotBinary, "connected_components expects {0,255}");
  const int rows = static_cast<int>(binary.rows());
  const int cols = static_cast<int>(binary.cols());

  Image<std::uint8_t> seen = Image<std::uint8_t>::Zero(rows, cols);
  std::vector<Component> comps;
  std::vector<std::pair<int, int>> stack;

  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      if (binary(y, x) != 255 || seen(y, x)) continue;
      int min_x = x, max_x = x, min_y = y, max_y = y;
      long area = 0;
      seen(y, x) = 1;
      stack.emplace_back(y, x);
      while (!stack.empty()) {
        const auto [cy, cx] = stack.back();
        stack.pop_back();
        ++area;
        min_x = std::min(min_x, cx);
        max_x = std::max(max_x, cx);
        min_y = std::min(min_y, cy);
        max_y = std::max(max_y, cy);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            const int ny = cy + dy;
            const int nx = cx + dx;
            if (ny < 0 || ny >= rows || nx < 0 || nx >= cols) continue;
            if (binary(ny, nx) == 255 && !seen(ny, nx)) {
              seen(ny, nx) = 1;
              stack.emplace_back(ny, nx);
            }
          }
      }
      comps.push_back({{min_x, min_y, max_x - min_x + 1, max_y - min_y + 1}, area});
    }

  std::stable_sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
    return std::pair(a.box.y, a.box.x) < std::pair(b.box.y, b.box.x);
  });
  return comps;
}

}  // namespace printqc
