#include "printqc/shadestats.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace printqc {
namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double quality_success(long good, long bad) {
  if (good + bad == 0) throw Error(Errc::EmptySet, "no boxes");
  return static_cast<double>(good) / static_cast<double>(good + bad) * 100.0;
}

double round2(double v) { return std::floor(v * 100.0 + 0.5) / 100.0; }

double box_intensity(const GrayImage& gray_region, const BBox& box) {
  return crop(gray_region, box).cast<double>().mean();
}

ShadeStats classify_shade(const Eigen::ArrayXd& values, double n, Polarity polarity) {
  if (!(n > 0.0)) throw Error(Errc::SpecError, "quality index n must be positive");
  const Moments m = population_stats(values);

  ShadeStats s;
  s.values = values;
  s.mean = m.mean;
  s.variance = m.variance;
  s.n = n;
  s.polarity = polarity;
  const double lo = s.lower();
  const double hi = s.upper();
  const ShadeLabel below = polarity == Polarity::InkDark ? ShadeLabel::Over : ShadeLabel::Faded;
  const ShadeLabel above = polarity == Polarity::InkDark ? ShadeLabel::Faded : ShadeLabel::Over;

  s.labels.reserve(static_cast<std::size_t>(values.size()));
  for (const double v : values) {
    const ShadeLabel label = v < lo ? below : v > hi ? above : ShadeLabel::Good;
    s.labels.push_back(label);
    (label == ShadeLabel::Good ? s.good : s.bad) += 1;
  }
  s.qs_i = quality_success(s.good, s.bad);
  return s;
}

DensityEstimate kde_estimate(const Eigen::ArrayXd& values, int points) {
  const Eigen::Index count = values.size();
  if (count < 2 || values.maxCoeff() == values.minCoeff())
    throw Error(Errc::DegenerateData, "density needs at least two distinct values");

  const double mean = values.mean();
  const double sample_sd = std::sqrt((values - mean).square().sum() / static_cast<double>(count - 1));
  DensityEstimate d;
  d.bandwidth = 1.06 * sample_sd * std::pow(static_cast<double>(count), -0.2);
  d.x = Eigen::ArrayXd::LinSpaced(points, values.minCoeff() - 3.0 * d.bandwidth,
                                  values.maxCoeff() + 3.0 * d.bandwidth);
  d.f.resize(points);
  const double norm = 1.0 / (static_cast<double>(count) * d.bandwidth * std::sqrt(2.0 * std::numbers::pi));
  for (int i = 0; i < points; ++i)
    d.f[i] = norm * (-0.5 * ((d.x[i] - values) / d.bandwidth).square()).exp().sum();
  return d;
}

HistogramFit histogram_with_normal_fit(const Eigen::ArrayXd& values, int bins) {
  if (bins < 1) throw Error(Errc::SpecError, "bins must be positive");
  if (values.size() < 2 || values.maxCoeff() == values.minCoeff())
    throw Error(Errc::DegenerateData, "histogram needs at least two distinct values");

  HistogramFit fit;
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  fit.edges = Eigen::ArrayXd::LinSpaced(bins + 1, lo, hi);
  fit.counts.assign(static_cast<std::size_t>(bins), 0);
  for (const double v : values) {
    // The top edge belongs to the last bin.
    const int bin = std::min(bins - 1, static_cast<int>((v - lo) / (hi - lo) * bins));
    ++fit.counts[static_cast<std::size_t>(bin)];
  }
  const Moments m = population_stats(values);
  fit.mean = m.mean;
  fit.sigma = std::sqrt(m.variance);
  return fit;
}

std::string density_csv(const DensityEstimate& density) {
  std::string out = "x,f\n";
  for (Eigen::Index i = 0; i < density.x.size(); ++i)
    out += shortest(density.x[i]) + "," + shortest(density.f[i]) + "\n";
  return out;
}

std::string histogram_csv(const HistogramFit& fit) {
  std::string out = "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < fit.counts.size(); ++i)
    out += shortest(fit.edges[static_cast<Eigen::Index>(i)]) + "," +
           shortest(fit.edges[static_cast<Eigen::Index>(i) + 1]) + "," +
           std::to_string(fit.counts[i]) + "\n";
  return out;
}

}  // namespace printqc
