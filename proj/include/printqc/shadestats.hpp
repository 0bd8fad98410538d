#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "printqc/glyphseg.hpp"
#include "printqc/raster.hpp"

namespace printqc {

enum class ShadeLabel { Good, Over, Faded };

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Population mean and variance (1/B weights). Throws EmptySet.
template <typename Derived>
Moments population_stats(const Eigen::DenseBase<Derived>& values) {
  const Eigen::Index count = values.size();
  if (count == 0) throw Error(Errc::EmptySet, "no values");
  Eigen::ArrayXd v(count);
  for (Eigen::Index i = 0; i < count; ++i) v[i] = static_cast<double>(values.derived().coeff(i));
  // Identical values must give exactly zero spread, independent of how the
  // sum rounds.
  if (v.maxCoeff() == v.minCoeff()) return {v[0], 0.0};
  const double mean = v.mean();
  return {mean, (v - mean).square().sum() / static_cast<double>(count)};
}

/// GB / (GB + BB) * 100, unrounded.
double quality_success(long good, long bad);

/// Round half up to two decimals, as printed in reports.
double round2(double v);

/// Mean of every grayscale pixel inside the box.
double box_intensity(const GrayImage& gray_region, const BBox& box);

struct ShadeStats {
  Eigen::ArrayXd values;  // h_MAP(u), u = 1..B
  double mean = 0.0;
  double variance = 0.0;
  double n = 2.0;
  Polarity polarity = Polarity::InkDark;
  std::vector<ShadeLabel> labels;
  long good = 0;
  long bad = 0;
  double qs_i = 0.0;  // raw percentage

  double sigma() const { return std::sqrt(variance); }
  double lower() const { return mean - n * sigma(); }
  double upper() const { return mean + n * sigma(); }
};

/// Closed-interval n-sigma test. Below the interval is Over for dark ink
/// (heavier ink lowers the gray mean) and Faded for light ink.
ShadeStats classify_shade(const Eigen::ArrayXd& values, double n,
                          Polarity polarity = Polarity::InkDark);

struct DensityEstimate {
  Eigen::ArrayXd x;  // 100 evaluation points
  Eigen::ArrayXd f;
  double bandwidth = 0.0;
};

/// Gaussian KDE with Silverman's bandwidth. Throws DegenerateData.
DensityEstimate kde_estimate(const Eigen::ArrayXd& values, int points = 100);

struct HistogramFit {
  Eigen::ArrayXd edges;  // bins + 1 edges over [min, max]
  std::vector<long> counts;
  double mean = 0.0;
  double sigma = 0.0;
};

HistogramFit histogram_with_normal_fit(const Eigen::ArrayXd& values, int bins);

/// CSV exports: "x,f" and "bin_lo,bin_hi,count".
std::string density_csv(const DensityEstimate& density);
std::string histogram_csv(const HistogramFit& fit);

}  // namespace printqc
