#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "printqc/glyphseg.hpp"

namespace printqc {

/// Labels a human may assign: A-Z, 0-9 and '-'.
inline constexpr std::string_view kLabelAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-";

inline bool is_valid_label(char c) { return kLabelAlphabet.find(c) != std::string_view::npos; }

/// Paired glyph matrices (MRD) and human labels (HRD); index i of one
/// pairs with index i of the other.
class TrainingSet {
 public:
  void add(const GlyphMatrix& glyph, char label);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::vector<GlyphMatrix>& glyphs() const { return glyphs_; }
  const std::vector<char>& labels() const { return labels_; }

 private:
  std::vector<GlyphMatrix> glyphs_;
  std::vector<char> labels_;
};

/// Returns ts with (glyph, label) appended. Throws InvalidLabel.
TrainingSet add_sample(TrainingSet ts, const GlyphMatrix& glyph, char label);

// Persistence -------------------------------------------------------------
//
// MRD: "MRD1", u32 little-endian count, then count records of 600 bytes
// (row-major, 20 wide by 30 tall). HRD: one label per line, UTF-8.

std::string encode_mrd(const TrainingSet& ts);
std::string encode_hrd(const TrainingSet& ts);
/// Throws CorruptStore on bad magic, truncation or mismatched counts.
TrainingSet decode_store(std::string_view mrd, std::string_view hrd);

/// A store is a directory holding mrd.bin and hrd.txt.
struct StorePaths {
  std::filesystem::path mrd;
  std::filesystem::path hrd;
};
StorePaths store_paths(const std::filesystem::path& dir);
bool store_exists(const std::filesystem::path& dir);
TrainingSet load_store(const std::filesystem::path& dir);
/// Writes both files, creating the directory if needed.
void save_store(const TrainingSet& ts, const std::filesystem::path& dir);

// Classification ----------------------------------------------------------

/// Sum of |a_i - b_i| over the 600 positions (255 x Hamming on binary glyphs).
inline long glyph_distance(const GlyphMatrix& a, const GlyphMatrix& b) {
  return (a.cast<long>() - b.cast<long>()).abs().sum();
}

struct KnnOptions {
  int k = 1;
  bool normalize_by_area = false;  // divide distances by 600
};

struct Neighbor {
  char label = '?';
  double distance = 0.0;    // to the single nearest sample
  std::size_t index = 0;    // training index of that sample
};

/// Majority label among the k nearest; vote ties go to the label owning the
/// closer sample, then the lower training index. Throws EmptyTrainingSet.
Neighbor nearest_distance(const TrainingSet& ts, const GlyphMatrix& glyph,
                          const KnnOptions& opts = {});

enum class PrintLabel { GoodPrint, Misprint };

struct MisprintResult {
  Eigen::ArrayXd distances;  // d(u)
  double mean = 0.0;
  double variance = 0.0;
  double m = 2.0;
  bool upper_tail_only = false;
  std::vector<PrintLabel> labels;
  long good = 0;
  long misprinted = 0;
  double qs_gpb = 0.0;  // raw percentage

  double sigma() const { return std::sqrt(variance); }
  double half_width() const { return m * sigma(); }
};

/// d(u) inside [E[D] - m sigma, E[D] + m sigma] is a good print. With
/// upper_tail_only the lower bound is dropped.
MisprintResult detect_misprints(const Eigen::ArrayXd& distances, double m,
                                bool upper_tail_only = false);

}  // namespace printqc
