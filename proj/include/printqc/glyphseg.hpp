#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "printqc/raster.hpp"
#include "printqc/textloc.hpp"

namespace printqc {

inline constexpr int kGlyphWidth = 20;
inline constexpr int kGlyphHeight = 30;

/// Normalized character matrix, 20 wide by 30 tall, values in {0, 255}.
using GlyphMatrix = Eigen::Array<std::uint8_t, kGlyphHeight, kGlyphWidth, Eigen::RowMajor>;

enum class BoxSource { Internal, Hocr };

struct CharBox {
  int id = 0;  // 1-based, reading order
  BBox box;    // text-region coordinates
  BoxSource source = BoxSource::Internal;
  std::optional<char> recognized;

  bool operator==(const CharBox&) const = default;
};

struct OcrPreprocessConfig {
  int median = 3;
  int blur_width = 1;
  int blur_height = 5;
  int bilateral_d = 9;
  double sigma_color = 75.0;
  double sigma_space = 75.0;
  Polarity polarity = Polarity::InkDark;
};

/// median -> vertical gaussian -> bilateral -> Otsu -> NOT (ink-dark only).
/// Output has ink at 255 on a 0 background.
GrayImage preprocess_for_ocr(const GrayImage& crop, const OcrPreprocessConfig& cfg = {});
inline GrayImage preprocess_for_ocr(const TextRegion& region, const OcrPreprocessConfig& cfg = {}) {
  return preprocess_for_ocr(region.crop, cfg);
}

struct SegmentConfig {
  long min_area = 4;
  double band_overlap = 0.5;    // vertical overlap to join a row band
  double merge_overlap = 0.6;   // horizontal overlap to merge pieces of a glyph
};

/// Internal box source. Throws NotBinary, NoGlyphs.
std::vector<CharBox> segment_glyphs(const GrayImage& binary, const SegmentConfig& cfg = {});

/// Crop, nearest-neighbor resample to 20x30 and re-binarize at 128.
GlyphMatrix normalize_glyph(const GrayImage& binary, const BBox& box);

// hOCR ingestion --------------------------------------------------------------

struct HocrRejection {
  std::size_t line = 0;
  std::size_t offset = 0;
  std::string reason;
};

struct HocrDocument {
  std::vector<CharBox> boxes;
  std::vector<HocrRejection> rejected;  // empty or inverted boxes
};

/// Collects every element whose class list holds ocrx_cword or ocr_char.
/// Throws HocrError on an unparseable bbox property.
HocrDocument parse_hocr(std::string_view text);

}  // namespace printqc
