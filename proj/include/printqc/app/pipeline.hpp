#pragma once

#include <optional>
#include <string>
#include <vector>

#include "printqc/app/config.hpp"
#include "printqc/report.hpp"

namespace printqc::app {

struct GlyphExtraction {
  Localization loc;
  GrayImage binary;  // preprocessed text region, ink = 255
  std::vector<CharBox> boxes;
  std::vector<GlyphMatrix> glyphs;
};

/// Maps hOCR boxes given in input-image pixels onto the text region of the
/// working image. Boxes that miss the region are dropped; ids are
/// renumbered in document order.
std::vector<CharBox> hocr_boxes_in_region(const HocrDocument& doc, double scale,
                                          const BBox& region);

/// locate -> preprocess -> boxes -> normalized glyphs.
GlyphExtraction extract_glyphs(const RgbImage& img, const RunConfig& cfg,
                               const HocrDocument* hocr = nullptr);

struct InspectionRun {
  InspectionReport report;
  std::optional<RgbImage> annotated;
  std::optional<DensityEstimate> density;

  bool ok() const { return !report.error.has_value(); }
  /// Alignment, shade and, when present, misprint checks all passed.
  bool passed() const;
};

/// Runs the whole pipeline. Pipeline errors are recorded in report.error
/// together with whatever stages completed before them.
InspectionRun inspect_image(const RgbImage& img, const std::string& image_id,
                            const RunConfig& cfg, const TrainingSet* store = nullptr,
                            const HocrDocument* hocr = nullptr);

}  // namespace printqc::app
