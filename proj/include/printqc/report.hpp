#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "printqc/alignment.hpp"
#include "printqc/glyphseg.hpp"
#include "printqc/misprint.hpp"
#include "printqc/shadestats.hpp"

namespace printqc {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kGreen{0, 255, 0};
inline constexpr Rgb kYellow{255, 255, 0};

Rgb color_of(ShadeLabel label);

/// 1-px rectangle outline. Throws OutOfBounds.
void draw_rect(RgbImage& img, const BBox& box, Rgb color);

/// Region outline in red, each box outlined by its shade color, and a red
/// outline inset by 2 px on every misprinted box. Either label list may be
/// empty to skip that layer. Box coordinates are region-relative.
RgbImage annotate(const RgbImage& img, const BBox& region, std::span<const CharBox> boxes,
                  std::span<const ShadeLabel> shade, std::span<const PrintLabel> misprint);

struct InspectionReport {
  std::string image;
  std::optional<BBox> region;
  std::optional<AlignmentResult> alignment;
  std::vector<CharBox> boxes;
  std::optional<ShadeStats> shade;
  std::optional<MisprintResult> misprint;
  std::optional<std::vector<std::pair<std::string, double>>> timings_ms;
  std::optional<std::string> error;  // set when the pipeline stopped early
};

std::string_view to_string(ShadeLabel label);
std::string_view to_string(PrintLabel label);

/// Canonical JSON: fixed key order, qs fields with two decimals, other
/// reals in shortest round-trip form.
std::string write_report(const InspectionReport& report);

/// Inverse of write_report. Throws SpecError on schema violations.
InspectionReport read_report(std::string_view json);

}  // namespace printqc
