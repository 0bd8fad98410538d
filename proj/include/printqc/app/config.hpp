#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "printqc/glyphseg.hpp"
#include "printqc/misprint.hpp"
#include "printqc/textloc.hpp"

namespace printqc::app {

struct RunConfig {
  LocalizeConfig localize;
  OcrPreprocessConfig ocr;
  SegmentConfig segment;
  double n = 2.0;
  double m = 2.0;
  int k = 1;
  bool normalize_distance = false;
  bool upper_tail_only = false;
  std::optional<std::filesystem::path> hocr;   // box source; internal when empty
  std::optional<std::filesystem::path> store;  // training store directory
  std::filesystem::path out_dir = ".";
  bool timings = false;

  Polarity polarity() const { return ocr.polarity; }
  void set_polarity(Polarity p) { ocr.polarity = p; }
  /// Throws SpecError.
  void validate() const;
};

Polarity parse_polarity(std::string_view text);
std::string_view to_string(Polarity polarity);

/// Overlays the keys present in a JSON config document onto cfg.
/// Throws SpecError on unknown keys or wrong types.
void apply_config_json(RunConfig& cfg, std::string_view json);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

}  // namespace printqc::app
