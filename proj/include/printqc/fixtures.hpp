#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "printqc/raster.hpp"
#include "printqc/textloc.hpp"

namespace printqc {

/// 5x7 bitmap of one symbol; rows top to bottom, '#' is ink.
using FontGlyph = std::array<std::string_view, 7>;

/// Built-in font covering A-Z, 0-9 and '-'. Throws SpecError otherwise.
const FontGlyph& font_glyph(char c);

/// Synthetic label description. Glyph indices count rendered symbols in
/// reading order from 0; spaces advance the pen without producing a glyph.
struct LabelSpec {
  int canvas_width = 500;
  int canvas_height = 340;
  int surround = 30;  // intensity outside the object
  ObjectGeometry object{50, 40, 400, 260};
  int background = 220;
  int ink = 40;
  std::vector<std::string> lines;
  int cell = 4;  // pixels per font pixel
  int letter_spacing = 2;  // font pixels between glyphs
  int line_spacing = 3;    // font pixels between lines
  int offset_x = 0;        // shift of the text block from the object center
  int offset_y = 0;
  std::map<int, double> fade_map;  // glyph index -> ink amount multiplier
  std::set<int> corrupt;           // glyph indices replaced by random bitmaps
  double noise = 0.0;              // salt-and-pepper fraction of all pixels
  std::uint64_t seed = 0;

  int glyph_count() const;
  /// Throws SpecError.
  void validate() const;
};

struct TruthGlyph {
  BBox box;  // tight ink extents, canvas coordinates
  char ch = '?';
  int ink = 0;  // effective ink intensity

  bool operator==(const TruthGlyph&) const = default;
};

struct RenderedLabel {
  RgbImage image;
  std::vector<TruthGlyph> truth;
};

/// A multiplier scales the ink amount: intensity = bg - mult * (bg - ink),
/// so 0.5 is a faded print and values above 1 print heavier.
int effective_ink(int background, int ink, double multiplier);

RenderedLabel render_label(const LabelSpec& spec);

/// Mask of the ink pixels actually drawn for the glyphs (noise excluded).
GrayImage ink_mask(const LabelSpec& spec);

std::string emit_hocr(std::span<const TruthGlyph> truth);

/// JSON forms used by the synth command. Throws SpecError on bad input.
LabelSpec label_spec_from_json(std::string_view json);
std::string truth_to_json(std::span<const TruthGlyph> truth);

}  // namespace printqc
