#pragma once

#include "printqc/raster.hpp"
#include "printqc/textloc.hpp"

namespace printqc {

/// Margins between the object frame and the text box, with the two verdicts.
struct AlignmentResult {
  int up = 0;    // U = |y_o - y_t|
  int down = 0;  // D = |(y_o + H_o) - (y_t + h)|
  int left = 0;  // L = |x_o - x_t|
  int ud_thresh = 0;
  int l_thresh = 0;
  bool vertical_pass = false;
  bool horizontal_pass = false;

  bool passed() const { return vertical_pass && horizontal_pass; }
  bool operator==(const AlignmentResult&) const = default;
};

/// Applies the pass/fail rule to already-measured margins.
AlignmentResult decide_alignment(int up, int down, int left, int ud_thresh, int l_thresh);

/// ud_thresh is the text height; l_thresh is floor(W_o / 4).
AlignmentResult assess_alignment(const ObjectGeometry& object, const BBox& text);

}  // namespace printqc
