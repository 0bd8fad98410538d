#include "printqc/alignment.hpp"

#include <cstdlib>

namespace printqc {

AlignmentResult decide_alignment(int up, int down, int left, int ud_thresh, int l_thresh) {
  AlignmentResult r;
  r.up = up;
  r.down = down;
  r.left = left;
  r.ud_thresh = ud_thresh;
  r.l_thresh = l_thresh;
  r.vertical_pass = std::abs(up - down) <= ud_thresh;
  r.horizontal_pass = left <= l_thresh;
  return r;
}

AlignmentResult assess_alignment(const ObjectGeometry& object, const BBox& text) {
  const int up = std::abs(object.y - text.y);
  const int down = std::abs((object.y + object.height) - (text.y + text.h));
  const int left = std::abs(object.x - text.x);
  return decide_alignment(up, down, left, text.h, object.width / 4);
}

}  // namespace printqc
