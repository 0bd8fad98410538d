#include "printqc/glyphseg.hpp"

#include <algorithm>

namespace printqc {
namespace {

int overlap(int a0, int a1, int b0, int b1) { return std::max(0, std::min(a1, b1) - std::max(a0, b0)); }

BBox unite(const BBox& a, const BBox& b) {
  const int x0 = std::min(a.x, b.x);
  const int y0 = std::min(a.y, b.y);
  return {x0, y0, std::max(a.right(), b.right()) - x0, std::max(a.bottom(), b.bottom()) - y0};
}

struct Band {
  int top = 0;
  int bottom = 0;
  std::vector<BBox> boxes;
};

// Pieces of one glyph (e.g. a detached dot) stack vertically; merge any two
// whose horizontal extents overlap enough.
void merge_stacked(std::vector<BBox>& boxes, double min_overlap) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < boxes.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < boxes.size() && !changed; ++j) {
        const int ov = overlap(boxes[i].x, boxes[i].right(), boxes[j].x, boxes[j].right());
        if (ov >= min_overlap * std::min(boxes[i].w, boxes[j].w)) {
          boxes[i] = unite(boxes[i], boxes[j]);
          boxes.erase(boxes.begin() + static_cast<long>(j));
          changed = true;
        }
      }
  }
}

}  // namespace

GrayImage preprocess_for_ocr(const GrayImage& crop, const OcrPreprocessConfig& cfg) {
  if (crop.rows() < 8 || crop.cols() < 8)
    throw Error(Errc::OutOfBounds, "text region crop must be at least 8x8");
  GrayImage img = median_filter(crop, cfg.median);
  img = gaussian_blur(img, cfg.blur_width, cfg.blur_height);
  img = bilateral_filter(img, cfg.bilateral_d, cfg.sigma_color, cfg.sigma_space);
  img = otsu_threshold(img).binary;
  return cfg.polarity == Polarity::InkDark ? bitwise_not(img) : img;
}

std::vector<CharBox> segment_glyphs(const GrayImage& binary, const SegmentConfig& cfg) {
  std::vector<Component> comps = connected_components(binary);
  std::erase_if(comps, [&](const Component& c) { return c.area < cfg.min_area; });
  if (comps.empty()) throw Error(Errc::NoGlyphs, "no glyph-sized components");

  std::vector<Band> bands;
  for (const Component& c : comps) {
    Band* home = nullptr;
    for (Band& band : bands) {
      const int ov = overlap(c.box.y, c.box.bottom(), band.top, band.bottom);
      if (ov >= cfg.band_overlap * std::min(c.box.h, band.bottom - band.top)) {
        home = &band;
        break;
      }
    }
    if (home == nullptr) {
      bands.push_back({c.box.y, c.box.bottom(), {}});
      home = &bands.back();
    }
    home->top = std::min(home->top, c.box.y);
    home->bottom = std::max(home->bottom, c.box.bottom());
    home->boxes.push_back(c.box);
  }

  std::stable_sort(bands.begin(), bands.end(),
                   [](const Band& a, const Band& b) { return a.top < b.top; });

  std::vector<CharBox> out;
  for (Band& band : bands) {
    merge_stacked(band.boxes, cfg.merge_overlap);
    std::stable_sort(band.boxes.begin(), band.boxes.end(),
                     [](const BBox& a, const BBox& b) { return a.x < b.x; });
    for (const BBox& box : band.boxes)
      out.push_back({static_cast<int>(out.size()) + 1, box, BoxSource::Internal, std::nullopt});
  }
  return out;
}

GlyphMatrix normalize_glyph(const GrayImage& binary, const BBox& box) {
  const GrayImage patch = crop(binary, box);
  GlyphMatrix out;
  for (int r = 0; r < kGlyphHeight; ++r) {
    const int sy = r * box.h / kGlyphHeight;
    for (int c = 0; c < kGlyphWidth; ++c) {
      const int sx = c * box.w / kGlyphWidth;
      out(r, c) = patch(sy, sx) >= 128 ? 255 : 0;
    }
  }
  return out;
}

}  // namespace printqc
