#pragma once

#include <vector>

#include "printqc/raster.hpp"

namespace printqc {

/// Object frame (x_o, y_o, W_o, H_o) in working-image pixels.
struct ObjectGeometry {
  int x = 0;
  int y = 0;
  int width = 1;
  int height = 1;

  BBox box() const { return {x, y, width, height}; }
  bool operator==(const ObjectGeometry&) const = default;
};

struct TextRegion {
  BBox box;        // (x_t, y_t, w, h)
  GrayImage crop;  // working grayscale restricted to box
  double score = 0.0;
};

struct LocalizeConfig {
  int resize_width = 500;
  int median = 3;  // impulse removal ahead of the chain; 1 disables
  int blur_width = 9;
  int blur_height = 11;
  StructuringElement word_close{13, 5};
  StructuringElement blob_close{21, 21};
  int dilate_iterations = 2;
  double aspect_min = 2.0;
  double aspect_max = 12.0;
  double min_area_frac = 0.01;

  /// Throws SpecError on inconsistent settings.
  void validate() const;
};

struct Localization {
  TextRegion region;
  ObjectGeometry object;
  GrayImage gray;      // resized working grayscale
  double scale = 1.0;  // working width / input width
};

/// Picks the largest component whose box passes the area floor and the
/// aspect-ratio window. Throws NoTextRegion when none does.
Component select_text_component(const std::vector<Component>& comps, int image_width,
                                int image_height, const LocalizeConfig& cfg);

/// Largest Otsu-foreground component of the working image, or the whole
/// frame when the histogram is degenerate.
ObjectGeometry locate_object(const GrayImage& gray);

/// Binary blob map produced by the localization chain, before selection.
GrayImage text_blob_map(const GrayImage& working_gray, const LocalizeConfig& cfg);

Localization locate_text_region(const RgbImage& img, const LocalizeConfig& cfg = {});

}  // namespace printqc
