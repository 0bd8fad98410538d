#include "printqc/textloc.hpp"

#include <string>

namespace printqc {

void LocalizeConfig::validate() const {
  if (resize_width < 32) throw Error(Errc::SpecError, "resize_width must be at least 32");
  if (!(aspect_min < aspect_max) || aspect_min <= 0)
    throw Error(Errc::SpecError, "aspect_min must be positive and below aspect_max");
  if (!(min_area_frac > 0.0 && min_area_frac < 1.0))
    throw Error(Errc::SpecError, "min_area_frac must lie in (0, 1)");
  if (dilate_iterations < 0) throw Error(Errc::SpecError, "dilate_iterations must be >= 0");
  for (const StructuringElement& se : {word_close, blob_close})
    StructuringElement::rect(se.width, se.height);
  if (median < 1 || median % 2 == 0) throw Error(Errc::EvenKernel, "median size must be odd");
  if (blur_width % 2 == 0 || blur_height % 2 == 0 || blur_width < 1 || blur_height < 1)
    throw Error(Errc::EvenKernel, "blur kernel sides must be odd");
}

Component select_text_component(const std::vector<Component>& comps, int image_width,
                                int image_height, const LocalizeConfig& cfg) {
  const double min_area = cfg.min_area_frac * image_width * image_height;
  const Component* best = nullptr;
  for (const Component& c : comps) {
    const double aspect = static_cast<double>(c.box.w) / c.box.h;
    if (c.area < min_area || aspect < cfg.aspect_min || aspect > cfg.aspect_max) continue;
    if (best == nullptr || c.area > best->area) best = &c;
  }
  if (best == nullptr)
    throw Error(Errc::NoTextRegion,
                std::to_string(comps.size()) + " candidate blobs, none passed area/aspect filters");
  return *best;
}

ObjectGeometry locate_object(const GrayImage& gray) {
  const ObjectGeometry frame{0, 0, static_cast<int>(gray.cols()), static_cast<int>(gray.rows())};
  try {
    const auto comps = connected_components(otsu_threshold(gray).binary);
    const Component* largest = nullptr;
    for (const Component& c : comps)
      if (largest == nullptr || c.area > largest->area) largest = &c;
    if (largest == nullptr) return frame;
    return {largest->box.x, largest->box.y, largest->box.w, largest->box.h};
  } catch (const Error& e) {
    if (e.code() == Errc::DegenerateHistogram) return frame;
    throw;
  }
}

GrayImage text_blob_map(const GrayImage& working_gray, const LocalizeConfig& cfg) {
  GrayImage img = cfg.median > 1 ? median_filter(working_gray, cfg.median) : working_gray;
  img = gaussian_blur(img, cfg.blur_width, cfg.blur_height);
  img = equalize_histogram(img);
  img = morphology(img, MorphOp::TopHat, cfg.word_close);
  img = gradient_x_normalized(img);
  img = morphology(img, MorphOp::Close, cfg.word_close);
  img = otsu_threshold(img).binary;
  img = morphology(img, MorphOp::Close, cfg.blob_close);
  for (int i = 0; i < cfg.dilate_iterations; ++i) img = dilate(img, cfg.word_close);
  return img;
}

Localization locate_text_region(const RgbImage& img, const LocalizeConfig& cfg) {
  cfg.validate();
  if (img.width() < 32 || img.height() < 32)
    throw Error(Errc::OutOfBounds, "input image must be at least 32x32");

  Localization out;
  out.gray = resize_to_width(to_grayscale(img), cfg.resize_width);
  out.scale = static_cast<double>(cfg.resize_width) / img.width();
  const int w = static_cast<int>(out.gray.cols());
  const int h = static_cast<int>(out.gray.rows());

  GrayImage blobs;
  try {
    blobs = text_blob_map(out.gray, cfg);
  } catch (const Error& e) {
    if (e.code() == Errc::DegenerateHistogram)
      throw Error(Errc::NoTextRegion, "no contrast in the text localization chain");
    throw;
  }

  const Component best = select_text_component(connected_components(blobs), w, h, cfg);
  out.region.box = best.box;
  out.region.crop = crop(out.gray, best.box);
  out.region.score = static_cast<double>(best.area);
  out.object = locate_object(out.gray);
  return out;
}

}  // namespace printqc
