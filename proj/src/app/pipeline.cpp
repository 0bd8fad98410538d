#include "printqc/app/pipeline.hpp"

#include <chrono>
#include <cmath>

namespace printqc::app {
namespace {

class StageClock {
 public:
  explicit StageClock(bool enabled) : enabled_(enabled), start_(Clock::now()), last_(start_) {}

  void mark(std::string stage) {
    const auto now = Clock::now();
    if (enabled_) laps_.emplace_back(std::move(stage), ms(last_, now));
    last_ = now;
  }

  std::optional<std::vector<std::pair<std::string, double>>> finish() {
    if (!enabled_) return std::nullopt;
    auto out = laps_;
    out.emplace_back("total", ms(start_, Clock::now()));
    return out;
  }

 private:
  using Clock = std::chrono::steady_clock;
  static double ms(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  }

  bool enabled_;
  Clock::time_point start_;
  Clock::time_point last_;
  std::vector<std::pair<std::string, double>> laps_;
};

int scaled(int v, double scale) { return static_cast<int>(std::floor(v * scale + 0.5)); }

}  // namespace

std::vector<CharBox> hocr_boxes_in_region(const HocrDocument& doc, double scale,
                                          const BBox& region) {
  std::vector<CharBox> out;
  for (const CharBox& cb : doc.boxes) {
    const int x0 = std::max(scaled(cb.box.x, scale), region.x);
    const int y0 = std::max(scaled(cb.box.y, scale), region.y);
    const int x1 = std::min(scaled(cb.box.right(), scale), region.right());
    const int y1 = std::min(scaled(cb.box.bottom(), scale), region.bottom());
    if (x1 <= x0 || y1 <= y0) continue;
    CharBox b = cb;
    b.id = static_cast<int>(out.size()) + 1;
    b.box = {x0 - region.x, y0 - region.y, x1 - x0, y1 - y0};
    out.push_back(b);
  }
  if (out.empty()) throw Error(Errc::NoGlyphs, "no hOCR box falls inside the text region");
  return out;
}

GlyphExtraction extract_glyphs(const RgbImage& img, const RunConfig& cfg,
                               const HocrDocument* hocr) {
  GlyphExtraction ex;
  ex.loc = locate_text_region(img, cfg.localize);
  ex.binary = preprocess_for_ocr(ex.loc.region, cfg.ocr);
  ex.boxes = hocr ? hocr_boxes_in_region(*hocr, ex.loc.scale, ex.loc.region.box)
                  : segment_glyphs(ex.binary, cfg.segment);
  for (const CharBox& b : ex.boxes) ex.glyphs.push_back(normalize_glyph(ex.binary, b.box));
  return ex;
}

bool InspectionRun::passed() const {
  if (!ok() || !report.alignment || !report.shade) return false;
  if (!report.alignment->passed() || report.shade->bad != 0) return false;
  return !report.misprint || report.misprint->misprinted == 0;
}

InspectionRun inspect_image(const RgbImage& img, const std::string& image_id,
                            const RunConfig& cfg, const TrainingSet* store,
                            const HocrDocument* hocr) {
  InspectionRun run;
  InspectionReport& r = run.report;
  r.image = image_id;
  StageClock clock(cfg.timings);

  try {
    cfg.validate();
    const Localization loc = locate_text_region(img, cfg.localize);
    const TextRegion& region = loc.region;
    r.region = region.box;
    clock.mark("locate");

    r.alignment = assess_alignment(loc.object, region.box);
    clock.mark("align");

    const GrayImage binary = preprocess_for_ocr(region, cfg.ocr);
    r.boxes = hocr ? hocr_boxes_in_region(*hocr, loc.scale, region.box)
                   : segment_glyphs(binary, cfg.segment);
    clock.mark("segment");

    Eigen::ArrayXd values(static_cast<Eigen::Index>(r.boxes.size()));
    for (std::size_t i = 0; i < r.boxes.size(); ++i)
      values[static_cast<Eigen::Index>(i)] = box_intensity(region.crop, r.boxes[i].box);
    r.shade = classify_shade(values, cfg.n, cfg.polarity());
    if (values.size() >= 2 && r.shade->variance > 0.0) run.density = kde_estimate(values);
    clock.mark("shade");

    std::vector<PrintLabel> print_labels;
    if (store) {
      const KnnOptions knn{cfg.k, cfg.normalize_distance};
      Eigen::ArrayXd d(values.size());
      for (std::size_t i = 0; i < r.boxes.size(); ++i)
        d[static_cast<Eigen::Index>(i)] =
            nearest_distance(*store, normalize_glyph(binary, r.boxes[i].box), knn).distance;
      r.misprint = detect_misprints(d, cfg.m, cfg.upper_tail_only);
      print_labels = r.misprint->labels;
      clock.mark("misprint");
    }

    const GrayImage& working = loc.gray;
    RgbImage resized = resize_to_width(img, working.cols());
    run.annotated = annotate(resized, region.box, r.boxes, r.shade->labels, print_labels);
    clock.mark("annotate");
  } catch (const Error& e) {
    r.error = e.what();
  }
  r.timings_ms = clock.finish();
  return run;
}

}  // namespace printqc::app
