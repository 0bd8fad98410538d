#include <doctest.h>

#include "printqc/fixtures.hpp"
#include "printqc/textloc.hpp"

using namespace printqc;

namespace {

LabelSpec one_row() {
  LabelSpec s;
  s.lines = {"HQ1RND58OAEG"};
  return s;
}

BBox union_box(const std::vector<TruthGlyph>& truth) {
  int x0 = 1 << 30, y0 = 1 << 30, x1 = 0, y1 = 0;
  for (const TruthGlyph& t : truth) {
    x0 = std::min(x0, t.box.x);
    y0 = std::min(y0, t.box.y);
    x1 = std::max(x1, t.box.right());
    y1 = std::max(y1, t.box.bottom());
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

double covered_fraction(const GrayImage& mask, const BBox& box) {
  const long total = (mask == 255).count();
  const long inside = (crop(mask, box) == 255).count();
  return static_cast<double>(inside) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("locate_text_region on a one-row label") {
  const LabelSpec spec = one_row();
  const RenderedLabel label = render_label(spec);
  const Localization loc = locate_text_region(label.image);
  CHECK(loc.scale == 1.0);
  CHECK(covered_fraction(ink_mask(spec), loc.region.box) >= 0.95);
  CHECK(loc.region.box.area() <= 3 * union_box(label.truth).area());
  CHECK(loc.region.crop.rows() == loc.region.box.h);
  CHECK(loc.region.crop.cols() == loc.region.box.w);
  CHECK(loc.object == ObjectGeometry{50, 40, 400, 260});
  CHECK(loc.object.box().contains(loc.region.box));
}

TEST_CASE("locate_text_region on the two-line label") {
  LabelSpec spec;
  spec.lines = {"HQ1RND58OAEG", "5MU8NZ6QHR9"};
  const RenderedLabel label = render_label(spec);
  const Localization loc = locate_text_region(label.image);
  CHECK(covered_fraction(ink_mask(spec), loc.region.box) >= 0.95);
  CHECK(loc.region.box.area() <= 3 * union_box(label.truth).area());
}

TEST_CASE("locate_text_region works at another input width") {
  LabelSpec spec;
  spec.lines = {"HQ1RND58OAEG", "5MU8NZ6QHR9"};
  spec.canvas_width = 1000;
  spec.canvas_height = 680;
  spec.object = {100, 80, 800, 520};
  spec.cell = 8;
  const Localization loc = locate_text_region(render_label(spec).image);
  CHECK(loc.scale == doctest::Approx(0.5));
  CHECK(loc.gray.cols() == 500);
  CHECK(loc.gray.rows() == 340);
  CHECK(loc.object.box().contains(loc.region.box));
}

TEST_CASE("locate_text_region is deterministic") {
  const RenderedLabel label = render_label(one_row());
  CHECK(locate_text_region(label.image).region.box == locate_text_region(label.image).region.box);
}

TEST_CASE("salt-and-pepper noise barely moves the region") {
  LabelSpec spec;
  spec.lines = {"HQ1RND58OAEG", "5MU8NZ6QHR9"};
  const BBox clean = locate_text_region(render_label(spec).image).region.box;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    spec.noise = 0.01;
    spec.seed = seed;
    const BBox noisy = locate_text_region(render_label(spec).image).region.box;
    CHECK(std::abs(noisy.x - clean.x) <= 5);
    CHECK(std::abs(noisy.y - clean.y) <= 5);
    CHECK(std::abs(noisy.right() - clean.right()) <= 5);
    CHECK(std::abs(noisy.bottom() - clean.bottom()) <= 5);
  }
}

TEST_CASE("blank image has no text region") {
  RgbImage blank = RgbImage::from_gray(GrayImage::Constant(200, 300, 128));
  try {
    locate_text_region(blank);
    FAIL("expected NoTextRegion");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NoTextRegion);
  }
}

TEST_CASE("tiny input is rejected") {
  RgbImage tiny = RgbImage::from_gray(GrayImage::Zero(20, 40));
  CHECK_THROWS_AS(locate_text_region(tiny), Error);
}

TEST_CASE("select_text_component filters on aspect then area") {
  const LocalizeConfig cfg;
  const std::vector<Component> comps{{{10, 10, 50, 50}, 2500}, {{100, 200, 300, 40}, 12000}};
  CHECK(select_text_component(comps, 500, 340, cfg).box == BBox{100, 200, 300, 40});

  const std::vector<Component> square{{{10, 10, 80, 80}, 6400}};
  CHECK_THROWS_AS(select_text_component(square, 500, 340, cfg), Error);

  // A wide blob below the area floor does not count.
  const std::vector<Component> speck{{{10, 10, 30, 5}, 150}};
  CHECK_THROWS_AS(select_text_component(speck, 500, 340, cfg), Error);

  const std::vector<Component> two{{{0, 0, 200, 40}, 8000}, {{0, 100, 300, 40}, 12000}};
  CHECK(select_text_component(two, 500, 340, cfg).box.y == 100);
}

TEST_CASE("LocalizeConfig validation") {
  LocalizeConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.aspect_min = 12;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.min_area_frac = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.blur_width = 8;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.word_close = {4, 5};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.median = 2;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.median = 1;
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("locate_object falls back to the frame") {
  CHECK(locate_object(GrayImage::Constant(30, 40, 9)) == ObjectGeometry{0, 0, 40, 30});
  GrayImage img = GrayImage::Zero(30, 40);
  img.block(5, 6, 10, 20).setConstant(200);
  CHECK(locate_object(img) == ObjectGeometry{6, 5, 20, 10});
}
