#include <doctest.h>

#include <json.hpp>

#include "../support/labels.hpp"
#include "printqc/fixtures.hpp"
#include "printqc/glyphseg.hpp"

using namespace printqc;

TEST_CASE("font covers the alphabet") {
  for (char c : testlabels::kAlphabet) {
    const FontGlyph& g = font_glyph(c);
    bool any = false;
    for (std::string_view row : g) {
      CHECK(row.size() == 5);
      any = any || row.find('#') != std::string_view::npos;
    }
    CHECK(any);
  }
  CHECK_THROWS_AS(font_glyph('a'), Error);
  CHECK_THROWS_AS(font_glyph('@'), Error);
}

TEST_CASE("effective_ink") {
  CHECK(effective_ink(220, 40, 1.0) == 40);
  CHECK(effective_ink(220, 40, 0.5) == 130);
  CHECK(effective_ink(220, 40, 2.0) == 0);
  CHECK(effective_ink(220, 200, 0.25) == 215);
}

TEST_CASE("render_label single glyph") {
  LabelSpec spec;
  spec.lines = {"A"};
  const RenderedLabel label = render_label(spec);
  REQUIRE(label.truth.size() == 1);
  CHECK(label.truth[0].ch == 'A');
  CHECK(label.truth[0].ink == 40);
  CHECK(label.truth[0].box.w == 5 * spec.cell);
  CHECK(label.truth[0].box.h == 7 * spec.cell);
  const GrayImage mask = ink_mask(spec);
  CHECK(((mask == 255) == (label.image.r == 40)).all());
  CHECK(label.image.r(0, 0) == spec.surround);
  CHECK(label.image.r(spec.object.y + 1, spec.object.x + 1) == spec.background);
}

TEST_CASE("render_label two lines") {
  const LabelSpec spec = testlabels::lot_label();
  const RenderedLabel label = render_label(spec);
  CHECK(spec.glyph_count() == 23);
  REQUIRE(label.truth.size() == 23);
  const GrayImage mask = ink_mask(spec);
  for (std::size_t i = 0; i < label.truth.size(); ++i) {
    const BBox b = label.truth[i].box;
    CHECK((crop(mask, b) == 255).count() >= 1);
    for (std::size_t j = i + 1; j < label.truth.size(); ++j) {
      const BBox o = label.truth[j].box;
      const bool apart = b.right() <= o.x || o.right() <= b.x || b.bottom() <= o.y ||
                         o.bottom() <= b.y;
      CHECK(apart);
    }
  }
  CHECK(label.truth[0].ch == 'H');
  CHECK(label.truth[12].ch == '5');
  CHECK(label.truth[12].box.y > label.truth[11].box.bottom());
}

TEST_CASE("fade and corruption") {
  LabelSpec spec = testlabels::lot_label();
  spec.fade_map[3] = 0.5;
  spec.corrupt = {7};
  const RenderedLabel label = render_label(spec);
  CHECK(label.truth[3].ink == 130);
  CHECK(label.truth[2].ink == 40);
  CHECK((crop(label.image.r, label.truth[3].box) != 40).all());

  // A corrupted glyph is one 8-connected blob spanning its whole cell.
  const BBox b = label.truth[7].box;
  CHECK(b.w == 5 * spec.cell);
  CHECK(b.h == 7 * spec.cell);
  const GrayImage patch = crop(ink_mask(spec), b);
  CHECK(connected_components(patch).size() == 1);

  LabelSpec clean = testlabels::lot_label();
  CHECK_FALSE(render_label(clean).image == label.image);
}

TEST_CASE("render_label is deterministic") {
  LabelSpec spec = testlabels::lot_label(11);
  spec.corrupt = {1, 2};
  spec.noise = 0.02;
  CHECK(render_label(spec).image == render_label(spec).image);
  LabelSpec other = spec;
  other.seed = 12;
  CHECK_FALSE(render_label(other).image == render_label(spec).image);
}

TEST_CASE("spaces advance without glyphs") {
  LabelSpec spec;
  spec.lines = {"AB CD"};
  CHECK(spec.glyph_count() == 4);
  const RenderedLabel label = render_label(spec);
  REQUIRE(label.truth.size() == 4);
  CHECK(label.truth[2].box.x - label.truth[1].box.right() >
        label.truth[1].box.x - label.truth[0].box.right());
}

TEST_CASE("spec validation") {
  auto bad = [](auto mutate) {
    LabelSpec s = testlabels::lot_label();
    mutate(s);
    try {
      s.validate();
    } catch (const Error& e) {
      return e.code() == Errc::SpecError;
    }
    return false;
  };
  CHECK(bad([](LabelSpec& s) { s.lines.clear(); }));
  CHECK(bad([](LabelSpec& s) { s.lines = {""}; }));
  CHECK(bad([](LabelSpec& s) { s.lines = {"abc"}; }));
  CHECK(bad([](LabelSpec& s) { s.fade_map[0] = 0.0; }));
  CHECK(bad([](LabelSpec& s) { s.fade_map[0] = 4.5; }));
  CHECK(bad([](LabelSpec& s) { s.fade_map[23] = 1.0; }));
  CHECK(bad([](LabelSpec& s) { s.corrupt = {-1}; }));
  CHECK(bad([](LabelSpec& s) { s.noise = 0.06; }));
  CHECK(bad([](LabelSpec& s) { s.cell = 40; }));
  CHECK(bad([](LabelSpec& s) { s.object = {400, 0, 200, 100}; }));
  CHECK_FALSE(bad([](LabelSpec& s) { s.fade_map[0] = 4.0; }));
}

TEST_CASE("emit_hocr round trip") {
  const RenderedLabel label = render_label(testlabels::lot_label());
  const std::string doc = emit_hocr(label.truth);
  const HocrDocument parsed = parse_hocr(doc);
  REQUIRE(parsed.boxes.size() == 23);
  for (std::size_t i = 0; i < 23; ++i) {
    CHECK(parsed.boxes[i].box == label.truth[i].box);
    CHECK(parsed.boxes[i].recognized == label.truth[i].ch);
  }

  const std::vector<TruthGlyph> one{{{1, 2, 3, 4}, 'Z', 40}};
  const std::string single = emit_hocr(one);
  std::size_t count = 0;
  for (std::size_t p = single.find("ocrx_cword"); p != std::string::npos;
       p = single.find("ocrx_cword", p + 1))
    ++count;
  // One element plus the capabilities declaration in the header.
  CHECK(count == 2);
  CHECK(parse_hocr(single).boxes.size() == 1);
}

TEST_CASE("json forms") {
  const LabelSpec s = label_spec_from_json(
      R"({"lines": ["AB", "C"], "fade_map": {"1": 0.5}, "corrupt": [2], "seed": 5,
          "object": {"x": 10, "y": 20, "width": 300, "height": 200}})");
  CHECK(s.lines == std::vector<std::string>{"AB", "C"});
  CHECK(s.fade_map.at(1) == 0.5);
  CHECK(s.corrupt.contains(2));
  CHECK(s.seed == 5);
  CHECK(s.object == ObjectGeometry{10, 20, 300, 200});

  CHECK_THROWS_AS(label_spec_from_json("{"), Error);
  CHECK_THROWS_AS(label_spec_from_json("[]"), Error);
  CHECK_THROWS_AS(label_spec_from_json(R"({"seed": 1})"), Error);
  CHECK_THROWS_AS(label_spec_from_json(R"({"lines": ["A"], "fade_map": {"0": 0}})"), Error);
  CHECK_THROWS_AS(label_spec_from_json(R"({"lines": ["A"], "fade_map": {"x": 1}})"), Error);

  const std::vector<TruthGlyph> t{{{1, 2, 3, 4}, 'Q', 40}, {{5, 6, 7, 8}, '-', 130}};
  const auto j = nlohmann::json::parse(truth_to_json(t));
  REQUIRE(j.size() == 2);
  CHECK(j[0]["x"] == 1);
  CHECK(j[0]["h"] == 4);
  CHECK(j[1]["char"] == "-");
  CHECK(j[1]["ink"] == 130);
}
