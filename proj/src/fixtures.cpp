#include "printqc/fixtures.hpp"

#include <json.hpp>

#include <cmath>
#include <random>
#include <sstream>

namespace printqc {
namespace {

struct FontEntry {
  char ch;
  FontGlyph rows;
};

// clang-format off
constexpr FontEntry kFont[] = {
  {'A', {".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
  {'B', {"####.", "#...#", "#...#", "####.", "#...#", "#...#", "####."}},
  {'C', {".###.", "#...#", "#....", "#....", "#....", "#...#", ".###."}},
  {'D', {"###..", "#..#.", "#...#", "#...#", "#...#", "#..#.", "###.."}},
  {'E', {"#####", "#....", "#....", "####.", "#....", "#....", "#####"}},
  {'F', {"#####", "#....", "#....", "####.", "#....", "#....", "#...."}},
  {'G', {".###.", "#...#", "#....", "#.###", "#...#", "#...#", ".####"}},
  {'H', {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"}},
  {'I', {".###.", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."}},
  {'J', {"..###", "...#.", "...#.", "...#.", "...#.", "#..#.", ".##.."}},
  {'K', {"#...#", "#..#.", "#.#..", "##...", "#.#..", "#..#.", "#...#"}},
  {'L', {"#....", "#....", "#....", "#....", "#....", "#....", "#####"}},
  {'M', {"#...#", "##.##", "#.#.#", "#.#.#", "#...#", "#...#", "#...#"}},
  {'N', {"#...#", "#...#", "##..#", "#.#.#", "#..##", "#...#", "#...#"}},
  {'O', {".###.", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
  {'P', {"####.", "#...#", "#...#", "####.", "#....", "#....", "#...."}},
  {'Q', {".###.", "#...#", "#...#", "#...#", "#.#.#", "#..#.", ".##.#"}},
  {'R', {"####.", "#...#", "#...#", "####.", "#.#..", "#..#.", "#...#"}},
  {'S', {".####", "#....", "#....", ".###.", "....#", "....#", "####."}},
  {'T', {"#####", "..#..", "..#..", "..#..", "..#..", "..#..", "..#.."}},
  {'U', {"#...#", "#...#", "#...#", "#...#", "#...#", "#...#", ".###."}},
  {'V', {"#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."}},
  {'W', {"#...#", "#...#", "#...#", "#.#.#", "#.#.#", "#.#.#", ".#.#."}},
  {'X', {"#...#", "#...#", ".#.#.", "..#..", ".#.#.", "#...#", "#...#"}},
  {'Y', {"#...#", "#...#", ".#.#.", "..#..", "..#..", "..#..", "..#.."}},
  {'Z', {"#####", "....#", "...#.", "..#..", ".#...", "#....", "#####"}},
  {'0', {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."}},
  {'1', {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."}},
  {'2', {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"}},
  {'3', {"#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."}},
  {'4', {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."}},
  {'5', {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."}},
  {'6', {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."}},
  {'7', {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."}},
  {'8', {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."}},
  {'9', {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."}},
  {'-', {".....", ".....", ".....", "#####", ".....", ".....", "....."}},
};
// clang-format on

using Bitmap = Eigen::Array<bool, 7, 5, Eigen::RowMajor>;

Bitmap to_bitmap(const FontGlyph& rows) {
  Bitmap bm;
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 5; ++c) bm(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] == '#';
  return bm;
}

bool eight_connected(const Bitmap& bm) {
  Bitmap seen = Bitmap::Constant(false);
  std::vector<std::pair<int, int>> stack;
  for (int r = 0; r < 7 && stack.empty(); ++r)
    for (int c = 0; c < 5 && stack.empty(); ++c)
      if (bm(r, c)) {
        stack.emplace_back(r, c);
        seen(r, c) = true;
      }
  while (!stack.empty()) {
    const auto [r, c] = stack.back();
    stack.pop_back();
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        const int nr = r + dr, nc = c + dc;
        if (nr < 0 || nr >= 7 || nc < 0 || nc >= 5 || !bm(nr, nc) || seen(nr, nc)) continue;
        seen(nr, nc) = true;
        stack.emplace_back(nr, nc);
      }
  }
  return (seen == bm).all();
}

// Random 8-connected bitmap spanning the full 5x7 cell.
Bitmap random_bitmap(std::mt19937_64& rng) {
  for (;;) {
    Bitmap bm;
    for (int r = 0; r < 7; ++r)
      for (int c = 0; c < 5; ++c) bm(r, c) = (rng() >> 63) != 0;
    const bool spans = bm.row(0).any() && bm.row(6).any() && bm.col(0).any() && bm.col(4).any();
    if (spans && eight_connected(bm)) return bm;
  }
}

struct Layout {
  std::vector<std::pair<int, int>> origins;  // top-left of each glyph cell
  std::vector<char> chars;
};

Layout layout(const LabelSpec& spec) {
  const int cell = spec.cell;
  const int pitch = (5 + spec.letter_spacing) * cell;
  const int line_pitch = (7 + spec.line_spacing) * cell;
  const int nlines = static_cast<int>(spec.lines.size());
  const int block_h = nlines * 7 * cell + (nlines - 1) * spec.line_spacing * cell;
  const int top = spec.object.y + (spec.object.height - block_h) / 2 + spec.offset_y;

  Layout out;
  for (int li = 0; li < nlines; ++li) {
    const std::string& line = spec.lines[static_cast<std::size_t>(li)];
    const int n = static_cast<int>(line.size());
    const int line_w = n * 5 * cell + (n - 1) * spec.letter_spacing * cell;
    const int left = spec.object.x + (spec.object.width - line_w) / 2 + spec.offset_x;
    for (int i = 0; i < n; ++i) {
      if (line[static_cast<std::size_t>(i)] == ' ') continue;
      out.origins.emplace_back(left + i * pitch, top + li * line_pitch);
      out.chars.push_back(line[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

struct Canvas {
  GrayImage gray;
  GrayImage mask;
  std::vector<TruthGlyph> truth;
};

Canvas draw(const LabelSpec& spec, std::mt19937_64& rng) {
  spec.validate();
  Canvas cv;
  cv.gray = GrayImage::Constant(spec.canvas_height, spec.canvas_width,
                                static_cast<std::uint8_t>(spec.surround));
  cv.gray.block(spec.object.y, spec.object.x, spec.object.height, spec.object.width)
      .setConstant(static_cast<std::uint8_t>(spec.background));
  cv.mask = GrayImage::Zero(spec.canvas_height, spec.canvas_width);

  const Layout lay = layout(spec);
  for (std::size_t g = 0; g < lay.chars.size(); ++g) {
    const int index = static_cast<int>(g);
    const Bitmap bm =
        spec.corrupt.contains(index) ? random_bitmap(rng) : to_bitmap(font_glyph(lay.chars[g]));
    const auto fade = spec.fade_map.find(index);
    const int ink =
        effective_ink(spec.background, spec.ink, fade == spec.fade_map.end() ? 1.0 : fade->second);

    const auto [ox, oy] = lay.origins[g];
    int x0 = spec.canvas_width, y0 = spec.canvas_height, x1 = -1, y1 = -1;
    for (int r = 0; r < 7; ++r)
      for (int c = 0; c < 5; ++c) {
        if (!bm(r, c)) continue;
        const int px = ox + c * spec.cell;
        const int py = oy + r * spec.cell;
        cv.gray.block(py, px, spec.cell, spec.cell).setConstant(static_cast<std::uint8_t>(ink));
        cv.mask.block(py, px, spec.cell, spec.cell).setConstant(255);
        x0 = std::min(x0, px);
        y0 = std::min(y0, py);
        x1 = std::max(x1, px + spec.cell);
        y1 = std::max(y1, py + spec.cell);
      }
    cv.truth.push_back({{x0, y0, x1 - x0, y1 - y0}, lay.chars[g], ink});
  }
  return cv;
}

[[noreturn]] void spec_error(const std::string& msg) { throw Error(Errc::SpecError, msg); }

}  // namespace

const FontGlyph& font_glyph(char c) {
  for (const FontEntry& e : kFont)
    if (e.ch == c) return e.rows;
  spec_error(std::string("no glyph for '") + c + "'");
}

int LabelSpec::glyph_count() const {
  int n = 0;
  for (const std::string& line : lines)
    for (const char c : line) n += c != ' ';
  return n;
}

void LabelSpec::validate() const {
  if (canvas_width < 32 || canvas_height < 32) spec_error("canvas must be at least 32x32");
  if (object.x < 0 || object.y < 0 || object.width < 1 || object.height < 1 ||
      object.x + object.width > canvas_width || object.y + object.height > canvas_height)
    spec_error("object box must lie inside the canvas");
  for (const int v : {surround, background, ink})
    if (v < 0 || v > 255) spec_error("intensities must lie in [0, 255]");
  if (cell < 1) spec_error("cell must be positive");
  if (letter_spacing < 0 || line_spacing < 0) spec_error("spacing must be non-negative");
  if (lines.empty()) spec_error("at least one text line is required");
  for (const std::string& line : lines) {
    if (line.empty()) spec_error("text lines must be non-empty");
    for (const char c : line)
      if (c != ' ') font_glyph(c);
  }
  const int glyphs = glyph_count();
  if (glyphs == 0) spec_error("text has no printable glyphs");
  for (const auto& [index, mult] : fade_map) {
    if (index < 0 || index >= glyphs) spec_error("fade_map index out of range");
    if (!(mult > 0.0 && mult <= 4.0)) spec_error("fade multipliers must lie in (0, 4]");
  }
  for (const int index : corrupt)
    if (index < 0 || index >= glyphs) spec_error("corrupt index out of range");
  if (!(noise >= 0.0 && noise <= 0.05)) spec_error("noise fraction must lie in [0, 0.05]");

  const Layout lay = layout(*this);
  for (const auto& [x, y] : lay.origins)
    if (x < 0 || y < 0 || x + 5 * cell > canvas_width || y + 7 * cell > canvas_height)
      spec_error("text does not fit on the canvas");
}

int effective_ink(int background, int ink, double multiplier) {
  const double v = background - multiplier * (background - ink);
  return static_cast<int>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

RenderedLabel render_label(const LabelSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  Canvas cv = draw(spec, rng);

  const long total = cv.gray.size();
  const long flips = std::lround(spec.noise * static_cast<double>(total));
  for (long i = 0; i < flips; ++i) {
    const auto pos = static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(total));
    cv.gray.data()[pos] = (rng() >> 63) != 0 ? 255 : 0;
  }
  return {RgbImage::from_gray(cv.gray), std::move(cv.truth)};
}

GrayImage ink_mask(const LabelSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  return draw(spec, rng).mask;
}

std::string emit_hocr(std::span<const TruthGlyph> truth) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<!DOCTYPE html PUBLIC \"-//W3C//DTD XHTML 1.0 Transitional//EN\"\n"
      << "    \"http://www.w3.org/TR/xhtml1/DTD/xhtml1-transitional.dtd\">\n"
      << "<html xmlns=\"http://www.w3.org/1999/xhtml\" xml:lang=\"en\" lang=\"en\">\n"
      << " <head>\n  <title></title>\n"
      << "  <meta http-equiv=\"Content-Type\" content=\"text/html;charset=utf-8\"/>\n"
      << "  <meta name='ocr-system' content='printqc'/>\n"
      << "  <meta name='ocr-capabilities' content='ocr_page ocrx_cword'/>\n"
      << " </head>\n <body>\n  <div class='ocr_page' id='page_1'>\n";
  int id = 1;
  for (const TruthGlyph& t : truth) {
    out << "   <span class='ocrx_cword' id='cword_" << id++ << "' title='bbox " << t.box.x << ' '
        << t.box.y << ' ' << t.box.right() << ' ' << t.box.bottom() << "'>";
    if (t.ch == '<') out << "&lt;";
    else if (t.ch == '&') out << "&amp;";
    else out << t.ch;
    out << "</span>\n";
  }
  out << "  </div>\n </body>\n</html>\n";
  return out.str();
}

LabelSpec label_spec_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    spec_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) spec_error("label spec must be a JSON object");

  LabelSpec s;
  try {
    if (j.contains("canvas")) {
      s.canvas_width = j.at("canvas").at("width").get<int>();
      s.canvas_height = j.at("canvas").at("height").get<int>();
    }
    if (j.contains("object")) {
      const auto& o = j.at("object");
      s.object = {o.at("x").get<int>(), o.at("y").get<int>(), o.at("width").get<int>(),
                  o.at("height").get<int>()};
    }
    s.surround = j.value("surround", s.surround);
    s.background = j.value("background", s.background);
    s.ink = j.value("ink", s.ink);
    s.lines = j.at("lines").get<std::vector<std::string>>();
    s.cell = j.value("cell", s.cell);
    s.letter_spacing = j.value("letter_spacing", s.letter_spacing);
    s.line_spacing = j.value("line_spacing", s.line_spacing);
    if (j.contains("offset")) {
      s.offset_x = j.at("offset").value("dx", 0);
      s.offset_y = j.at("offset").value("dy", 0);
    }
    if (j.contains("fade_map"))
      for (const auto& [key, mult] : j.at("fade_map").items())
        s.fade_map[std::stoi(key)] = mult.get<double>();
    if (j.contains("corrupt")) {
      for (const int idx : j.at("corrupt").get<std::vector<int>>()) s.corrupt.insert(idx);
    }
    s.noise = j.value("noise", s.noise);
    s.seed = j.value("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    spec_error(std::string("bad label spec field: ") + e.what());
  } catch (const std::logic_error& e) {
    spec_error(std::string("bad fade_map key: ") + e.what());
  }
  s.validate();
  return s;
}

std::string truth_to_json(std::span<const TruthGlyph> truth) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const TruthGlyph& t : truth)
    arr.push_back({{"x", t.box.x}, {"y", t.box.y}, {"w", t.box.w}, {"h", t.box.h},
                   {"char", std::string(1, t.ch)}, {"ink", t.ink}});
  return arr.dump(2) + "\n";
}

}  // namespace printqc
