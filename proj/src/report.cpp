#include "printqc/report.hpp"

#include <json.hpp>

#include <charconv>

namespace printqc {
namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string two_decimals(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, round2(v), std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

// Minimal pretty printer with a fixed layout, so output bytes depend only
// on the report contents.
class Writer {
 public:
  void open(char bracket) {
    out_ += bracket;
    first_.push_back(true);
  }
  void close(char bracket) {
    const bool empty = first_.back();
    first_.pop_back();
    if (!empty) newline();
    out_ += bracket;
  }
  void key(std::string_view k) {
    item();
    out_ += json_string(k);
    out_ += ": ";
  }
  void item() {
    if (!first_.back()) out_ += ',';
    first_.back() = false;
    newline();
  }
  void raw(std::string_view v) { out_ += v; }
  void field(std::string_view k, std::string_view raw_value) {
    key(k);
    raw(raw_value);
  }
  void field(std::string_view k, long v) { field(k, std::to_string(v)); }
  void field(std::string_view k, int v) { field(k, std::to_string(v)); }
  void boolean(std::string_view k, bool v) { field(k, std::string_view(v ? "true" : "false")); }
  void real(std::string_view k, double v) { field(k, shortest(v)); }

  std::string finish() { return out_ + "\n"; }

 private:
  void newline() {
    out_ += '\n';
    out_.append(2 * first_.size(), ' ');
  }

  std::string out_;
  std::vector<bool> first_;
};

void write_bbox(Writer& w, std::string_view k, const BBox& b) {
  w.field(k, "{\"x\": " + std::to_string(b.x) + ", \"y\": " + std::to_string(b.y) +
                 ", \"w\": " + std::to_string(b.w) + ", \"h\": " + std::to_string(b.h) + "}");
}

[[noreturn]] void schema_error(const std::string& msg) {
  throw Error(Errc::SpecError, "report schema: " + msg);
}

BBox read_bbox(const nlohmann::json& j) {
  return {j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(), j.at("h").get<int>()};
}

ShadeLabel shade_label_from(std::string_view s) {
  if (s == "Good") return ShadeLabel::Good;
  if (s == "Over") return ShadeLabel::Over;
  if (s == "Faded") return ShadeLabel::Faded;
  schema_error("unknown shade label '" + std::string(s) + "'");
}

PrintLabel print_label_from(std::string_view s) {
  if (s == "GoodPrint") return PrintLabel::GoodPrint;
  if (s == "Misprint") return PrintLabel::Misprint;
  schema_error("unknown misprint label '" + std::string(s) + "'");
}

}  // namespace

Rgb color_of(ShadeLabel label) {
  switch (label) {
    case ShadeLabel::Good: return kGreen;
    case ShadeLabel::Over: return kRed;
    case ShadeLabel::Faded: return kYellow;
  }
  return kGreen;
}

void draw_rect(RgbImage& img, const BBox& box, Rgb color) {
  if (!box.inside(img.width(), img.height()))
    throw Error(Errc::OutOfBounds, "rectangle outside image");
  auto paint = [&](int y, int x) {
    img.r(y, x) = color.r;
    img.g(y, x) = color.g;
    img.b(y, x) = color.b;
  };
  for (int x = box.x; x < box.right(); ++x) {
    paint(box.y, x);
    paint(box.bottom() - 1, x);
  }
  for (int y = box.y; y < box.bottom(); ++y) {
    paint(y, box.x);
    paint(y, box.right() - 1);
  }
}

RgbImage annotate(const RgbImage& img, const BBox& region, std::span<const CharBox> boxes,
                  std::span<const ShadeLabel> shade, std::span<const PrintLabel> misprint) {
  if (!shade.empty() && shade.size() != boxes.size())
    throw Error(Errc::OutOfBounds, "shade labels do not match the box count");
  if (!misprint.empty() && misprint.size() != boxes.size())
    throw Error(Errc::OutOfBounds, "misprint labels do not match the box count");
  for (const CharBox& b : boxes)
    if (!b.box.translated(region.x, region.y).inside(img.width(), img.height()))
      throw Error(Errc::OutOfBounds, "box " + std::to_string(b.id) + " falls outside the image");

  RgbImage out = img;
  draw_rect(out, region, kRed);
  for (std::size_t i = 0; i < shade.size(); ++i)
    draw_rect(out, boxes[i].box.translated(region.x, region.y), color_of(shade[i]));
  for (std::size_t i = 0; i < misprint.size(); ++i) {
    if (misprint[i] != PrintLabel::Misprint) continue;
    const BBox b = boxes[i].box.translated(region.x, region.y);
    // Boxes too small to hold an inset outline get none.
    if (b.w > 4 && b.h > 4) draw_rect(out, {b.x + 2, b.y + 2, b.w - 4, b.h - 4}, kRed);
  }
  return out;
}

std::string_view to_string(ShadeLabel label) {
  switch (label) {
    case ShadeLabel::Good: return "Good";
    case ShadeLabel::Over: return "Over";
    case ShadeLabel::Faded: return "Faded";
  }
  return "Good";
}

std::string_view to_string(PrintLabel label) {
  return label == PrintLabel::GoodPrint ? "GoodPrint" : "Misprint";
}

std::string write_report(const InspectionReport& r) {
  Writer w;
  w.open('{');
  w.field("image", json_string(r.image));

  if (r.region) write_bbox(w, "region", *r.region);
  else w.field("region", "null");

  if (r.alignment) {
    const AlignmentResult& a = *r.alignment;
    w.key("alignment");
    w.open('{');
    w.field("u", a.up);
    w.field("d", a.down);
    w.field("l", a.left);
    w.field("ud_thresh", a.ud_thresh);
    w.field("l_thresh", a.l_thresh);
    w.boolean("vertical", a.vertical_pass);
    w.boolean("horizontal", a.horizontal_pass);
    w.close('}');
  } else {
    w.field("alignment", "null");
  }

  if (r.shade) {
    const ShadeStats& s = *r.shade;
    w.key("shade");
    w.open('{');
    w.real("n", s.n);
    w.real("mean", s.mean);
    w.real("variance", s.variance);
    w.key("boxes");
    w.open('[');
    for (std::size_t i = 0; i < s.labels.size(); ++i) {
      w.item();
      const BBox& b = r.boxes.at(i).box;
      w.raw("{\"u\": " + std::to_string(r.boxes[i].id) + ", \"bbox\": {\"x\": " +
            std::to_string(b.x) + ", \"y\": " + std::to_string(b.y) + ", \"w\": " +
            std::to_string(b.w) + ", \"h\": " + std::to_string(b.h) + "}, \"h_map\": " +
            shortest(s.values[static_cast<Eigen::Index>(i)]) + ", \"label\": " +
            json_string(to_string(s.labels[i])) + "}");
    }
    w.close(']');
    w.field("gb", s.good);
    w.field("bb", s.bad);
    w.field("qs_i", two_decimals(s.qs_i));
    w.close('}');
  } else {
    w.field("shade", "null");
  }

  if (r.misprint) {
    const MisprintResult& m = *r.misprint;
    w.key("misprint");
    w.open('{');
    w.real("m", m.m);
    w.real("mean", m.mean);
    w.real("variance", m.variance);
    w.key("boxes");
    w.open('[');
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      w.item();
      w.raw("{\"u\": " + std::to_string(r.boxes.at(i).id) + ", \"d\": " +
            shortest(m.distances[static_cast<Eigen::Index>(i)]) + ", \"label\": " +
            json_string(to_string(m.labels[i])) + "}");
    }
    w.close(']');
    w.field("gpb", m.good);
    w.field("mpb", m.misprinted);
    w.field("qs_gpb", two_decimals(m.qs_gpb));
    w.close('}');
  } else {
    w.field("misprint", "null");
  }

  if (r.timings_ms) {
    w.key("timings_ms");
    w.open('{');
    for (const auto& [stage, ms] : *r.timings_ms) w.real(stage, ms);
    w.close('}');
  } else {
    w.field("timings_ms", "null");
  }

  if (r.error) w.field("error", json_string(*r.error));
  w.close('}');
  return w.finish();
}

InspectionReport read_report(std::string_view text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    schema_error(e.what());
  }

  InspectionReport r;
  try {
    r.image = j.at("image").get<std::string>();
    if (!j.at("region").is_null()) r.region = read_bbox(j.at("region"));
    if (!j.at("alignment").is_null()) {
      const auto& a = j.at("alignment");
      AlignmentResult ar = decide_alignment(a.at("u").get<int>(), a.at("d").get<int>(),
                                            a.at("l").get<int>(), a.at("ud_thresh").get<int>(),
                                            a.at("l_thresh").get<int>());
      ar.vertical_pass = a.at("vertical").get<bool>();
      ar.horizontal_pass = a.at("horizontal").get<bool>();
      r.alignment = ar;
    }
    if (!j.at("shade").is_null()) {
      const auto& s = j.at("shade");
      ShadeStats st;
      st.n = s.at("n").get<double>();
      st.mean = s.at("mean").get<double>();
      st.variance = s.at("variance").get<double>();
      const auto& boxes = s.at("boxes");
      st.values.resize(static_cast<Eigen::Index>(boxes.size()));
      Eigen::Index i = 0;
      for (const auto& b : boxes) {
        r.boxes.push_back({b.at("u").get<int>(), read_bbox(b.at("bbox")), BoxSource::Internal,
                           std::nullopt});
        st.values[i++] = b.at("h_map").get<double>();
        st.labels.push_back(shade_label_from(b.at("label").get<std::string>()));
      }
      st.good = s.at("gb").get<long>();
      st.bad = s.at("bb").get<long>();
      st.qs_i = s.at("qs_i").get<double>();
      r.shade = st;
    }
    if (!j.at("misprint").is_null()) {
      const auto& m = j.at("misprint");
      MisprintResult mr;
      mr.m = m.at("m").get<double>();
      mr.mean = m.at("mean").get<double>();
      mr.variance = m.at("variance").get<double>();
      const auto& boxes = m.at("boxes");
      mr.distances.resize(static_cast<Eigen::Index>(boxes.size()));
      Eigen::Index i = 0;
      for (const auto& b : boxes) {
        mr.distances[i++] = b.at("d").get<double>();
        mr.labels.push_back(print_label_from(b.at("label").get<std::string>()));
      }
      mr.good = m.at("gpb").get<long>();
      mr.misprinted = m.at("mpb").get<long>();
      mr.qs_gpb = m.at("qs_gpb").get<double>();
      r.misprint = mr;
    }
    if (!j.at("timings_ms").is_null()) {
      std::vector<std::pair<std::string, double>> t;
      for (const auto& [k, v] : j.at("timings_ms").items()) t.emplace_back(k, v.get<double>());
      r.timings_ms = t;
    }
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    schema_error(e.what());
  }
  return r;
}

}  // namespace printqc
