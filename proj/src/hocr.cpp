#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>

#include "printqc/glyphseg.hpp"

namespace printqc {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    const std::size_t semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out += s[i];
      continue;
    }
    const std::string_view ent = s.substr(i + 1, semi - i - 1);
    if (ent == "amp") out += '&';
    else if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (ent.size() > 1 && ent[0] == '#') {
      const bool hex = ent[1] == 'x' || ent[1] == 'X';
      const std::string_view digits = ent.substr(hex ? 2 : 1);
      unsigned code = 0;
      const auto res =
          std::from_chars(digits.data(), digits.data() + digits.size(), code, hex ? 16 : 10);
      if (res.ec != std::errc{} || res.ptr != digits.data() + digits.size() || code > 0x7f) {
        out += s.substr(i, semi - i + 1);
      } else {
        out += static_cast<char>(code);
      }
    } else {
      out += s.substr(i, semi - i + 1);
    }
    i = semi;
  }
  return out;
}

struct Attribute {
  std::string name;
  std::string_view value;
  std::size_t value_offset = 0;
};

struct OpenElement {
  std::string name;
  long box_index = -1;  // index into the accepted boxes, -1 when not a target
  std::string text;
};

bool is_void_element(const std::string& name) {
  static constexpr std::string_view kVoid[] = {"area", "base", "br",   "col",  "embed",
                                               "hr",   "img",  "input", "link", "meta",
                                               "source", "track", "wbr"};
  return std::find(std::begin(kVoid), std::end(kVoid), name) != std::end(kVoid);
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  HocrDocument run() {
    std::size_t i = 0;
    while (i < text_.size()) {
      const std::size_t lt = text_.find('<', i);
      append_text(text_.substr(i, (lt == std::string_view::npos ? text_.size() : lt) - i));
      if (lt == std::string_view::npos) break;
      i = parse_markup(lt);
    }
    while (!stack_.empty()) close_top();
    return std::move(doc_);
  }

 private:
  std::size_t line_of(std::size_t offset) const {
    return 1 + static_cast<std::size_t>(
                   std::count(text_.begin(), text_.begin() + static_cast<long>(offset), '\n'));
  }

  void append_text(std::string_view chunk) {
    if (chunk.empty()) return;
    const std::string decoded = decode_entities(chunk);
    for (OpenElement& el : stack_)
      if (el.box_index >= 0) el.text += decoded;
  }

  std::size_t skip_past(std::size_t from, std::string_view terminator) {
    const std::size_t pos = text_.find(terminator, from);
    return pos == std::string_view::npos ? text_.size() : pos + terminator.size();
  }

  std::size_t parse_markup(std::size_t lt) {
    const std::string_view rest = text_.substr(lt);
    if (rest.starts_with("<!--")) return skip_past(lt + 4, "-->");
    if (rest.starts_with("<!") || rest.starts_with("<?")) return skip_past(lt + 2, ">");
    if (rest.starts_with("</")) {
      std::size_t i = lt + 2;
      const std::size_t start = i;
      while (i < text_.size() && !is_space(text_[i]) && text_[i] != '>') ++i;
      const std::string name = lower(text_.substr(start, i - start));
      close_element(name);
      return skip_past(i, ">");
    }
    return parse_start_tag(lt);
  }

  std::size_t parse_start_tag(std::size_t lt) {
    std::size_t i = lt + 1;
    const std::size_t name_start = i;
    while (i < text_.size() && !is_space(text_[i]) && text_[i] != '>' && text_[i] != '/') ++i;
    if (i == name_start) {
      append_text("<");
      return lt + 1;
    }
    const std::string name = lower(text_.substr(name_start, i - name_start));

    std::vector<Attribute> attrs;
    bool self_closing = false;
    while (i < text_.size()) {
      while (i < text_.size() && is_space(text_[i])) ++i;
      if (i >= text_.size()) break;
      if (text_[i] == '>') {
        ++i;
        break;
      }
      if (text_[i] == '/') {
        self_closing = true;
        ++i;
        continue;
      }
      const std::size_t an_start = i;
      while (i < text_.size() && !is_space(text_[i]) && text_[i] != '=' && text_[i] != '>' &&
             text_[i] != '/')
        ++i;
      Attribute attr;
      attr.name = lower(text_.substr(an_start, i - an_start));
      while (i < text_.size() && is_space(text_[i])) ++i;
      if (i < text_.size() && text_[i] == '=') {
        ++i;
        while (i < text_.size() && is_space(text_[i])) ++i;
        if (i < text_.size() && (text_[i] == '"' || text_[i] == '\'')) {
          const char quote = text_[i++];
          const std::size_t vstart = i;
          const std::size_t vend = text_.find(quote, vstart);
          const std::size_t stop = vend == std::string_view::npos ? text_.size() : vend;
          attr.value = text_.substr(vstart, stop - vstart);
          attr.value_offset = vstart;
          i = std::min(text_.size(), stop + 1);
        } else {
          const std::size_t vstart = i;
          while (i < text_.size() && !is_space(text_[i]) && text_[i] != '>') ++i;
          attr.value = text_.substr(vstart, i - vstart);
          attr.value_offset = vstart;
        }
      }
      if (attr.name.empty()) {
        ++i;
        continue;
      }
      attrs.push_back(std::move(attr));
    }

    const long box_index = register_target(attrs);
    if (!self_closing && !is_void_element(name)) {
      stack_.push_back({name, box_index, {}});
    }
    return i;
  }

  // Returns the index of the accepted box, or -1.
  long register_target(const std::vector<Attribute>& attrs) {
    const Attribute* cls = nullptr;
    const Attribute* title = nullptr;
    for (const Attribute& a : attrs) {
      if (a.name == "class") cls = &a;
      if (a.name == "title") title = &a;
    }
    if (cls == nullptr) return -1;
    bool target = false;
    for (std::string_view token : split_ws(cls->value))
      if (token == "ocrx_cword" || token == "ocr_char") target = true;
    if (!target) return -1;

    if (title == nullptr) {
      throw HocrError(line_of(cls->value_offset), cls->value_offset,
                      "character element without a title attribute");
    }
    const std::size_t line = line_of(title->value_offset);
    const std::size_t offset = title->value_offset;

    std::optional<std::string_view> bbox;
    std::string_view props = title->value;
    while (!props.empty()) {
      const std::size_t semi = props.find(';');
      const std::string_view prop = trim(props.substr(0, semi));
      const auto tokens = split_ws(prop);
      if (!tokens.empty() && tokens[0] == "bbox") bbox = prop;
      if (semi == std::string_view::npos) break;
      props.remove_prefix(semi + 1);
    }
    if (!bbox) throw HocrError(line, offset, "title has no bbox property");

    const auto tokens = split_ws(*bbox);
    if (tokens.size() != 5)
      throw HocrError(line, offset,
                      "bbox needs 4 coordinates, got " + std::to_string(tokens.size() - 1));
    long coords[4];
    for (int k = 0; k < 4; ++k) {
      const std::string_view tok = tokens[static_cast<std::size_t>(k) + 1];
      const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), coords[k]);
      if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || coords[k] < 0 ||
          tok.front() == '-' || tok.front() == '+')
        throw HocrError(line, offset, "bbox coordinate '" + std::string(tok) +
                                          "' is not a non-negative integer");
    }
    if (coords[2] <= coords[0] || coords[3] <= coords[1]) {
      doc_.rejected.push_back({line, offset, "empty or inverted bbox"});
      return -1;
    }

    CharBox box;
    box.id = static_cast<int>(doc_.boxes.size()) + 1;
    box.box = {static_cast<int>(coords[0]), static_cast<int>(coords[1]),
               static_cast<int>(coords[2] - coords[0]), static_cast<int>(coords[3] - coords[1])};
    box.source = BoxSource::Hocr;
    doc_.boxes.push_back(box);
    return static_cast<long>(doc_.boxes.size()) - 1;
  }

  void close_top() {
    OpenElement el = std::move(stack_.back());
    stack_.pop_back();
    if (el.box_index < 0) return;
    const std::string_view t = trim(el.text);
    if (t.size() == 1) doc_.boxes[static_cast<std::size_t>(el.box_index)].recognized = t.front();
  }

  void close_element(const std::string& name) {
    const auto it = std::find_if(stack_.rbegin(), stack_.rend(),
                                 [&](const OpenElement& el) { return el.name == name; });
    if (it == stack_.rend()) return;
    const std::size_t depth = static_cast<std::size_t>(std::distance(it, stack_.rend())) - 1;
    while (stack_.size() > depth) close_top();
  }

  std::string_view text_;
  std::vector<OpenElement> stack_;
  HocrDocument doc_;
};

}  // namespace

HocrDocument parse_hocr(std::string_view text) { return Parser(text).run(); }

}  // namespace printqc
