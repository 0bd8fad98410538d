#include "printqc/app/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace printqc::app {
namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(Errc::SpecError, "config: " + msg);
}

StructuringElement read_se(const nlohmann::json& j) {
  const auto v = j.get<std::vector<int>>();
  if (v.size() != 2) config_error("structuring elements are [width, height] pairs");
  return StructuringElement::rect(v[0], v[1]);
}

}  // namespace

void RunConfig::validate() const {
  localize.validate();
  if (!(n > 0.0)) config_error("n must be positive");
  if (!(m > 0.0)) config_error("m must be positive");
  if (k < 1) config_error("k must be at least 1");
}

Polarity parse_polarity(std::string_view text) {
  if (text == "ink-dark") return Polarity::InkDark;
  if (text == "ink-light") return Polarity::InkLight;
  config_error("polarity must be ink-dark or ink-light, got '" + std::string(text) + "'");
}

std::string_view to_string(Polarity polarity) {
  return polarity == Polarity::InkDark ? "ink-dark" : "ink-light";
}

void apply_config_json(RunConfig& cfg, std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    config_error(e.what());
  }
  if (!j.is_object()) config_error("top level must be an object");

  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "resize_width") cfg.localize.resize_width = v.get<int>();
      else if (key == "median") cfg.localize.median = v.get<int>();
      else if (key == "blur") {
        const auto b = v.get<std::vector<int>>();
        if (b.size() != 2) config_error("blur is a [width, height] pair");
        cfg.localize.blur_width = b[0];
        cfg.localize.blur_height = b[1];
      } else if (key == "word_close") cfg.localize.word_close = read_se(v);
      else if (key == "blob_close") cfg.localize.blob_close = read_se(v);
      else if (key == "dilate_iterations") cfg.localize.dilate_iterations = v.get<int>();
      else if (key == "aspect_min") cfg.localize.aspect_min = v.get<double>();
      else if (key == "aspect_max") cfg.localize.aspect_max = v.get<double>();
      else if (key == "min_area_frac") cfg.localize.min_area_frac = v.get<double>();
      else if (key == "bilateral") {
        cfg.ocr.bilateral_d = v.value("d", cfg.ocr.bilateral_d);
        cfg.ocr.sigma_color = v.value("sigma_color", cfg.ocr.sigma_color);
        cfg.ocr.sigma_space = v.value("sigma_space", cfg.ocr.sigma_space);
      } else if (key == "n") cfg.n = v.get<double>();
      else if (key == "m") cfg.m = v.get<double>();
      else if (key == "k") cfg.k = v.get<int>();
      else if (key == "polarity") cfg.set_polarity(parse_polarity(v.get<std::string>()));
      else if (key == "normalize_distance") cfg.normalize_distance = v.get<bool>();
      else if (key == "upper_tail_only") cfg.upper_tail_only = v.get<bool>();
      else if (key == "hocr") cfg.hocr = v.get<std::string>();
      else if (key == "store") cfg.store = v.get<std::string>();
      else if (key == "out") cfg.out_dir = v.get<std::string>();
      else if (key == "timings") cfg.timings = v.get<bool>();
      else config_error("unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    config_error(e.what());
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_json(cfg, ss.str());
}

}  // namespace printqc::app
