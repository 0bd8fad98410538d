#include "printqc/misprint.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "printqc/shadestats.hpp"

namespace printqc {
namespace {

constexpr std::string_view kMagic = "MRD1";
constexpr std::size_t kRecordBytes = kGlyphWidth * kGlyphHeight;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "short write to '" + path.string() + "'");
}

}  // namespace

void TrainingSet::add(const GlyphMatrix& glyph, char label) {
  if (!is_valid_label(label))
    throw Error(Errc::InvalidLabel, std::string("label '") + label + "' is outside A-Z, 0-9, '-'");
  glyphs_.push_back(glyph);
  labels_.push_back(label);
}

TrainingSet add_sample(TrainingSet ts, const GlyphMatrix& glyph, char label) {
  ts.add(glyph, label);
  return ts;
}

std::string encode_mrd(const TrainingSet& ts) {
  std::string out(kMagic);
  const auto count = static_cast<std::uint32_t>(ts.size());
  for (int shift = 0; shift < 32; shift += 8) out += static_cast<char>((count >> shift) & 0xff);
  for (const GlyphMatrix& g : ts.glyphs())
    out.append(reinterpret_cast<const char*>(g.data()), kRecordBytes);
  return out;
}

std::string encode_hrd(const TrainingSet& ts) {
  std::string out;
  for (const char c : ts.labels()) {
    out += c;
    out += '\n';
  }
  return out;
}

TrainingSet decode_store(std::string_view mrd, std::string_view hrd) {
  if (mrd.size() < 8 || mrd.substr(0, 4) != kMagic)
    throw Error(Errc::CorruptStore, "MRD file lacks the MRD1 header");
  std::uint32_t count = 0;
  for (int i = 0; i < 4; ++i)
    count |= static_cast<std::uint32_t>(static_cast<unsigned char>(mrd[4 + static_cast<std::size_t>(i)]))
             << (8 * i);
  if (mrd.size() != 8 + static_cast<std::size_t>(count) * kRecordBytes)
    throw Error(Errc::CorruptStore, "MRD header announces " + std::to_string(count) +
                                        " records but the file holds " +
                                        std::to_string((mrd.size() - 8) / kRecordBytes));

  std::vector<char> labels;
  std::size_t pos = 0;
  while (pos < hrd.size()) {
    std::size_t eol = hrd.find('\n', pos);
    if (eol == std::string_view::npos) eol = hrd.size();
    std::string_view line = hrd.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.size() != 1)
      throw Error(Errc::CorruptStore, "HRD line " + std::to_string(labels.size() + 1) +
                                          " must hold exactly one label");
    labels.push_back(line.front());
    pos = eol + 1;
  }
  if (labels.size() != count)
    throw Error(Errc::CorruptStore, "MRD holds " + std::to_string(count) + " records, HRD " +
                                        std::to_string(labels.size()) + " labels");

  TrainingSet ts;
  for (std::size_t i = 0; i < count; ++i) {
    GlyphMatrix g;
    std::copy_n(reinterpret_cast<const std::uint8_t*>(mrd.data()) + 8 + i * kRecordBytes,
                kRecordBytes, g.data());
    if (!((g == 0) || (g == 255)).all())
      throw Error(Errc::CorruptStore, "MRD record " + std::to_string(i + 1) + " is not two-valued");
    try {
      ts.add(g, labels[i]);
    } catch (const Error&) {
      throw Error(Errc::CorruptStore, "HRD line " + std::to_string(i + 1) + " holds an invalid label");
    }
  }
  return ts;
}

StorePaths store_paths(const std::filesystem::path& dir) {
  return {dir / "mrd.bin", dir / "hrd.txt"};
}

bool store_exists(const std::filesystem::path& dir) {
  const StorePaths p = store_paths(dir);
  return std::filesystem::exists(p.mrd) || std::filesystem::exists(p.hrd);
}

TrainingSet load_store(const std::filesystem::path& dir) {
  const StorePaths p = store_paths(dir);
  if (!std::filesystem::exists(p.mrd) || !std::filesystem::exists(p.hrd))
    throw Error(Errc::CorruptStore, "store '" + dir.string() + "' needs both mrd.bin and hrd.txt");
  return decode_store(read_file(p.mrd), read_file(p.hrd));
}

void save_store(const TrainingSet& ts, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const StorePaths p = store_paths(dir);
  write_file(p.mrd, encode_mrd(ts));
  write_file(p.hrd, encode_hrd(ts));
}

Neighbor nearest_distance(const TrainingSet& ts, const GlyphMatrix& glyph, const KnnOptions& opts) {
  if (ts.empty()) throw Error(Errc::EmptyTrainingSet, "no training samples");
  if (opts.k < 1 || static_cast<std::size_t>(opts.k) > ts.size())
    throw Error(Errc::SpecError, "k must lie in [1, training size]");

  std::vector<std::pair<long, std::size_t>> ranked;
  ranked.reserve(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    ranked.emplace_back(glyph_distance(ts.glyphs()[i], glyph), i);
  std::partial_sort(ranked.begin(), ranked.begin() + opts.k, ranked.end());

  // Votes per label; ranked order already encodes (distance, index)
  // precedence, so the first label to reach the top count wins ties.
  std::map<char, int> votes;
  for (int i = 0; i < opts.k; ++i) ++votes[ts.labels()[ranked[static_cast<std::size_t>(i)].second]];
  int top = 0;
  for (const auto& [label, count] : votes) top = std::max(top, count);
  char winner = '?';
  for (int i = 0; i < opts.k; ++i) {
    const char label = ts.labels()[ranked[static_cast<std::size_t>(i)].second];
    if (votes[label] == top) {
      winner = label;
      break;
    }
  }

  const double scale = opts.normalize_by_area ? 1.0 / static_cast<double>(kRecordBytes) : 1.0;
  return {winner, static_cast<double>(ranked.front().first) * scale, ranked.front().second};
}

MisprintResult detect_misprints(const Eigen::ArrayXd& distances, double m, bool upper_tail_only) {
  if (!(m > 0.0)) throw Error(Errc::SpecError, "quality index m must be positive");
  const Moments stats = population_stats(distances);

  MisprintResult r;
  r.distances = distances;
  r.mean = stats.mean;
  r.variance = stats.variance;
  r.m = m;
  r.upper_tail_only = upper_tail_only;
  const double lo = r.mean - r.half_width();
  const double hi = r.mean + r.half_width();
  for (const double d : distances) {
    const bool good = d <= hi && (upper_tail_only || d >= lo);
    r.labels.push_back(good ? PrintLabel::GoodPrint : PrintLabel::Misprint);
    (good ? r.good : r.misprinted) += 1;
  }
  r.qs_gpb = quality_success(r.good, r.misprinted);
  return r;
}

}  // namespace printqc
