#include "printqc/app/commands.hpp"

#include <httplib.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "printqc/app/pipeline.hpp"
#include "printqc/app/session.hpp"
#include "printqc/fixtures.hpp"
#include "printqc/image_io.hpp"

namespace printqc::app {
namespace fs = std::filesystem;
namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(Errc::Io, "cannot write '" + path.string() + "'");
}

RgbImage load_input(const fs::path& input) {
  if (input.extension() == ".json") return render_label(label_spec_from_json(read_text(input))).image;
  return read_png(input);
}

}  // namespace

void print_diagnostic(std::ostream& err, std::string_view msg, bool color) {
  if (color) err << "\x1b[1;31mprintqc: error:\x1b[0m " << msg << '\n';
  else err << "printqc: error: " << msg << '\n';
}

bool stderr_wants_color() {
  return std::getenv("PRINTQC_NO_COLOR") == nullptr && ::isatty(STDERR_FILENO) == 1;
}

int cmd_inspect(const fs::path& image, const RunConfig& cfg, const CommandIo& io) {
  InspectionRun run;
  try {
    std::optional<TrainingSet> store;
    if (cfg.store) store = load_store(*cfg.store);
    std::optional<HocrDocument> hocr;
    if (cfg.hocr) hocr = parse_hocr(read_text(*cfg.hocr));
    const RgbImage img = read_png(image);
    fs::create_directories(cfg.out_dir);

    run = inspect_image(img, image.filename().string(), cfg, store ? &*store : nullptr,
                        hocr ? &*hocr : nullptr);
    write_text(cfg.out_dir / "report.json", write_report(run.report));
    if (!run.ok()) {
      print_diagnostic(io.err, *run.report.error, io.color);
      return kExitError;
    }
    write_png(cfg.out_dir / "annotated.png", *run.annotated);
    write_text(cfg.out_dir / "density.csv",
               run.density ? density_csv(*run.density) : std::string("x,f\n"));
  } catch (const std::exception& e) {
    print_diagnostic(io.err, e.what(), io.color);
    return kExitError;
  }

  const InspectionReport& r = run.report;
  io.out << "boxes " << r.boxes.size() << ", alignment "
         << (r.alignment->passed() ? "pass" : "fail") << ", qs_i " << r.shade->qs_i;
  if (r.misprint) io.out << ", qs_gpb " << r.misprint->qs_gpb;
  io.out << '\n';
  return run.passed() ? kExitPass : kExitQualityFail;
}

int cmd_synth(const fs::path& spec_path, const fs::path& out_dir, const CommandIo& io) {
  try {
    const LabelSpec spec = label_spec_from_json(read_text(spec_path));
    const RenderedLabel label = render_label(spec);
    fs::create_directories(out_dir);
    const std::string stem = spec_path.stem().string();
    write_png(out_dir / (stem + ".png"), label.image);
    write_text(out_dir / (stem + ".truth.json"), truth_to_json(label.truth));
    write_text(out_dir / (stem + ".hocr"), emit_hocr(label.truth));
    io.out << "wrote " << label.truth.size() << " glyphs to " << out_dir.string() << '\n';
  } catch (const std::exception& e) {
    print_diagnostic(io.err, e.what(), io.color);
    return kExitError;
  }
  return kExitPass;
}

int cmd_train(const fs::path& input, const RunConfig& cfg, const TrainOptions& opts,
              const CommandIo& io) {
  std::optional<LabelingSession> session;
  try {
    const GlyphExtraction ex = extract_glyphs(load_input(input), cfg);
    std::vector<SessionItem> items;
    for (std::size_t i = 0; i < ex.boxes.size(); ++i)
      items.push_back({ex.boxes[i].id, crop(ex.loc.region.crop, ex.boxes[i].box), ex.glyphs[i]});
    TrainingSet existing = store_exists(opts.store) ? load_store(opts.store) : TrainingSet{};
    session.emplace(std::move(items), std::move(existing), opts.store);
  } catch (const std::exception& e) {
    print_diagnostic(io.err, e.what(), io.color);
    return kExitError;
  }

  const std::size_t before = session->store_size();
  httplib::Server server;
  mount_session_api(server, *session, opts.ui_dir);
  // The library default adds SO_REUSEPORT, which would let a second
  // session share a port already in use.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  const int port = opts.port == 0 ? server.bind_to_any_port("127.0.0.1")
                                  : (server.bind_to_port("127.0.0.1", opts.port) ? opts.port : -1);
  if (port <= 0) {
    print_diagnostic(io.err, "cannot bind 127.0.0.1:" + std::to_string(opts.port), io.color);
    return kExitError;
  }

  io.out << "labeling " << session->progress().total << " boxes at http://127.0.0.1:" << port
         << "/\n"
         << std::flush;
  std::thread worker([&server] { server.listen_after_bind(); });
  server.wait_until_ready();
  if (opts.on_listening) opts.on_listening(port);
  session->wait_until_done();
  session->wait_for_completion_seen(std::chrono::seconds(2));
  server.stop();
  worker.join();

  const auto p = session->progress();
  io.out << "labeled " << p.labeled << ", skipped " << p.skipped << ", store " << before << " -> "
         << session->store_size() << '\n';
  return kExitPass;
}

}  // namespace printqc::app
