#include <CLI11.hpp>

#include <iostream>

#include "printqc/app/commands.hpp"

using namespace printqc::app;

int main(int argc, char** argv) {
  CLI::App app{"printqc - print quality inspection"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string image, config_path, polarity, hocr, store, out = ".";
  double n = 0, m = 0;
  int k = 0;
  bool timings = false;

  auto* inspect = app.add_subcommand("inspect", "Inspect one label image");
  inspect->add_option("image", image, "PNG image")->required();
  auto* n_opt = inspect->add_option("--n", n, "shade quality index");
  auto* m_opt = inspect->add_option("--m", m, "misprint quality index");
  auto* k_opt = inspect->add_option("--k", k, "neighbors for the misprint vote");
  auto* hocr_opt = inspect->add_option("--hocr", hocr, "hOCR file with character boxes");
  auto* store_opt = inspect->add_option("--store", store, "training store directory");
  auto* out_opt = inspect->add_option("--out", out, "output directory");
  inspect->add_option("--config", config_path, "JSON config; flags override it");
  auto* pol_opt = inspect->add_option("--polarity", polarity, "ink-dark or ink-light")
                      ->check(CLI::IsMember({"ink-dark", "ink-light"}));
  inspect->add_flag("--timings", timings, "record stage timings in the report");

  std::string train_input, train_store, ui_dir;
  int port = 7878;
  auto* train = app.add_subcommand("train", "Serve a labeling session for a training store");
  train->add_option("input", train_input, "PNG image or label spec (.json)")->required();
  train->add_option("--store", train_store, "training store directory")->required();
  train->add_option("--port", port, "listening port on 127.0.0.1")->check(CLI::Range(0, 65535));
  train->add_option("--ui", ui_dir, "directory with the labeler page");

  std::string spec, synth_out;
  auto* synth = app.add_subcommand("synth", "Render a synthetic label fixture");
  synth->add_option("spec", spec, "label spec JSON")->required();
  synth->add_option("--out", synth_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  const CommandIo io{std::cout, std::cerr, stderr_wants_color()};

  if (*synth) return cmd_synth(spec, synth_out, io);

  if (*train) {
    TrainOptions opts;
    opts.store = train_store;
    opts.port = port;
    if (!ui_dir.empty()) opts.ui_dir = ui_dir;
    return cmd_train(train_input, cfg, opts, io);
  }

  try {
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (*n_opt) cfg.n = n;
    if (*m_opt) cfg.m = m;
    if (*k_opt) cfg.k = k;
    if (*hocr_opt) cfg.hocr = hocr;
    if (*store_opt) cfg.store = store;
    if (*out_opt) cfg.out_dir = out;
    if (*pol_opt) cfg.set_polarity(parse_polarity(polarity));
    if (timings) cfg.timings = true;
  } catch (const std::exception& e) {
    print_diagnostic(std::cerr, e.what(), io.color);
    return kExitError;
  }
  return cmd_inspect(image, cfg, io);
}
