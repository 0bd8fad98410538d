#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "printqc/app/config.hpp"

namespace printqc::app {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitQualityFail = 2;

/// "printqc: error: <msg>", red unless PRINTQC_NO_COLOR is set or color is off.
void print_diagnostic(std::ostream& err, std::string_view msg, bool color);
/// True when stderr is a terminal and PRINTQC_NO_COLOR is unset.
bool stderr_wants_color();

struct CommandIo {
  std::ostream& out;
  std::ostream& err;
  bool color = false;
};

/// Writes report.json, annotated.png and density.csv into cfg.out_dir.
int cmd_inspect(const std::filesystem::path& image, const RunConfig& cfg, const CommandIo& io);

/// Writes <stem>.png, <stem>.truth.json and <stem>.hocr into out_dir.
int cmd_synth(const std::filesystem::path& spec, const std::filesystem::path& out_dir,
              const CommandIo& io);

struct TrainOptions {
  std::filesystem::path store;
  int port = 7878;  // 0 picks a free port
  std::optional<std::filesystem::path> ui_dir;
  std::function<void(int)> on_listening;  // receives the bound port
};

/// input is a PNG or a label spec (.json) that is rendered first.
int cmd_train(const std::filesystem::path& input, const RunConfig& cfg, const TrainOptions& opts,
              const CommandIo& io);

}  // namespace printqc::app
