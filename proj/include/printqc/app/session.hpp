#pragma once

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "printqc/glyphseg.hpp"
#include "printqc/misprint.hpp"

namespace httplib {
class Server;
}

namespace printqc::app {

struct SessionItem {
  int id = 0;
  GrayImage crop;  // what the labeler sees
  GlyphMatrix glyph;
};

/// One supervised labeling pass over a set of glyphs. Every accepted label
/// is appended to the store and persisted before the call returns.
class LabelingSession {
 public:
  LabelingSession(std::vector<SessionItem> items, TrainingSet store,
                  std::filesystem::path store_dir);

  struct Next {
    int id = 0;
    int total = 0;
    int remaining = 0;
    std::string png_base64;
  };
  struct Progress {
    int labeled = 0;
    int skipped = 0;
    int remaining = 0;
    int total = 0;
  };
  enum class Outcome { Accepted, InvalidLabel, UnknownBox, AlreadyLabeled };

  std::optional<Next> next() const;
  Outcome label(int id, char c);
  Outcome skip(int id);
  Progress progress() const;
  bool done() const;
  std::size_t store_size() const;
  /// Chars accepted so far, in submission order.
  std::string accepted() const;

  void wait_until_done();
  /// After completion, waits until a client has seen the final 204 from
  /// next() or the grace period runs out.
  void wait_for_completion_seen(std::chrono::milliseconds grace);

 private:
  enum class State { Pending, Labeled, Skipped };
  Outcome check(int id, std::size_t& index) const;
  bool done_locked() const;

  std::vector<SessionItem> items_;
  std::vector<State> state_;
  TrainingSet store_;
  std::filesystem::path store_dir_;
  std::string accepted_;
  int labeled_ = 0;
  int skipped_ = 0;
  mutable bool completion_seen_ = false;
  mutable std::mutex mu_;
  mutable std::condition_variable done_cv_;
};

/// Registers the /session/* routes, plus a static mount when ui_dir is set.
void mount_session_api(httplib::Server& server, LabelingSession& session,
                       const std::optional<std::filesystem::path>& ui_dir = std::nullopt);

}  // namespace printqc::app
