#include "printqc/app/session.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>

#include "printqc/image_io.hpp"

namespace printqc::app {

LabelingSession::LabelingSession(std::vector<SessionItem> items, TrainingSet store,
                                 std::filesystem::path store_dir)
    : items_(std::move(items)),
      state_(items_.size(), State::Pending),
      store_(std::move(store)),
      store_dir_(std::move(store_dir)) {}

bool LabelingSession::done_locked() const {
  return labeled_ + skipped_ == static_cast<int>(items_.size());
}

std::optional<LabelingSession::Next> LabelingSession::next() const {
  std::lock_guard lock(mu_);
  const auto it = std::find(state_.begin(), state_.end(), State::Pending);
  if (it == state_.end()) {
    completion_seen_ = true;
    done_cv_.notify_all();
    return std::nullopt;
  }
  const SessionItem& item = items_[static_cast<std::size_t>(it - state_.begin())];
  const int total = static_cast<int>(items_.size());
  return Next{item.id, total, total - labeled_ - skipped_,
              httplib::detail::base64_encode(encode_png(item.crop))};
}

LabelingSession::Outcome LabelingSession::check(int id, std::size_t& index) const {
  const auto it = std::find_if(items_.begin(), items_.end(),
                               [id](const SessionItem& s) { return s.id == id; });
  if (it == items_.end()) return Outcome::UnknownBox;
  index = static_cast<std::size_t>(it - items_.begin());
  if (state_[index] != State::Pending) return Outcome::AlreadyLabeled;
  return Outcome::Accepted;
}

LabelingSession::Outcome LabelingSession::label(int id, char c) {
  std::lock_guard lock(mu_);
  std::size_t index = 0;
  if (const Outcome o = check(id, index); o != Outcome::Accepted) return o;
  if (!is_valid_label(c)) return Outcome::InvalidLabel;
  TrainingSet grown = add_sample(store_, items_[index].glyph, c);
  save_store(grown, store_dir_);
  store_ = std::move(grown);
  state_[index] = State::Labeled;
  accepted_ += c;
  ++labeled_;
  if (done_locked()) done_cv_.notify_all();
  return Outcome::Accepted;
}

LabelingSession::Outcome LabelingSession::skip(int id) {
  std::lock_guard lock(mu_);
  std::size_t index = 0;
  if (const Outcome o = check(id, index); o != Outcome::Accepted) return o;
  state_[index] = State::Skipped;
  ++skipped_;
  if (done_locked()) done_cv_.notify_all();
  return Outcome::Accepted;
}

LabelingSession::Progress LabelingSession::progress() const {
  std::lock_guard lock(mu_);
  const int total = static_cast<int>(items_.size());
  return {labeled_, skipped_, total - labeled_ - skipped_, total};
}

bool LabelingSession::done() const {
  std::lock_guard lock(mu_);
  return done_locked();
}

std::size_t LabelingSession::store_size() const {
  std::lock_guard lock(mu_);
  return store_.size();
}

std::string LabelingSession::accepted() const {
  std::lock_guard lock(mu_);
  return accepted_;
}

void LabelingSession::wait_until_done() {
  std::unique_lock lock(mu_);
  done_cv_.wait(lock, [this] { return done_locked(); });
}

void LabelingSession::wait_for_completion_seen(std::chrono::milliseconds grace) {
  std::unique_lock lock(mu_);
  done_cv_.wait_for(lock, grace, [this] { return completion_seen_; });
}

namespace {

using nlohmann::json;

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, std::string_view code, std::string msg) {
  reply(res, status, {{"error", code}, {"message", std::move(msg)}});
}

void reply_outcome(httplib::Response& res, LabelingSession::Outcome o, const json& ok_body) {
  switch (o) {
    case LabelingSession::Outcome::Accepted: reply(res, 200, ok_body); return;
    case LabelingSession::Outcome::InvalidLabel:
      reply_error(res, 400, "InvalidLabel", "label must be one of A-Z, 0-9, '-'");
      return;
    case LabelingSession::Outcome::UnknownBox:
      reply_error(res, 404, "UnknownBox", "no box with that id");
      return;
    case LabelingSession::Outcome::AlreadyLabeled:
      reply_error(res, 409, "AlreadyLabeled", "box already labeled or skipped");
      return;
  }
}

// Parses a JSON body holding an integer "id". Replies 400 and returns
// nullopt on anything else.
std::optional<json> read_body(const httplib::Request& req, httplib::Response& res) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    reply_error(res, 400, "BadRequest", "body must be a JSON object");
    return std::nullopt;
  }
  if (!body.contains("id") || !body["id"].is_number_integer()) {
    reply_error(res, 400, "BadRequest", "missing integer field 'id'");
    return std::nullopt;
  }
  return body;
}

}  // namespace

void mount_session_api(httplib::Server& server, LabelingSession& session,
                       const std::optional<std::filesystem::path>& ui_dir) {
  server.Get("/session/next", [&session](const httplib::Request&, httplib::Response& res) {
    const auto next = session.next();
    if (!next) {
      res.status = 204;
      return;
    }
    reply(res, 200,
          {{"id", next->id},
           {"total", next->total},
           {"remaining", next->remaining},
           {"png_base64", next->png_base64}});
  });

  server.Post("/session/label", [&session](const httplib::Request& req, httplib::Response& res) {
    const auto body = read_body(req, res);
    if (!body) return;
    const auto it = body->find("char");
    if (it == body->end() || !it->is_string() || it->get<std::string>().size() != 1) {
      reply_error(res, 400, "InvalidLabel", "'char' must be a one-character string");
      return;
    }
    const char c = it->get<std::string>().front();
    reply_outcome(res, session.label((*body)["id"].get<int>(), c), {{"accepted", true}});
  });

  server.Post("/session/skip", [&session](const httplib::Request& req, httplib::Response& res) {
    const auto body = read_body(req, res);
    if (!body) return;
    reply_outcome(res, session.skip((*body)["id"].get<int>()), {{"skipped", true}});
  });

  server.Get("/session/progress", [&session](const httplib::Request&, httplib::Response& res) {
    const auto p = session.progress();
    reply(res, 200,
          {{"labeled", p.labeled},
           {"skipped", p.skipped},
           {"remaining", p.remaining},
           {"total", p.total}});
  });

  if (ui_dir) server.set_mount_point("/", ui_dir->string());
}

}  // namespace printqc::app
