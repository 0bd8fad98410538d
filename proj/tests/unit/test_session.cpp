#include <doctest.h>

#include <json.hpp>

#include <thread>

#include "../support/labels.hpp"
#include "printqc/app/session.hpp"

// After the Eigen-based headers: httplib's system includes upset Eigen.
#include <httplib.h>

using namespace printqc;
using namespace printqc::app;
using json = nlohmann::json;

namespace {

std::vector<SessionItem> items_for(const LabelSpec& spec) {
  const GlyphExtraction ex = extract_glyphs(render_label(spec).image, RunConfig{});
  std::vector<SessionItem> items;
  for (std::size_t i = 0; i < ex.boxes.size(); ++i)
    items.push_back({ex.boxes[i].id, crop(ex.loc.region.crop, ex.boxes[i].box), ex.glyphs[i]});
  return items;
}

// Session server on a free port for the lifetime of the object.
class Served {
 public:
  explicit Served(LabelingSession& session) {
    mount_session_api(server_, session);
    port_ = server_.bind_to_any_port("127.0.0.1");
    worker_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~Served() {
    server_.stop();
    worker_.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread worker_;
};

httplib::Result post(httplib::Client& cli, const std::string& path, const json& body) {
  return cli.Post(path, body.dump(), "application/json");
}

}  // namespace

TEST_CASE("session state machine") {
  testlabels::TempDir tmp;
  LabelingSession s(items_for(testlabels::lot_label()), {}, tmp / "store");
  CHECK(s.progress().total == 23);
  CHECK(s.progress().remaining == 23);

  const auto first = s.next();
  REQUIRE(first.has_value());
  CHECK(first->id == 1);
  CHECK(first->total == 23);
  CHECK_FALSE(first->png_base64.empty());

  CHECK(s.label(1, 'H') == LabelingSession::Outcome::Accepted);
  CHECK(s.label(1, 'H') == LabelingSession::Outcome::AlreadyLabeled);
  CHECK(s.label(2, '@') == LabelingSession::Outcome::InvalidLabel);
  CHECK(s.label(2, 'q') == LabelingSession::Outcome::InvalidLabel);
  CHECK(s.label(99, 'A') == LabelingSession::Outcome::UnknownBox);
  CHECK(s.skip(2) == LabelingSession::Outcome::Accepted);
  CHECK(s.skip(2) == LabelingSession::Outcome::AlreadyLabeled);
  CHECK(s.label(2, 'Q') == LabelingSession::Outcome::AlreadyLabeled);
  CHECK(s.next()->id == 3);
  CHECK(s.progress().labeled == 1);
  CHECK(s.progress().skipped == 1);
  CHECK(s.progress().remaining == 21);
  CHECK(s.store_size() == 1);
  CHECK(load_store(tmp / "store").size() == 1);
}

TEST_CASE("HTTP session: 21 labels and 2 skips") {
  testlabels::TempDir tmp;
  const std::string text = testlabels::kLotLines[0] + testlabels::kLotLines[1];
  LabelingSession session(items_for(testlabels::lot_label()), {}, tmp / "store");
  Served served(session);
  auto cli = served.client();

  std::string sent;
  int seen = 0;
  while (auto res = cli.Get("/session/next")) {
    if (res->status == 204) break;
    REQUIRE(res->status == 200);
    const json next = json::parse(res->body);
    CHECK(next["total"] == 23);
    CHECK(next["remaining"] == 23 - seen);
    const int id = next["id"];
    CHECK(id == seen + 1);
    // The crop decodes as a PNG.
    const std::string b64 = next["png_base64"];
    CHECK(b64.rfind("iVBORw0KGgo", 0) == 0);
    if (id == 5 || id == 17) {
      auto r = post(cli, "/session/skip", {{"id", id}});
      REQUIRE(r);
      CHECK(r->status == 200);
    } else {
      const std::string ch(1, text[static_cast<std::size_t>(id - 1)]);
      auto r = post(cli, "/session/label", {{"id", id}, {"char", ch}});
      REQUIRE(r);
      CHECK(r->status == 200);
      CHECK(json::parse(r->body)["accepted"] == true);
      sent += ch;
    }
    ++seen;
    REQUIRE(seen <= 23);
  }
  CHECK(seen == 23);
  CHECK(session.done());

  const TrainingSet store = load_store(tmp / "store");
  CHECK(store.size() == 21);
  std::string hrd;
  for (char c : sent) hrd += std::string(1, c) + "\n";
  CHECK(testlabels::read_file(store_paths(tmp / "store").hrd) == hrd);

  auto progress = cli.Get("/session/progress");
  REQUIRE(progress);
  const json p = json::parse(progress->body);
  CHECK(p["labeled"] == 21);
  CHECK(p["skipped"] == 2);
  CHECK(p["remaining"] == 0);
  CHECK(p["total"] == 23);
}

TEST_CASE("HTTP session error statuses") {
  testlabels::TempDir tmp;
  LabelingSession session(items_for(testlabels::lot_label()), {}, tmp / "store");
  Served served(session);
  auto cli = served.client();

  CHECK(post(cli, "/session/label", {{"id", 1}, {"char", "H"}})->status == 200);
  auto again = post(cli, "/session/label", {{"id", 1}, {"char", "H"}});
  CHECK(again->status == 409);
  CHECK(json::parse(again->body)["error"] == "AlreadyLabeled");
  auto invalid = post(cli, "/session/label", {{"id", 2}, {"char", "@"}});
  CHECK(invalid->status == 400);
  CHECK(json::parse(invalid->body)["error"] == "InvalidLabel");
  CHECK(post(cli, "/session/label", {{"id", 2}, {"char", "AB"}})->status == 400);
  CHECK(post(cli, "/session/label", {{"id", 2}})->status == 400);
  CHECK(post(cli, "/session/label", {{"char", "A"}})->status == 400);
  CHECK(cli.Post("/session/label", "nonsense", "application/json")->status == 400);
  CHECK(post(cli, "/session/label", {{"id", 400}, {"char", "A"}})->status == 404);
  CHECK(post(cli, "/session/skip", {{"id", 400}})->status == 404);
  CHECK(post(cli, "/session/skip", {{"id", 1}})->status == 409);
  CHECK(session.store_size() == 1);
}

TEST_CASE("HTTP session labels all 37 alphabet glyphs") {
  testlabels::TempDir tmp;
  LabelingSession session(items_for(testlabels::alphabet_label()), {}, tmp / "store");
  Served served(session);
  auto cli = served.client();
  for (int id = 1; id <= 37; ++id) {
    const std::string ch(1, testlabels::kAlphabet[static_cast<std::size_t>(id - 1)]);
    CHECK(post(cli, "/session/label", {{"id", id}, {"char", ch}})->status == 200);
  }
  CHECK(cli.Get("/session/next")->status == 204);
  const TrainingSet store = load_store(tmp / "store");
  CHECK(store.size() == 37);
  CHECK(std::string(store.labels().begin(), store.labels().end()) == testlabels::kAlphabet);
  // Each stored glyph is its own nearest neighbour.
  for (std::size_t i = 0; i < store.size(); ++i) {
    const Neighbor n = nearest_distance(store, store.glyphs()[i]);
    CHECK(n.label == store.labels()[i]);
    CHECK(n.distance == 0.0);
  }
}

TEST_CASE("session appends to an existing store") {
  testlabels::TempDir tmp;
  const TrainingSet seed = testlabels::alphabet_store();
  LabelingSession session(items_for(testlabels::lot_label()), seed, tmp / "store");
  CHECK(session.store_size() == 37);
  CHECK(session.label(3, '1') == LabelingSession::Outcome::Accepted);
  CHECK(load_store(tmp / "store").size() == 38);
}
