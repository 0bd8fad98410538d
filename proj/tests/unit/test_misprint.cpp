#include <doctest.h>

#include <random>

#include "../support/labels.hpp"
#include "../support/oracles.hpp"
#include "printqc/misprint.hpp"

using namespace printqc;

namespace {

GlyphMatrix random_glyph(std::mt19937& rng, double p = 0.4) {
  std::bernoulli_distribution d(p);
  GlyphMatrix g;
  for (auto& v : g.reshaped()) v = d(rng) ? 255 : 0;
  return g;
}

GlyphMatrix flip(GlyphMatrix g, int count, std::mt19937& rng) {
  std::vector<int> idx(600);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  for (int i = 0; i < count; ++i) {
    auto& v = g.reshaped()[idx[i]];
    v = static_cast<std::uint8_t>(255 - v);
  }
  return g;
}

}  // namespace

TEST_CASE("add_sample") {
  std::mt19937 rng(1);
  const TrainingSet one = add_sample({}, random_glyph(rng), 'A');
  CHECK(one.size() == 1);
  CHECK(one.labels()[0] == 'A');

  TrainingSet ts;
  for (char c : kLabelAlphabet) ts = add_sample(ts, random_glyph(rng), c);
  ts = add_sample(ts, random_glyph(rng), 'A');
  CHECK(ts.size() == 38);
  CHECK(ts.glyphs().size() == 38);

  try {
    add_sample(ts, random_glyph(rng), '@');
    FAIL("expected InvalidLabel");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidLabel);
  }
  CHECK_THROWS_AS(add_sample(ts, random_glyph(rng), 'a'), Error);
}

TEST_CASE("store encoding round trip") {
  std::mt19937 rng(2);
  TrainingSet ts;
  for (int i = 0; i < 5; ++i) ts.add(random_glyph(rng), kLabelAlphabet[i * 7]);
  const std::string mrd = encode_mrd(ts);
  const std::string hrd = encode_hrd(ts);
  CHECK(mrd.size() == 8 + 5 * 600);
  CHECK(mrd.substr(0, 4) == "MRD1");
  CHECK(static_cast<unsigned char>(mrd[4]) == 5);
  CHECK(mrd[5] == 0);
  CHECK(hrd == "A\nH\nO\nV\n2\n");
  // The first record is the first glyph, row-major.
  CHECK(static_cast<unsigned char>(mrd[8 + 21]) == ts.glyphs()[0](1, 1));

  const TrainingSet back = decode_store(mrd, hrd);
  CHECK(back.labels() == ts.labels());
  for (std::size_t i = 0; i < ts.size(); ++i) CHECK((back.glyphs()[i] == ts.glyphs()[i]).all());

  auto corrupt = [](std::string_view m, std::string_view h) {
    try {
      decode_store(m, h);
    } catch (const Error& e) {
      return e.code() == Errc::CorruptStore;
    }
    return false;
  };
  CHECK(corrupt("MRD2" + mrd.substr(4), hrd));
  CHECK(corrupt(mrd.substr(0, mrd.size() - 1), hrd));
  CHECK(corrupt(mrd, "A\nH\nO\nV\n"));
  CHECK(corrupt(mrd, "A\nH\nO\nV\n@\n"));
  std::string gray = mrd;
  gray[100] = 7;
  CHECK(corrupt(gray, hrd));
  CHECK(corrupt("", ""));
}

TEST_CASE("store on disk") {
  testlabels::TempDir tmp;
  std::mt19937 rng(3);
  TrainingSet ts;
  ts.add(random_glyph(rng), 'Q');
  ts.add(random_glyph(rng), '-');
  const auto dir = tmp / "store";
  CHECK_FALSE(store_exists(dir));
  save_store(ts, dir);
  CHECK(store_exists(dir));
  const TrainingSet back = load_store(dir);
  CHECK(back.labels() == std::vector<char>{'Q', '-'});
  CHECK(testlabels::read_file(store_paths(dir).hrd) == "Q\n-\n");

  std::filesystem::remove(store_paths(dir).hrd);
  CHECK_THROWS_AS(load_store(dir), Error);
}

TEST_CASE("nearest_distance") {
  std::mt19937 rng(4);
  TrainingSet ts;
  for (int i = 0; i < 10; ++i) ts.add(random_glyph(rng), kLabelAlphabet[i]);

  const Neighbor self = nearest_distance(ts, ts.glyphs()[3]);
  CHECK(self.label == 'D');
  CHECK(self.distance == 0.0);
  CHECK(self.index == 3);

  const GlyphMatrix q = flip(ts.glyphs()[6], 13, rng);
  const Neighbor near = nearest_distance(ts, q);
  CHECK(near.label == 'G');
  CHECK(near.distance == 3315.0);

  const GlyphMatrix comp = (255 - ts.glyphs()[0].cast<int>()).cast<std::uint8_t>();
  CHECK(glyph_distance(comp, ts.glyphs()[0]) == 600 * 255);

  KnnOptions norm;
  norm.normalize_by_area = true;
  CHECK(nearest_distance(ts, q, norm).distance == doctest::Approx(3315.0 / 600));

  CHECK_THROWS_AS(nearest_distance(TrainingSet{}, q), Error);
  KnnOptions big;
  big.k = 11;
  CHECK_THROWS_AS(nearest_distance(ts, q, big), Error);
}

TEST_CASE("k-NN majority and ties") {
  const GlyphMatrix zero = GlyphMatrix::Zero();
  GlyphMatrix a1 = zero, a2 = zero, b1 = zero;
  a1(0, 0) = 255;
  a1(0, 1) = 255;
  a2(0, 2) = 255;
  a2(0, 3) = 255;
  b1(1, 0) = 255;
  TrainingSet ts;
  ts.add(a1, 'A');
  ts.add(b1, 'B');
  ts.add(a2, 'A');
  KnnOptions k3;
  k3.k = 3;
  const Neighbor n3 = nearest_distance(ts, zero, k3);
  CHECK(n3.label == 'A');
  CHECK(n3.distance == 255.0);
  CHECK(n3.index == 1);

  // One vote each: the label with the closer sample wins.
  KnnOptions k2;
  k2.k = 2;
  CHECK(nearest_distance(ts, zero, k2).label == 'B');

  // Equal distances: the lower training index wins.
  TrainingSet tie;
  tie.add(a1, 'X');
  tie.add(a2, 'Y');
  CHECK(nearest_distance(tie, zero).label == 'X');
  CHECK(nearest_distance(tie, zero, k2).label == 'X');
}

TEST_CASE("L1 metric properties") {
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    const GlyphMatrix a = random_glyph(rng), b = random_glyph(rng), c = random_glyph(rng);
    CHECK(glyph_distance(a, a) == 0);
    CHECK(glyph_distance(a, b) == glyph_distance(b, a));
    CHECK(glyph_distance(a, c) <= glyph_distance(a, b) + glyph_distance(b, c));
    CHECK(glyph_distance(a, b) == 255 * (a != b).count());
  }
}

TEST_CASE("detect_misprints") {
  Eigen::ArrayXd d = Eigen::ArrayXd::Constant(23, 1000.0);
  d[4] = 50000;
  d[15] = 51000;
  for (double m : {1.0, 2.0, 3.0}) {
    const MisprintResult r = detect_misprints(d, m);
    CHECK(r.misprinted == 2);
    CHECK(r.good == 21);
    CHECK(r.labels[4] == PrintLabel::Misprint);
    CHECK(r.labels[15] == PrintLabel::Misprint);
    CHECK(round2(r.qs_gpb) == doctest::Approx(91.30));
  }

  const MisprintResult flat = detect_misprints(Eigen::ArrayXd::Constant(7, 765.0), 2.0);
  CHECK(flat.good == 7);
  CHECK(flat.qs_gpb == 100.0);
  CHECK_THROWS_AS(detect_misprints(Eigen::ArrayXd(), 2.0), Error);
  CHECK_THROWS_AS(detect_misprints(d, -1.0), Error);

  SUBCASE("half widths") {
    MisprintResult r;
    r.variance = 3727.68 * 3727.68;
    for (double m : {1.0, 2.0, 3.0}) {
      r.m = m;
      CHECK(r.half_width() == doctest::Approx(3727.68 * m).epsilon(1e-12));
    }
  }

  SUBCASE("upper tail only keeps low distances") {
    Eigen::ArrayXd low = Eigen::ArrayXd::Constant(10, 5000.0);
    low[0] = 0;
    CHECK(detect_misprints(low, 2.0).labels[0] == PrintLabel::Misprint);
    CHECK(detect_misprints(low, 2.0, true).labels[0] == PrintLabel::GoodPrint);
  }
}

TEST_CASE("detect_misprints agrees with a brute-force oracle") {
  std::mt19937 rng(6);
  std::uniform_int_distribution<int> len(1, 6), val(0, 20);
  for (int trial = 0; trial < 2000; ++trial) {
    Eigen::ArrayXd d(len(rng));
    for (auto& x : d) x = 255.0 * val(rng);
    const double m = 0.5 * (1 + trial % 6);
    const MisprintResult r = detect_misprints(d, m);
    const auto sides = oracle::interval_sides({d.begin(), d.end()}, m);
    for (Eigen::Index i = 0; i < d.size(); ++i)
      CHECK((r.labels[i] == PrintLabel::GoodPrint) == (sides[i] == 0));
    CHECK(r.good + r.misprinted == d.size());
  }
}

TEST_CASE("detect_misprints is scale invariant and monotone in m") {
  std::mt19937 rng(7);
  std::exponential_distribution<double> e(1.0 / 3000);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::ArrayXd d(23);
    for (auto& x : d) x = std::round(e(rng));
    CHECK(detect_misprints(d, 1.5).labels == detect_misprints(4.0 * d, 1.5).labels);
    long prev = 0;
    for (double m = 0.25; m <= 4.0; m += 0.25) {
      const long good = detect_misprints(d, m).good;
      CHECK(good >= prev);
      prev = good;
    }
  }
}
