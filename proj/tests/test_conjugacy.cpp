#include <doctest.h>

#include <functional>
#include <random>

#include "chameleon/break_calculus.hpp"
#include "chameleon/conjugacy.hpp"
#include "chameleon/error.hpp"
#include "chameleon/random_maps.hpp"
#include "support/oracles.hpp"

using namespace chameleon;
using oracle::R;

namespace {

const std::vector<long> kEx1{2, 2, 3, 1, 4, 2, 1, 1, 2, 2, 3, 1, 2, 2, 2, 2};
const std::vector<long> kEx2{2, 2, 1, 1, 1, 1};
const std::vector<long> kEx3{1, 1, 3, 1, 2, 4, 1, 1, 1, 1, 6, 2, 2, 2, 2, 2};
const std::vector<long> kEx4{1, 3, 4, 2, 1, 3, 1, 1};
const std::vector<long> kEx5{1, 1, 3, 1, 2, 1, 3, 1, 2, 2, 1, 3, 2, 1, 1, 3, 2, 2};

MarkovMap build(const std::vector<long>& L, long n = 2) {
  return MarkovMap::build(AffineMarkovPartition(n, L));
}

Conjugator conj(const std::vector<long>& L, long n = 2) { return Conjugator(build(L, n)); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::ParseError;
}

bool brute_equal_pairs(const std::vector<long>& L) {
  for (std::size_t i = 0; i + 1 < L.size(); i += 2) {
    if (L[i] != L[i + 1]) return false;
  }
  return true;
}

bool contains(const Enclosure& e, const Rational& x) { return e.lo <= x && x <= e.hi; }

}  // namespace

TEST_CASE("h_eval on vertices") {
  auto c1 = conj(kEx1);
  CHECK(c1.h_eval(R("0")) == R("0"));
  CHECK(c1.h_eval(R("5/16")) == R("3/8"));
  CHECK(c1.h_eval(R("1")) == R("0"));
  auto c2 = conj(kEx2);
  CHECK(c2.h_eval(R("0")) == R("0"));
  CHECK(c2.h_eval(R("1/6")) == R("1/4"));
  CHECK(c2.h_eval(R("1/2")) == R("5/8"));
  CHECK(kind_of([&] { c2.h_eval(R("1/5")); }) == ErrorKind::NotAVertex);
  CHECK(kind_of([] { conj({1, 1, 1}, 3).h_eval(R("1/3")); }) ==
        ErrorKind::FixedPointsNotVertices);
  Conjugator shallow(build(kEx1), 2);
  CHECK(kind_of([&] { shallow.h_eval(R("1/1024")); }) == ErrorKind::BudgetExceeded);
}

TEST_CASE("h_inverse_eval") {
  CHECK(conj(kEx2).h_inverse_eval(R("1/4")) == R("1/6"));
  CHECK(conj(kEx1).h_inverse_eval(R("3/8")) == R("5/16"));
  CHECK(conj(kEx1).h_inverse_eval(R("0")) == R("0"));
  CHECK(kind_of([] { conj(kEx1).h_inverse_eval(R("1/3")); }) == ErrorKind::NotAVertex);
}

TEST_CASE("enclosures of h at non-vertices") {
  auto c3 = conj(kEx3);
  auto e3 = c3.h_eval_enclosure(R("1/3"), R("1/64"));
  CHECK(e3.width() <= R("1/64"));
  CHECK(contains(e3, R("5/16")));

  auto c2 = conj(kEx2);
  auto e2 = c2.h_eval_enclosure(R("1/4"), R("1/128"));
  CHECK(e2.width() <= R("1/128"));
  CHECK(contains(e2, R("3/8")));

  auto coarse = c3.h_eval_enclosure(R("1/3"), R("1/8"));
  auto fine = c3.h_eval_enclosure(R("1/3"), R("1/256"));
  CHECK(coarse.lo <= fine.lo);
  CHECK(fine.hi <= coarse.hi);

  Conjugator shallow(build(kEx3), 1);
  try {
    shallow.h_eval_enclosure(R("1/3"), R("1/4096"));
    FAIL("expected BudgetExceeded");
  } catch (const EnclosureBudgetExceeded& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
    CHECK(contains(e.best(), R("5/16")));
  }
}

TEST_CASE("equal_pairs") {
  CHECK_FALSE(equal_pairs(AffineMarkovPartition(2, kEx1)));
  CHECK(equal_pairs(AffineMarkovPartition(2, kEx2)));
  CHECK(equal_pairs(AffineMarkovPartition(2, {1, 1, 1, 1})));
  CHECK(kind_of([] { equal_pairs(AffineMarkovPartition(2, {1, 1, 1})); }) == ErrorKind::OddCount);
  CHECK(kind_of([] { equal_pairs(AffineMarkovPartition(3, {1, 1})); }) == ErrorKind::WrongBase);
}

TEST_CASE("extract_pl_h") {
  auto h = extract_pl_h(conj(kEx2));
  const std::vector<Rational> values{R("0"), R("1/4"), R("1/2"), R("5/8"), R("3/4"), R("7/8")};
  const std::vector<Rational> slopes{R("3/2"), R("3/2"), R("3/4"), R("3/4"), R("3/4"), R("3/4")};
  for (int i = 0; i < 6; ++i) {
    CHECK(h(Rational(i, 6)) == values[static_cast<std::size_t>(i)]);
    CHECK(h.right_slope(Rational(i, 6)) == slopes[static_cast<std::size_t>(i)]);
  }
  CHECK(extract_pl_h(conj({1, 1})) == PLCircleMap::identity(1));
  CHECK(kind_of([] { extract_pl_h(conj(kEx1)); }) == ErrorKind::NotPL);
}

TEST_CASE("check_conjugacy") {
  CHECK(conj(kEx1).check_conjugacy(6).holds);
  CHECK(conj(kEx2).check_conjugacy(8).holds);
  CHECK(conj(kEx4).check_conjugacy(6).holds);
  CHECK(conj(kEx5).check_conjugacy(6).holds);

  auto c = conj(kEx1);
  auto tables = c.level_tables(3);
  tables[2][5] += R("1/1024");
  auto check = check_level_tables(c.markov().g(), tables);
  CHECK_FALSE(check.holds);
  REQUIRE(check.witness);
  CHECK(check.witness->value == tables[2][5]);
  CHECK(check.witness->image != check.witness->expected);
}

TEST_CASE("periodic points") {
  auto nu = PLCircleMap::nu(2);
  CHECK(periodic_points(nu, 1) == std::vector<Rational>{R("0")});
  CHECK(periodic_points(nu, 2) == std::vector<Rational>{R("0"), R("1/3"), R("2/3")});
  CHECK(least_period_points(nu, 2) == std::vector<Rational>{R("1/3"), R("2/3")});

  auto g3 = build(kEx3).g();
  auto per = periodic_points(g3, 2);
  CHECK(std::find(per.begin(), per.end(), R("5/16")) != per.end());
  CHECK(std::find(per.begin(), per.end(), R("5/8")) != per.end());
  CHECK(g3(R("5/16")) == R("5/8"));
  CHECK(g3(R("5/8")) == R("5/16"));

  CHECK(kind_of([] { periodic_points(PLCircleMap::identity(1), 1); }) ==
        ErrorKind::NeutralBranch);
}

TEST_CASE("dyadic image status") {
  auto s2 = conj(kEx2).dyadic_image_status(4);
  CHECK(s2.subset_holds);
  REQUIRE(s2.counterexample);
  CHECK(s2.counterexample->detector == DyadicCounterexample::Detector::Vertex);
  CHECK(s2.counterexample->point == R("1/4"));
  CHECK(s2.counterexample->preimage == R("1/6"));

  auto s3 = conj(kEx3).dyadic_image_status(4);
  REQUIRE(s3.counterexample);
  CHECK(s3.counterexample->detector == DyadicCounterexample::Detector::Periodic);
  CHECK(s3.counterexample->point == R("5/16"));
  CHECK(s3.counterexample->period == 2);

  auto su = conj({1, 1, 1, 1}).dyadic_image_status(4);
  CHECK(su.subset_holds);
  CHECK_FALSE(su.counterexample);
  CHECK(to_string(DyadicCounterexample::Detector::Periodic) == "periodic");
}

TEST_CASE("property: periodic points of nu_2 are a/(2^q - 1)") {
  auto nu = PLCircleMap::nu(2);
  for (int q = 1; q <= 6; ++q) {
    std::vector<Rational> grid;
    const long den = (1L << q) - 1;
    for (long a = 0; a < den; ++a) grid.push_back(Rational(a, den));
    CHECK(periodic_points(nu, q) == grid);
  }
}

TEST_CASE("property: a degree-n Markov map has n^q - 1 points of period dividing q") {
  for (const auto& L : {kEx1, kEx2, kEx3, kEx4, kEx5}) {
    auto g = build(L).g();
    for (int q = 1; q <= 4; ++q) {
      auto pts = periodic_points(g, q);
      CHECK(pts.size() == static_cast<std::size_t>((1L << q) - 1));
      for (const auto& x : pts) CHECK(iterate(g, q)(x) == x);
    }
  }
  auto g3 = build({1, 1, 1, 1, 1, 1}, 3).g();
  CHECK(periodic_points(g3, 2).size() == 8u);
}

TEST_CASE("property: equal_pairs agrees with direct comparison and with PL extraction") {
  for (const auto& L : {kEx1, kEx2, kEx3, kEx4, kEx5}) {
    AffineMarkovPartition P(2, L);
    CHECK(equal_pairs(P) == brute_equal_pairs(L));
  }
  std::mt19937_64 rng(31337);
  for (int t = 0; t < 50; ++t) {
    PLCircleMap h = random_t21(rng, 6, 4);
    AffineMarkovPartition P = partition_from_conjugator(h);
    CHECK(equal_pairs(P) == brute_equal_pairs(P.lengths()));
    CHECK(equal_pairs(P));
    Conjugator c(MarkovMap::build(P));
    auto extracted = extract_pl_h(c);
    CHECK(extracted == h);
    CHECK(compose(extracted, PLCircleMap::nu(2)) == compose(c.markov().g(), extracted));
  }
}

TEST_CASE("property: h is strictly increasing on dyadics") {
  for (const auto& L : {kEx1, kEx2, kEx4}) {
    auto c = conj(L);
    Rational prev(-1);
    for (long i = 0; i < 64; ++i) {
      Rational v = c.h_eval(Rational(i, 64));
      CHECK(v > prev);
      prev = v;
    }
    CHECK(prev < R("1"));
  }
}

TEST_CASE("property: h_inverse_eval inverts h_eval") {
  auto c = conj(kEx5);
  for (long i = 0; i < 32; ++i) {
    Rational q(i, 32);
    CHECK(c.h_inverse_eval(c.h_eval(q)) == q);
  }
}

TEST_CASE("property: enclosure_step_bound suffices") {
  for (const auto& L : {kEx1, kEx2, kEx3, kEx4, kEx5}) {
    auto mm = build(L);
    for (const auto& w : {R("1/16"), R("1/64")}) {
      long steps = enclosure_step_bound(mm, w);
      CHECK(steps >= 0);
      Conjugator c(mm, steps);
      auto tables = c.level_tables(steps);
      const auto& T = tables.back();
      for (std::size_t j = 0; j < T.size(); ++j) {
        Rational next = j + 1 < T.size() ? T[j + 1] : R("1");
        CHECK(next - T[j] <= w);
      }
    }
  }
}
