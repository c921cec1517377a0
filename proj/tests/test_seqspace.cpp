#include <doctest.h>

#include <cmath>
#include <random>

#include "cbsets/seqspace.hpp"

using namespace cbsets;

namespace {

Vec V(const char* s) { return parse_vec(s); }

Vec ones(Eigen::Index n) { return Vec::Ones(n); }

}  // namespace

TEST_CASE("vectors and rearrangement") {
  CHECK(V("3@1,4@2") == (Vec(2) << 3, 4).finished());
  CHECK(V("5@3").size() == 3);
  CHECK(V("").size() == 0);
  CHECK_THROWS(V("1@0"));
  CHECK_THROWS(V("1@2,3@2"));
  CHECK(format_vec(V("0,2,0,1")) == "2@2,1@4");

  CHECK(rearrange(V("0.5,2,1,0,2")) == (Vec(5) << 2, 2, 1, 0.5, 0).finished());
  CHECK(rearrange(Vec(0)).size() == 0);
  CHECK(rearrange(V("-3,1")) == (Vec(2) << 3, 1).finished());
}

TEST_CASE("Orlicz functions") {
  for (const auto& m : {OrliczFn::power(1), OrliczFn::power(2), OrliczFn::power(3.5), OrliczFn::log_square()}) {
    CHECK(m(0) == 0);
    CHECK(m(1) == doctest::Approx(1).epsilon(1e-14));
    CHECK(m.check_shape());
  }
  const OrliczFn c = OrliczFn::parse("custom:0.5:0.2,1:1");
  CHECK(c(0.25) == doctest::Approx(0.1));
  CHECK(c.check_shape());
  CHECK_THROWS(OrliczFn::parse("custom:0.5:0.8,1:1"));  // not convex
  CHECK_THROWS(OrliczFn::parse("pow:0.5"));
  const OrliczFn ls = OrliczFn::log_square();
  CHECK(ls.log_eval(1e-100) == doctest::Approx(std::log(log_square_scale()) - std::pow(100 * std::log(10.0), 2)));
  CHECK(ls.inverse(ls(0.01)) == doctest::Approx(0.01));
}

TEST_CASE("Phi") {
  const OrliczFn sq = OrliczFn::power(2);
  CHECK(phi(0.1 * ones(7), sq) == doctest::Approx(0.07));
  CHECK(phi(Vec::Zero(4), OrliczFn::log_square()) == 0);
  const Vec x = V("1,-2,0.5");
  CHECK(phi(0.25 * x, sq) == doctest::Approx(0.0625 * phi(x, sq)));
}

TEST_CASE("Luxemburg norm") {
  CHECK(luxemburg_norm(V("3,4"), OrliczFn::power(2)) == doctest::Approx(5).epsilon(1e-12));
  CHECK(luxemburg_norm(V("1,1,1"), OrliczFn::power(1)) == doctest::Approx(3).epsilon(1e-12));
  CHECK(luxemburg_norm(Vec::Zero(3), OrliczFn::power(2)) == 0);

  // LogSquare on (1/2, 1/2): 2 M(1/(2 rho)) = 1. M(1/2 rho) = 1/2 lands on the
  // linear piece c (2t - 1/e), so t = (1/(2c) + 1/e) / 2.
  const OrliczFn ls = OrliczFn::log_square();
  const double c = 1.0 / (2.0 - std::exp(-1.0));
  const double t = (0.5 / c + std::exp(-1.0)) / 2.0;
  const double exact = 0.5 / t;
  const double got = luxemburg_norm(V("0.5,0.5"), ls);
  CHECK(std::abs(got - exact) <= 1e-9);
  // 10^6-step grid over [||v||_inf, ||v||_1]: least grid rho with Phi(v/rho) <= 1.
  const Vec v = V("0.5,0.5");
  const double lo = 0.5, hi = 1.0, h = (hi - lo) / 1e6;
  double grid = hi;
  for (int i = 0; i <= 1000000; ++i)
    if (phi(v / (lo + i * h), ls) <= 1.0) {
      grid = lo + i * h;
      break;
    }
  CHECK(std::abs(got - grid) <= h);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(-2, 2);
  for (int i = 0; i < 200; ++i) {
    Vec x(5);
    for (auto& e : x) e = val(rng);
    for (const auto& m : {OrliczFn::power(1.5), ls}) {
      const double n = luxemburg_norm(x, m);
      CHECK(phi(x / n, m) <= 1.0 + 1e-12);
      CHECK(phi(x / (n * (1 - 1e-6)), m) > 1.0);
    }
    CHECK(std::abs(luxemburg_norm(x, OrliczFn::power(3)) - lp_norm(x, 3)) <= 1e-9);
  }
}

TEST_CASE("Marcinkiewicz norms") {
  const SymNormSpec weak = SymNormSpec::weak(2.0);
  CHECK(norm(ones(4), weak) == doctest::Approx(2).epsilon(1e-14));
  CHECK(norm(V("1"), weak) == doctest::Approx(weak.weights.at(1)));
  CHECK(norm(V("0,0,3,1"), weak) == norm(V("-1,3"), weak));
  for (std::uint64_t n : {1u, 7u, 100u, 10000u}) CHECK(std::abs(fundamental(weak, n) - std::sqrt(double(n))) <= 1e-12);

  // Exact mode: weights n^{-1/2} are irrational, so use t_n = 1/n (rho = l1
  // gives sup_n (a*_1 + ... + a*_n)/n = a*_1).
  SeqVec<Rational> x(4);
  x << Rational(1, 3), Rational(-5, 2), Rational(2), Rational(0);
  std::vector<Rational> t{Rational(1), Rational(1, 2), Rational(1, 3), Rational(1, 4)};
  CHECK(marcinkiewicz_norm_exact(x, t, Rho::Kind::L1) == Rational(5, 2));
  std::vector<Rational> flat(4, Rational(1));
  CHECK(marcinkiewicz_norm_exact(x, flat, Rho::Kind::L1) == Rational(29, 6));
  CHECK(marcinkiewicz_norm_exact(x, flat, Rho::Kind::Linf) == Rational(5, 2));
}

TEST_CASE("symmetry and lattice") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> val(-3, 3);
  const std::vector<SymNormSpec> specs{SymNormSpec::lp(1.5), SymNormSpec::linf(),
                                       SymNormSpec::orlicz(OrliczFn::log_square()), SymNormSpec::weak(2.0),
                                       SymNormSpec::parse("marc:3:lp:2")};
  for (int i = 0; i < 100; ++i) {
    Vec x(6);
    for (auto& e : x) e = val(rng);
    Vec y = x.reverse();
    y(0) = -y(0);
    Vec z = x;
    z(2) *= 0.5;
    for (const auto& s : specs) {
      CHECK(std::abs(norm(x, s) - norm(y, s)) <= 1e-12 * std::max(1.0, norm(x, s)));
      CHECK(norm(z, s) <= norm(x, s) + 1e-12);
    }
  }
  CHECK(norm(V("1"), SymNormSpec::orlicz(OrliczFn::log_square())) == doctest::Approx(1));
}

TEST_CASE("dual norms") {
  const OrliczFn sq = OrliczFn::power(2);
  CHECK(orlicz_dual_norm(V("3,4"), sq) == doctest::Approx(5).epsilon(1e-8));
  CHECK(orlicz_dual_norm(ones(9), sq) == doctest::Approx(3).epsilon(1e-8));
  CHECK(orlicz_dual_norm(Vec::Zero(2), sq) == 0);
  const Vec y = V("1,-0.5,2,0.25");
  CHECK(std::abs(orlicz_dual_norm(y, OrliczFn::power(3)) - lp_norm(y, 1.5)) <= 1e-8);
  CHECK(std::abs(orlicz_dual_norm(y, OrliczFn::power(1.5)) - lp_norm(y, 3)) <= 1e-8);
  // n = ||sum e'_k|| ||sum e_k|| for symmetric spaces.
  const SymNormSpec ls = SymNormSpec::orlicz(OrliczFn::log_square());
  for (std::uint64_t n : {1u, 3u, 10u, 40u}) CHECK(std::abs(dual_fundamental(ls, n) * fundamental(ls, n) - double(n)) <= 1e-8 * n);
}

TEST_CASE("delta of eps") {
  const SymNormSpec sq = SymNormSpec::orlicz(OrliczFn::power(2));
  auto d = delta_of_eps(sq, 1.0, 0.5);
  CHECK(d.k0 == 5);
  CHECK(d.delta == 0.05);
  d = delta_of_eps(sq, 1.0, 1.0);
  CHECK(d.k0 == 2);
  CHECK(d.delta == 0.125);
  CHECK_THROWS_AS(delta_of_eps(SymNormSpec::orlicz(OrliczFn::power(1)), 1.0, 0.5, 4096), std::domain_error);
}

TEST_CASE("level sequences") {
  const OrliczFn ls = OrliczFn::log_square();
  const auto d = delta_sequence(ls, 0.5, 8);
  REQUIRE(d.size() == 8);
  for (unsigned n = 1; n <= 8; ++n) {
    CHECK(d[n - 1] == doctest::Approx(std::exp(-double(n) / 2)).epsilon(1e-15));
    CHECK(verify_delta(ls, 0.5, n, d[n - 1]));
    if (n > 1) CHECK(d[n - 1] < d[n - 2]);
  }
  // M(t/2)/M(t) = 1/4 for t^2, which is not < 1/4 at n = 2.
  try {
    delta_sequence(OrliczFn::power(2), 0.5, 4);
    FAIL("expected failure");
  } catch (const DeltaSearchFailed& e) {
    CHECK(e.index == 2);
  }
  CHECK(delta_sequence(OrliczFn::power(2), 0.5, 1).size() == 1);
  CHECK(delta_sequence(ls, 0.5, 0).empty());
}

TEST_CASE("condition one") {
  auto c = condition_one_estimator(OrliczFn::power(2), 0.5);
  CHECK_FALSE(c.limit_zero);
  CHECK(c.bound == doctest::Approx(0.25));
  c = condition_one_estimator(OrliczFn::log_square(), 0.5);
  CHECK(c.limit_zero);
  CHECK(c.monotone);
  c = condition_one_estimator(OrliczFn::power(1), 0.9);
  CHECK_FALSE(c.limit_zero);
  CHECK(c.bound == doctest::Approx(0.9));
}

TEST_CASE("discretization") {
  auto check = [](const std::vector<double>& a, double eps) {
    const StepMap h = discretize(a, eps);
    CHECK(h(0.0) == 0.0);
    for (double x : a) CHECK(std::abs(h(x) - x) <= eps);
    for (double b : h.boundaries) CHECK(std::find(a.begin(), a.end(), b) == a.end());
    return h;
  };
  auto h = check({0, 0.3, 1.1}, 0.5);
  CHECK(h.distinct_values({0, 0.3, 1.1}) <= 3);
  h = check({0}, 0.7);
  CHECK(h.distinct_values({0}) == 1);
  check({0, -0.2, 0.2}, 1.0);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> val(-5, 5), e(0.01, 1);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> a{0};
    for (int k = 0; k < 12; ++k) a.push_back(val(rng));
    check(a, e(rng));
  }
}
