#include <doctest.h>

#include <cmath>
#include <random>

#include "cbsets/blocks.hpp"
#include "cbsets/family.hpp"
#include "cbsets/norming.hpp"

using namespace cbsets;

namespace {

Ordinal O(const char* s) { return parse_cnf(s); }
FinSet S(const char* s) { return FinSet::parse(s); }

// Phi over the materialized support, summed directly.
double direct_phi(const Block& x, const OrliczFn& m, const FinSet* restrict_to = nullptr) {
  double s = 0;
  for (std::size_t i = 0; i < x.coords.size(); ++i)
    if (!restrict_to || restrict_to->contains(x.coords[i])) s += m(std::exp(x.log_values[i]));
  return s;
}

}  // namespace

TEST_CASE("growth conditions") {
  const auto p4 = check_growth(GrowthFn::pow(4));
  CHECK(p4.fi);
  CHECK(p4.fm);
  const auto p2 = check_growth(GrowthFn::pow(2));
  CHECK(p2.fi);
  CHECK(p2.fm);
  const auto id = check_growth(GrowthFn::identity());
  CHECK_FALSE(id.fi);
  REQUIRE(id.fi_first_failure);
  // sum_{i>=2} 1/i^2 = pi^2/6 - 1 > 2/4.
  CHECK(*id.fi_first_failure == 2);
  CHECK(id.fm);
}

TEST_CASE("scales and ground sets") {
  CHECK(Scale::parse("dec10").base == 10.0);
  CHECK(Scale{}.log_t(3) == doctest::Approx(-3 * std::log(10.0)));
  const GroundSet e = GroundSet::parse("even");
  CHECK(e.at(0) == 2);
  CHECK(e.index_at_or_after(7) == 3);
  CHECK(GroundSet::parse("ap:5:3").at(2) == 11);
  CHECK_THROWS(GroundSet::parse("ap:0:1"));
}

TEST_CASE("leaves") {
  const BlockQuadruple q;
  const Block leaf = build_leaf(q, 0.02, 2, 2);
  CHECK(leaf.tree.count == 150);
  REQUIRE(leaf.coords.size() == 150);
  CHECK(leaf.coords.front() == 2);
  CHECK(leaf.coords.back() == 300);
  for (double lv : leaf.log_values) CHECK(lv == doctest::Approx(std::log(0.01)));
  CHECK(direct_phi(leaf, q.m) == doctest::Approx(0.015));
  CHECK_THROWS_AS(build_leaf(q, 0.0, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_leaf(q, 0.02, 0, 2), std::invalid_argument);
}

TEST_CASE("blocks") {
  const BlockQuadruple q;
  // f(2)^2 = 256 leaves fit in the window; from 3 on the support runs past it.
  for (std::uint64_t start : {1u, 2u}) {
    const Block x = build_block(q, O("1"), 1.0, start);
    REQUIRE(x.complete);
    CHECK(x.min_supp() >= start);
    CHECK(x.min_supp() % 2 == 0);
    CHECK(std::is_sorted(x.coords.begin(), x.coords.end()));
    CHECK(std::adjacent_find(x.coords.begin(), x.coords.end()) == x.coords.end());
    for (auto c : x.coords) CHECK(c % 2 == 0);
    const double mass = direct_phi(x, q.m);
    CHECK(mass >= 0.5);
    CHECK(mass <= 1.0);
    // p = f(min supp)^2 children.
    const std::uint64_t fm = q.f(x.min_supp());
    CHECK(x.tree.children.size() == fm * fm);
  }
  const Block far = build_block(q, O("1"), 1.0, 3);
  CHECK_FALSE(far.complete);
  CHECK(far.min_supp() == 4);
  CHECK(far.tree.p == 65536);  // only the children inside the window are built
  CHECK(far.tree.children.size() < 65536);
  CHECK(far.coords.back() <= far.window);
  CHECK_THROWS_AS(build_block(BlockQuadruple{GrowthFn::identity()}, O("1"), 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_block(q, O("1"), -1.0, 2), std::invalid_argument);
}

TEST_CASE("Phi bound on admissible sets") {
  const BlockQuadruple q;
  const Block near = build_block(q, O("1"), 1.0, 2), far = build_block(q, O("2"), 1.0, 3);
  AdmissibleFamily fam(q.f);
  std::mt19937_64 rng(9);
  for (int s = 0; s < 120; ++s) {
    const Block& x = s % 3 ? near : far;
    const double fx = double(q.f(x.min_supp()));
    const std::uint64_t m0 = std::uniform_int_distribution<std::uint64_t>(1, x.min_supp() - 1)(rng);
    std::vector<std::uint64_t> e{m0};
    const std::size_t stride = 1 + rng() % 5;
    for (std::size_t i = rng() % 30; i < x.coords.size() && e.size() < 200; i += stride) {
      e.push_back(x.coords[i]);
      if (!fam.contains(FinSet::from_sorted(e), x.beta)) e.pop_back();
    }
    const FinSet a = FinSet::from_sorted(e);
    const auto pb = phi_bound_check(x, a, q);
    const double lhs = direct_phi(x, q.m, &a);
    const double rhs = 2.0 * double(q.f(a.min())) / (fx * fx);
    CHECK(pb.lhs == doctest::Approx(lhs).epsilon(1e-9));
    CHECK(pb.rhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(pb.ok == (lhs <= rhs * (1 + 1e-12)));
    CHECK(pb.ok);
  }
  const Block& x = far;
  CHECK_THROWS_AS(phi_bound_check(x, FinSet{}, q), std::invalid_argument);
  CHECK_THROWS_AS(phi_bound_check(x, FinSet{x.min_supp()}, q), std::invalid_argument);
  // At level 1 with f = 4^k, {1} plus 4 more elements is too many (f(1) = 4).
  std::vector<std::uint64_t> big{1};
  for (std::size_t i = 0; i < 4; ++i) big.push_back(near.coords[i]);
  CHECK_THROWS_AS(phi_bound_check(near, FinSet::from_sorted(big), q), std::invalid_argument);
  big.pop_back();
  CHECK(phi_bound_check(near, FinSet::from_sorted(big), q).ok);
  big.push_back(x.window + 2);
  CHECK_THROWS_AS(phi_bound_check(x, FinSet::from_sorted(big), q), std::invalid_argument);
}

TEST_CASE("witness") {
  const BlockQuadruple q;
  const auto w = main_witness(OrliczFn::power(2), 0.5, O("1"), q, 60, 3);
  CHECK(w.precondition);
  CHECK(w.theta == doctest::Approx(0.0625));
  CHECK(w.j == 33);
  CHECK(w.violations == 0);
  CHECK(w.max_restricted_phi <= 1.0);
  CHECK(w.sum_lower > 1.0);
  CHECK(w.witness);

  const auto ls = main_witness(OrliczFn::log_square(), 0.5, O("1"), q, 5, 3);
  CHECK_FALSE(ls.precondition);
  CHECK_FALSE(ls.witness);
  CHECK_FALSE(ls.reason.empty());
  CHECK_THROWS_AS(main_witness(OrliczFn::power(2), 0.0, O("1"), q, 5, 3), std::invalid_argument);
}

TEST_CASE("norming sets") {
  const auto net = build_norming(SymNormSpec::weak(2.0), 6, 10, 4);
  CHECK(net.exact);
  CHECK(net.sup(parse_vec("1,1,1,1")) == doctest::Approx(2.0).epsilon(1e-12));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> val(-1, 1);
  for (int s = 0; s < 100; ++s) {
    Vec a = Vec::Zero(10);
    for (Eigen::Index k = 0; k < 10; ++k)
      if (rng() % 2) a(k) = val(rng);
    const double sup = net.sup(a);
    CHECK(sup == doctest::Approx(brute_force_sup(net, a)).epsilon(1e-12));
    const double nrm = norm(a, net.spec);
    CHECK(sup <= nrm + 1e-12);
    CHECK(sup >= nrm / 2 - 1e-12);
  }
  const auto grid = build_norming(SymNormSpec::parse("marc:2:lp:2"), 4, 8, 4);
  CHECK_FALSE(grid.exact);
  CHECK(check_sandwich(grid, 100, 5).violations == 0);
  CHECK_THROWS(build_norming(SymNormSpec::lp(2.0), 4, 8));
}

TEST_CASE("capped dual sup") {
  const SymNormSpec l2 = SymNormSpec::lp(2.0);
  // Dual of l2 is l2: sup <a,b> over 0 <= b <= t, |b|_2 <= 1.
  auto d = capped_dual_sup(parse_vec("1"), 0.5, 1, l2);
  CHECK(d.certified);
  CHECK(d.value == doctest::Approx(0.5));
  d = capped_dual_sup(parse_vec("1,1,1,1"), 1.0, 4, l2);
  CHECK(d.certified);
  CHECK(d.value == doctest::Approx(2.0).epsilon(1e-6));
  d = capped_dual_sup(parse_vec("1,1,1,1"), 0.3, 4, l2);
  CHECK(d.value == doctest::Approx(1.2).epsilon(1e-6));
  d = capped_dual_sup(parse_vec("4,3"), 1.0, 1, l2);  // second entry ignored
  CHECK(d.value == doctest::Approx(4.0).epsilon(1e-6));
  d = capped_dual_sup(parse_vec("2,1,0.5"), 0.8, 3, l2);
  CHECK(d.grid_checked);
  CHECK(d.grid_max <= d.upper + 1e-9);
  CHECK(d.value <= d.upper + 1e-9);
}

TEST_CASE("converse and embedding norms") {
  const SymNormSpec l2 = SymNormSpec::lp(2.0);
  const GrowthFn f = GrowthFn::pow(4);
  for (unsigned n = 1; n <= 4; ++n) CHECK(converse_rho(l2, f, n, parse_vec("1")).rho == doctest::Approx(1.0).epsilon(1e-9));
  const auto w = converse_weights(l2, 0.5, 5);
  REQUIRE(w.size() == 5);
  for (std::size_t i = 0; i < w.size(); ++i) {
    CHECK(w[i] <= 1.0);
    if (i) CHECK(w[i] <= w[i - 1]);
  }
  const Vec v = parse_vec("1,0.5,0.25,0.125");
  const auto eq = converse_equivalence(l2, f, v, 0.5);
  CHECK(eq.lower_ok);
  CHECK(eq.upper_ok);
  CHECK(window_inequality(l2, f, v, 0.5).ok);

  const OrliczFn ls = OrliczFn::log_square();
  const auto p = embed_params(ls, 0.5, 4);
  REQUIRE(p.l.size() == 4);
  for (std::size_t i = 0; i + 1 < p.delta.size(); ++i) CHECK(p.delta[i + 1] < p.delta[i]);
  const auto e = check_embed_norming(ls, 0.5, parse_vec("0.3,0.01,0.2"), 4);
  CHECK(e.left_ok);
  CHECK(e.right_ok);
  CHECK(e.sup <= e.norm + 1e-12);
}
