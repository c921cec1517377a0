#include <doctest.h>

#include "cbsets/cbrank.hpp"

using namespace cbsets;

namespace {

Ordinal O(const char* s) { return parse_cnf(s); }
FinSet S(const char* s) { return FinSet::parse(s); }

bool schreier(const FinSet& a) { return a.empty() || a.size() <= a.min(); }

// Derived sets by brute force: "infinitely many b" read as "every b in a
// window far past A", with a different window than the handle's probe.
bool derived_brute(const std::function<bool(const FinSet&)>& member, const FinSet& a, unsigned k) {
  if (k == 0) return member(a);
  const std::uint64_t from = (a.empty() ? 0 : a.max()) + 100;
  for (std::uint64_t b = from; b < from + 3; ++b)
    if (!derived_brute(member, a.with(b), k - 1)) return false;
  return true;
}

}  // namespace

TEST_CASE("derived sets of the Schreier family") {
  const FamilyHandle h = schreier_handle();
  CHECK(in_derived(h, S("3"), 2));
  CHECK_FALSE(in_derived(h, S("3"), 3));
  CHECK(in_derived(h, S(""), 0));
  CHECK(in_derived(explicit_handle({S("")}, 5), S(""), 0));
  CHECK_FALSE(in_derived(explicit_handle({S("")}, 5), S(""), 1));
}

TEST_CASE("ranks") {
  const FamilyHandle h = schreier_handle();
  auto r = rank_finite(h, S("3"));
  CHECK_FALSE(r.at_least_cap);
  CHECK(r.rank == 2);
  r = rank_finite(h, S("2,5"));
  CHECK(r.rank == 0);
  CHECK(rank_finite(h, S(""), 8).at_least_cap);
  CHECK_THROWS_AS(rank_finite(h, S("2,3,4")), std::invalid_argument);

  // Closed form min A - |A| over admissible A in [2..12].
  for (std::uint64_t mask = 1; mask < (1u << 11); ++mask) {
    const FinSet a = FinSet::from_mask(mask << 1);
    if (!schreier(a)) continue;
    const auto rr = rank_finite(h, a, 16);
    CHECK_FALSE(rr.at_least_cap);
    CHECK(rr.rank == a.min() - a.size());
  }
}

TEST_CASE("rank bound at level 1 and brute-force derived sets at level 2") {
  const FamilyHandle one = af_handle(GrowthFn::identity(), O("1"));
  for (std::uint64_t mask = 1; mask < (1u << 12); ++mask) {
    const FinSet a = FinSet::from_mask(mask);
    if (!one.member(a)) continue;
    CHECK(rank_finite(one, a, 16).rank <= a.min() - 1);
  }
  const FamilyHandle two = af_handle(GrowthFn::identity(), O("2"));
  for (std::uint64_t mask = 0; mask < (1u << 8); ++mask) {
    const FinSet a = FinSet::from_mask(mask);
    for (unsigned k = 0; k <= 3; ++k) CHECK(in_derived(two, a, k) == derived_brute(two.member, a, k));
  }
}

TEST_CASE("derived families are monotone and hereditary") {
  const FamilyHandle h = af_handle(GrowthFn::identity(), O("2"));
  for (std::uint64_t mask = 0; mask < (1u << 9); ++mask) {
    const FinSet a = FinSet::from_mask(mask);
    for (unsigned k = 0; k < 3; ++k) {
      if (!in_derived(h, a, k + 1)) continue;
      CHECK(in_derived(h, a, k));
      for (auto x : a.elems()) CHECK(in_derived(h, a.without(x), k + 1));
    }
  }
}

TEST_CASE("split points") {
  const FamilyHandle h = schreier_handle();
  auto s = split_point(h, S("2,4"), 1);
  CHECK(s.a == 4);
  CHECK(s.prefix == S("2"));
  CHECK_THROWS_AS(split_point(h, S("5"), 2), std::invalid_argument);
  s = split_point(h, S("1,2"), 1);
  CHECK(s.a == 1);
  CHECK(s.prefix.empty());

  // Definition check on every admissible A in [1..10].
  for (std::uint64_t mask = 1; mask < (1u << 10); ++mask) {
    const FinSet a = FinSet::from_mask(mask);
    if (!schreier(a)) continue;
    for (unsigned g = 1; g <= 3; ++g) {
      if (in_derived(h, a, g)) continue;
      const auto sp = split_point(h, a, g);
      CHECK(a.contains(sp.a));
      CHECK(sp.prefix == a.below(sp.a));
      CHECK(in_derived(h, sp.prefix, g));
      CHECK_FALSE(in_derived(h, a.upto(sp.a), g));
    }
  }
}

TEST_CASE("handles") {
  CHECK_THROWS_AS(explicit_handle({S(""), S("1,2")}, 4), std::invalid_argument);  // {1} missing
  const FamilyHandle k = explicit_handle({S(""), S("1"), S("2"), S("1,2")}, 4);
  CHECK(k.member(S("1,2")));
  CHECK_FALSE(k.member(S("3")));
  const FamilyHandle l = link(schreier_handle(), S("3"));
  CHECK(l.member(S("7,9")));
  CHECK_FALSE(l.member(S("7,8,9")));
  const FamilyHandle t = truncate(schreier_handle(), 10);
  CHECK(t.member(S("3,10")));
  CHECK_FALSE(t.member(S("3,11")));
}

TEST_CASE("extraction") {
  SUBCASE("base case") {
    const std::uint64_t n = 12;
    std::vector<FinSet> k{S("")};
    for (std::uint64_t x = 1; x <= n; ++x) k.push_back(FinSet{x});
    for (std::uint64_t x = 2; x <= n; ++x) k.push_back(FinSet{1, x});
    std::vector<std::uint64_t> all;
    for (std::uint64_t x = 1; x <= n; ++x) all.push_back(x);
    const auto r = extract(k, n, O("0"), FinSet::from_sorted(all));
    CHECK(r.verified);
    for (const auto& a : k) CHECK(a.intersect(r.b).size() <= 1);
  }
  SUBCASE("trivial family") {
    const auto r = extract({S("")}, 10, O("2"), S("2,4,6"));
    CHECK(r.b == S("2,4,6"));
    CHECK(to_string(r.f) == "id");
    CHECK(r.verified);
  }
  SUBCASE("Schreier sets") {
    std::vector<std::uint64_t> evens;
    for (std::uint64_t x = 2; x <= 30; x += 2) evens.push_back(x);
    const auto h = truncate(af_handle(GrowthFn::identity(), O("1")), 30);
    const auto r = extract(h, O("1"), FinSet::from_sorted(evens));
    CHECK(r.verified);
    CHECK_FALSE(r.transcript.empty());
    // Replay with a separate oracle: A n B for admissible A in [1..30].
    AdmissibleFamily check(r.f);
    const auto& e = r.b.elems();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << e.size()); ++mask) {
      std::vector<std::uint64_t> d;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (mask >> i & 1) d.push_back(e[i]);
      const FinSet a = FinSet::from_sorted(d);
      if (schreier(a)) CHECK(check.contains(a, O("1")));
    }
  }
  SUBCASE("unsupported level") {
    CHECK_THROWS_AS(extract({S("")}, 10, O("w"), S("2")), std::invalid_argument);
  }
}

TEST_CASE("inconsistent oracles are reported") {
  FamilyHandle h = schreier_handle();
  h.description = "liar";
  h.ext_infinite = [](const FinSet&) { return true; };  // wrong for {1}
  CHECK_THROWS_AS(in_derived(h, S("1"), 1), OracleInconsistency);
  CHECK(in_derived(h, S("5"), 1));
}
