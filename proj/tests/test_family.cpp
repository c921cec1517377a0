#include <doctest.h>

#include <map>
#include <thread>

#include "cbsets/family.hpp"

using namespace cbsets;

namespace {

Ordinal O(const char* s) { return parse_cnf(s); }
FinSet S(const char* s) { return FinSet::parse(s); }

// Straight from the definition: every way of cutting A into consecutive
// pieces, no greedy step, no size shortcuts.
struct Exhaustive {
  GrowthFn f;
  std::map<std::pair<std::vector<std::uint64_t>, std::string>, bool> memo{};

  bool member(const std::vector<std::uint64_t>& a, const Ordinal& beta) {
    if (a.size() <= 1) return true;
    if (beta.is_zero()) return false;
    auto key = std::make_pair(a, to_string(beta));
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::uint64_t k = f(a.front());
    bool out = beta.is_limit() ? member(a, fund_seq(beta, k)) : cuts(a, 0, beta.predecessor(), k);
    memo.emplace(key, out);
    return out;
  }
  // Can a[from..] be cut into at most `left` pieces, each a member at gamma?
  bool cuts(const std::vector<std::uint64_t>& a, std::size_t from, const Ordinal& gamma, std::uint64_t left) {
    if (from == a.size()) return true;
    if (left == 0) return false;
    for (std::size_t to = a.size(); to > from; --to) {
      std::vector<std::uint64_t> piece(a.begin() + std::ptrdiff_t(from), a.begin() + std::ptrdiff_t(to));
      if (member(piece, gamma) && cuts(a, to, gamma, left - 1)) return true;
    }
    return false;
  }
  std::uint64_t min_pieces(const std::vector<std::uint64_t>& a, const Ordinal& gamma) {
    std::uint64_t k = 1;
    while (!cuts(a, 0, gamma, k)) ++k;
    return k;
  }
};

}  // namespace

TEST_CASE("finite sets and growth functions") {
  CHECK(S("").empty());
  CHECK(S("3,5,9").elems() == std::vector<std::uint64_t>{3, 5, 9});
  CHECK_THROWS(S("5,3"));
  CHECK_THROWS(S("1,,2"));
  CHECK(precedes(S("1,2"), S("3")));
  CHECK_FALSE(precedes(S("1,3"), S("3")));
  CHECK(GrowthFn::parse("id")(7) == 7);
  CHECK(GrowthFn::parse("2k")(7) == 14);
  CHECK(GrowthFn::parse("pow4")(3) == 64);
  CHECK(GrowthFn::parse("4^k")(2) == 16);
  CHECK(GrowthFn::parse("pow4")(40) == GrowthFn::kSaturation);
}

TEST_CASE("membership examples") {
  AdmissibleFamily id(GrowthFn::identity());
  CHECK(id.contains(S("3,5,9"), O("1")));
  CHECK_FALSE(id.contains(S("2,4,6,8"), O("1")));
  CHECK(id.contains(S(""), O("w^w")));
  CHECK(id.contains(S("2,3,4,5,6,7"), O("2")));
  CHECK(id.contains(S("2,3"), O("w")));
  CHECK_FALSE(id.contains(S("1,2"), O("w^w")));  // f(1) = 1 admits one block only
}

TEST_CASE("certificates replay") {
  AdmissibleFamily id(GrowthFn::identity());
  auto r = id.is_member(S("2,3,4,5,6,7"), O("2"));
  REQUIRE(r.certificate);
  CHECK(r.certificate->kind == MembershipCert::Kind::Blocks);
  REQUIRE(r.certificate->blocks.size() == 2);
  CHECK(r.certificate->blocks[0] == S("2,3"));
  CHECK(r.certificate->blocks[1] == S("4,5,6,7"));
  CHECK(verify_certificate(*r.certificate, GrowthFn::identity()));

  r = id.is_member(S("2,3"), O("w"));
  REQUIRE(r.certificate);
  CHECK(r.certificate->kind == MembershipCert::Kind::Limit);
  CHECK(r.certificate->resolved == O("3"));
  CHECK(verify_certificate(*r.certificate, GrowthFn::identity()));

  CHECK_FALSE(id.is_member(S("2,4,6,8"), O("1")).certificate);

  // Tampering is caught.
  auto bad = *id.is_member(S("2,3,4,5,6,7"), O("2")).certificate;
  bad.blocks[1] = S("4,5,6");
  CHECK_FALSE(verify_certificate(bad, GrowthFn::identity()));
  auto lim = *id.is_member(S("2,3"), O("w")).certificate;
  lim.resolved = O("4");
  CHECK_FALSE(verify_certificate(lim, GrowthFn::identity()));

  // Every member of [1..9] at a few levels, for two growth functions.
  for (const auto& f : {GrowthFn::identity(), GrowthFn::pow(4)}) {
    AdmissibleFamily fam(f);
    for (const char* b : {"1", "3", "w", "w*2+1", "w^2", "w^w"})
      for (const auto& a : fam.enumerate(O(b), 9)) {
        const auto c = fam.is_member(a, O(b)).certificate;
        REQUIRE(c);
        CHECK(verify_certificate(*c, f));
      }
  }
}

TEST_CASE("membership agrees with the exhaustive definition") {
  for (const auto& f : {GrowthFn::identity(), GrowthFn::affine(2, 0), GrowthFn::pow(4)}) {
    AdmissibleFamily fam(f);
    Exhaustive ex{f};
    // The bare recursion walks f(min A) levels at each limit; keep 4^k finite.
    const bool fast = f(5) > 1000;
    for (const char* b : {"0", "1", "2", "3", "w", "w+1", "w*2", "w^2"}) {
      if (fast && !O(b).is_finite()) continue;
      for (std::uint64_t mask = 0; mask < (1u << 10); ++mask) {
        const FinSet a = FinSet::from_mask(mask);
        CHECK_MESSAGE(fam.contains(a, O(b)) == ex.member(a.elems(), O(b)), to_string(f), " ", b, " ", to_string(a));
      }
    }
  }
}

TEST_CASE("min_blocks") {
  AdmissibleFamily id(GrowthFn::identity());
  CHECK(id.min_blocks(S("2,3,4,5,6,7"), O("1")) == 2);
  CHECK(id.min_blocks(S("9"), O("0")) == 1);
  CHECK(id.min_blocks(S("1,2,3"), O("0")) == 3);
  CHECK(id.min_blocks(S(""), O("3")) == 0);

  Exhaustive ex{GrowthFn::identity()};
  for (std::uint64_t mask = 1; mask < (1u << 11); ++mask) {
    const FinSet a = FinSet::from_mask(mask);
    for (const char* g : {"1", "2", "w"}) CHECK(id.min_blocks(a, O(g)) == ex.min_pieces(a.elems(), O(g)));
  }
}

TEST_CASE("bounded membership") {
  AdmissibleFamily id(GrowthFn::identity());
  CHECK(id.is_member_bounded(S("1,5,7"), O("0"), 1));
  CHECK_FALSE(id.is_member_bounded(S("1,2,3,4"), O("0"), 1));
  CHECK(id.is_member_bounded(S(""), O("2"), 0));
  CHECK(id.is_member_bounded(S("1,2,3,4,5,6,7,8,9"), O("0"), 2));
  CHECK_FALSE(id.is_member_bounded(S("1,2,3,4,5,6,7,8,9,10"), O("0"), 2));
}

TEST_CASE("enumeration") {
  AdmissibleFamily id(GrowthFn::identity());
  const auto zero = id.enumerate(O("0"), 3);
  REQUIRE(zero.size() == 4);
  CHECK(zero[0].empty());
  CHECK(zero[3] == S("3"));

  // Level 1 over [1..n]: exactly the A with |A| <= min A.
  const auto one = id.enumerate(O("1"), 8);
  std::size_t expected = 0;
  for (std::uint64_t mask = 0; mask < (1u << 8); ++mask) {
    const FinSet a = FinSet::from_mask(mask);
    if (a.empty() || a.size() <= a.min()) ++expected;
  }
  CHECK(one.size() == expected);
  CHECK(std::is_sorted(one.begin(), one.end()));

  Exhaustive ex{GrowthFn::identity()};
  std::size_t count = 0;
  for (std::uint64_t mask = 0; mask < (1u << 4); ++mask)
    if (ex.member(FinSet::from_mask(mask).elems(), O("2"))) ++count;
  CHECK(id.enumerate(O("2"), 4).size() == count);
  CHECK_THROWS(id.enumerate(O("1"), 21));
}

TEST_CASE("size bound") {
  CHECK(membership_capacity(O("3"), 2) == 8);
  CHECK(membership_capacity(O("w"), 2) == 8);      // = cap(3)
  CHECK(membership_capacity(O("w+1"), 3) == 243);  // 3 * 3^4
  CHECK(membership_capacity(O("w^w"), 1) == 1);
  CHECK(membership_capacity(O("w^w"), 5) == GrowthFn::kSaturation);
  // Runs m, m+1, ... of the guaranteed length are members.
  Exhaustive ex{GrowthFn::identity()};
  for (const char* b : {"1", "2", "w", "w+1"})
    for (std::uint64_t m = 2; m <= 3; ++m) {
      const std::uint64_t cap = std::min<std::uint64_t>(membership_capacity(O(b), m), 11);
      std::vector<std::uint64_t> run;
      for (std::uint64_t x = m; run.size() < cap; ++x) run.push_back(x);
      CHECK(ex.member(run, O(b)));
    }
}

TEST_CASE("hereditary and f-monotone on [1..10]") {
  AdmissibleFamily g(GrowthFn::identity()), f(GrowthFn::affine(2, 0));
  for (const char* b : {"2", "w", "w*2", "w^2"})
    for (std::uint64_t mask = 0; mask < (1u << 10); ++mask) {
      const FinSet a = FinSet::from_mask(mask);
      if (!g.contains(a, O(b))) continue;
      CHECK(f.contains(a, O(b)));
      for (auto x : a.elems()) CHECK(g.contains(a.without(x), O(b)));
    }
}

TEST_CASE("concurrent queries agree") {
  AdmissibleFamily fam(GrowthFn::identity());
  std::vector<std::vector<bool>> seen(4);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (std::uint64_t mask = 0; mask < (1u << 10); ++mask) seen[t].push_back(fam.contains(FinSet::from_mask(mask), O("w+1")));
    });
  for (auto& th : pool) th.join();
  for (int t = 1; t < 4; ++t) CHECK(seen[t] == seen[0]);
}
