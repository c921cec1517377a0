#include "cbsets/cbrank.hpp"

#include <algorithm>
#include <memory>
#include <unordered_set>

namespace cbsets {

namespace {

constexpr std::uint64_t kConsistencyWindow = 8;

std::uint64_t middle_of(const std::vector<std::uint64_t>& ground) {
  return ground.empty() ? 0 : ground[(ground.size() - 1) / 2];
}

// Least admissible probe strictly above `floor`; 0 when a truncated ground runs out.
std::uint64_t next_probe(const FamilyHandle& h, std::uint64_t floor) {
  if (!h.truncated()) return floor + 1;
  auto it = std::upper_bound(h.ground.begin(), h.ground.end(), floor);
  return it == h.ground.end() ? 0 : *it;
}

}  // namespace

FamilyHandle af_handle(const GrowthFn& f, const Ordinal& beta, std::uint64_t horizon) {
  auto fam = std::make_shared<AdmissibleFamily>(f);
  FamilyHandle h;
  h.member = [fam, beta](const FinSet& a) { return fam->contains(a, beta); };
  h.ext_infinite = [fam, beta, horizon](const FinSet& a) {
    const std::uint64_t probe = std::max(a.empty() ? 0 : a.max(), horizon) + 1;
    return fam->contains(a.with(probe), beta);
  };
  h.description = "A^" + to_string(f) + "_" + to_string(beta);
  h.horizon = horizon;
  return h;
}

FamilyHandle truncate(const FamilyHandle& h, std::uint64_t n) {
  FamilyHandle t;
  auto inner = h.member;
  t.member = [inner, n](const FinSet& a) { return (a.empty() || a.max() <= n) && inner(a); };
  for (std::uint64_t x = 1; x <= n; ++x) t.ground.push_back(x);
  t.horizon = middle_of(t.ground);
  t.description = h.description + " on [1.." + std::to_string(n) + "]";
  return t;
}

FamilyHandle explicit_handle(const std::vector<FinSet>& members, std::uint64_t n) {
  auto keys = std::make_shared<std::unordered_set<std::string>>();
  for (const auto& a : members) {
    if (!a.empty() && a.max() > n) throw std::invalid_argument("member " + to_string(a) + " leaves [1..n]");
    keys->insert(set_key(a));
  }
  // Closed under removing one element implies closed under subsets.
  for (const auto& a : members)
    for (auto x : a.elems())
      if (!keys->contains(set_key(a.without(x))))
        throw std::invalid_argument("family is not hereditary: " + to_string(a) + " without " + std::to_string(x));
  FamilyHandle h;
  h.member = [keys](const FinSet& a) { return keys->contains(set_key(a)); };
  for (std::uint64_t x = 1; x <= n; ++x) h.ground.push_back(x);
  h.horizon = middle_of(h.ground);
  h.description = "explicit family of " + std::to_string(members.size()) + " sets";
  return h;
}

FamilyHandle link(const FamilyHandle& h, const FinSet& s) {
  const std::uint64_t top = s.empty() ? 0 : s.max();
  FamilyHandle l;
  auto inner = h.member;
  l.member = [inner, s, top](const FinSet& e) { return (e.empty() || e.min() > top) && inner(s.unite(e)); };
  if (h.ext_infinite) {
    auto ext = h.ext_infinite;
    l.ext_infinite = [ext, s, top](const FinSet& e) { return (e.empty() || e.min() > top) && ext(s.unite(e)); };
  }
  if (h.truncated()) {
    std::copy_if(h.ground.begin(), h.ground.end(), std::back_inserter(l.ground), [top](auto x) { return x > top; });
    l.horizon = middle_of(l.ground);
    // An empty remaining ground would read as "unbounded"; keep a sentinel
    // that no set can use instead.
    if (l.ground.empty()) {
      l.member = [](const FinSet& e) { return e.empty(); };
      l.ground.push_back(top + 1);
      l.horizon = top + 1;
    }
  } else {
    l.horizon = h.horizon;
  }
  l.description = h.description + " linked at " + to_string(s);
  return l;
}

bool in_derived(const FamilyHandle& h, const FinSet& a, unsigned k) {
  if (k > kMaxDerivedOrder) throw std::invalid_argument("derivative order exceeds the cap");
  if (!h.member(a)) return false;
  if (k == 0) return true;
  // A in K^(k) iff A u {p_1 < ... < p_k} in K for probes far enough out; the
  // last "infinitely many" step goes through ext_infinite when available.
  FinSet x = a;
  std::uint64_t floor = std::max(a.empty() ? 0 : a.max(), h.horizon);
  for (unsigned i = 1; i < k; ++i) {
    const std::uint64_t p = next_probe(h, floor);
    if (p == 0) return false;
    x = x.with(p);
    floor = p;
  }
  if (h.truncated()) {
    const std::uint64_t p = next_probe(h, floor);
    return p != 0 && h.member(x.with(p));
  }
  const bool ext = h.ext_infinite ? h.ext_infinite(x) : h.member(x.with(floor + 1));
  if (ext) {
    for (std::uint64_t b = floor + 1; b <= floor + kConsistencyWindow; ++b)
      if (!h.member(x.with(b)))
        throw OracleInconsistency(h.description + ": extension of " + to_string(x) + " claimed infinite but " +
                                  std::to_string(b) + " fails");
  }
  return ext;
}

FamilyHandle DerivedHandle::as_handle() const {
  FamilyHandle h = base;
  auto b = base;
  const unsigned k = order;
  h.member = [b, k](const FinSet& a) { return in_derived(b, a, k); };
  h.ext_infinite = nullptr;
  h.description = base.description + "^(" + std::to_string(order) + ")";
  return h;
}

RankResult rank_finite(const FamilyHandle& h, const FinSet& a, unsigned cap) {
  if (cap > kMaxDerivedOrder) throw std::invalid_argument("rank cap exceeds the derivative cap");
  if (!h.member(a)) throw std::invalid_argument(to_string(a) + " is not in the family");
  for (unsigned r = 1; r <= cap; ++r)
    if (!in_derived(h, a, r)) return {false, r - 1};
  return {true, cap};
}

SplitPoint split_point(const FamilyHandle& h, const FinSet& a, unsigned gamma) {
  if (in_derived(h, a, gamma)) throw std::invalid_argument(to_string(a) + " already lies in the derived family");
  if (!in_derived(h, FinSet{}, gamma)) throw std::invalid_argument("the empty set is not in the derived family");
  for (std::size_t k = 1; k <= a.size(); ++k) {
    if (!in_derived(h, a.slice(0, k), gamma)) return {a.elems()[k - 1], a.slice(0, k - 1)};
  }
  throw std::logic_error("split_point: no failing prefix");  // unreachable: A itself fails
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

struct Piece {
  std::vector<std::uint64_t> b;
  GrowthFn f;
};

// f >= every input and id on [1..horizon], f(j) >= floor_j, strictly increasing.
GrowthFn combine(std::vector<GrowthFn> fns, const std::vector<std::uint64_t>& floors, std::uint64_t horizon) {
  fns.push_back(GrowthFn::identity());
  horizon = std::max<std::uint64_t>(horizon, floors.size());
  const GrowthFn g = pointwise_max(fns, horizon);
  const auto& t = std::get<GrowthFn::Table>(g.spec());
  std::vector<std::uint64_t> prefix = t.prefix;
  for (std::size_t j = 0; j < prefix.size(); ++j) {
    if (j < floors.size()) prefix[j] = std::max(prefix[j], floors[j]);
    if (j > 0) prefix[j] = std::max(prefix[j], prefix[j - 1] + 1);
  }
  GrowthFn::Affine tail = t.tail;
  const auto k0 = static_cast<std::int64_t>(prefix.size() + 1);
  const auto need = static_cast<std::int64_t>(prefix.back() + 1) - static_cast<std::int64_t>(tail.slope) * k0;
  tail.offset = std::max(tail.offset, need);
  return GrowthFn::table(std::move(prefix), tail);
}

std::uint64_t pow3(unsigned m) {
  std::uint64_t v = 1;
  for (unsigned i = 0; i < m; ++i) v *= 3;
  return v;
}

std::vector<std::uint64_t> above(const std::vector<std::uint64_t>& c, std::uint64_t x) {
  std::vector<std::uint64_t> out;
  std::copy_if(c.begin(), c.end(), std::back_inserter(out), [x](auto y) { return y > x; });
  return out;
}

class Extractor {
 public:
  Extractor(std::uint64_t horizon, const ExtractOptions& opt, std::vector<ExtractionStep>& log)
      : horizon_(horizon), opt_(opt), log_(log) {}

  Piece run(const FamilyHandle& k, unsigned beta, const std::vector<std::uint64_t>& c, unsigned depth) {
    return beta == 0 ? base(k, c, depth) : next(k, beta - 1, c, depth);
  }

 private:
  std::uint64_t horizon_;
  const ExtractOptions& opt_;
  std::vector<ExtractionStep>& log_;

  void note(const char* rule, unsigned depth, std::uint64_t c, unsigned m, const std::vector<std::uint64_t>& u) {
    log_.push_back({rule, depth, c, m, FinSet::from_sorted(u)});
  }

  // beta = 0: c_1 beyond every element of K^(1); c_{n+1} beyond every set through c_n.
  Piece base(const FamilyHandle& k, const std::vector<std::uint64_t>& c, unsigned depth) {
    std::uint64_t bar = 0;
    for (auto x : k.ground)
      if (in_derived(k, FinSet{x}, 1)) bar = x;
    Piece out{{}, GrowthFn::identity()};
    std::vector<std::uint64_t> cur = c;
    while (out.b.size() < opt_.max_steps) {
      auto it = std::find_if(cur.begin(), cur.end(), [&](auto x) { return x > bar && k.member(FinSet{x}); });
      if (it == cur.end()) break;
      const std::uint64_t cn = *it;
      out.b.push_back(cn);
      bar = cn;
      for (auto x : k.ground)
        if (x > cn && k.member(FinSet{cn, x})) bar = x;
      cur = above(cur, cn);
      note("base", depth, cn, 0, cur);
    }
    return out;
  }

  // beta = gamma + 1: peel c_n, the sets through c_n go through the bounded (3^m blocks) case.
  Piece next(const FamilyHandle& k, unsigned gamma, const std::vector<std::uint64_t>& c, unsigned depth) {
    std::vector<GrowthFn> fns;
    std::vector<std::uint64_t> floors;
    std::vector<std::uint64_t> cur = c;
    std::vector<std::uint64_t> b;
    std::uint64_t prev = 0;
    while (b.size() < opt_.max_steps) {
      auto it = std::find_if(cur.begin(), cur.end(), [&](auto x) { return x > prev && k.member(FinSet{x}); });
      if (it == cur.end()) break;
      const std::uint64_t cn = *it;
      const FamilyHandle l = link(k, FinSet{cn});
      // Transfinite truncated derivatives are empty, so m only matters for gamma = 0.
      unsigned m = 0;
      if (gamma == 0)
        while ((std::uint64_t{1} << m) + 1 <= kMaxDerivedOrder && in_derived(l, FinSet{}, (1u << m) + 1)) ++m;
      const Piece sub = alpha(l, gamma, m, above(cur, cn), depth + 1);
      b.push_back(cn);
      fns.push_back(sub.f);
      floors.push_back(pow3(m) + 1);
      cur = sub.b;
      prev = cn;
      note("next", depth, cn, m, cur);
    }
    return {b, combine(fns, floors, horizon_)};
  }

  // A n B in A^f_{gamma,m} for every A in K.
  Piece alpha(const FamilyHandle& k, unsigned gamma, unsigned m, const std::vector<std::uint64_t>& c,
              unsigned depth) {
    if (m == 0) return run(k, gamma, c, depth);
    const unsigned order = 1u << (m - 1);
    if (gamma > 0 || !in_derived(k, FinSet{}, order + 1)) return alpha(k, gamma, m - 1, c, depth);

    const FamilyHandle j = DerivedHandle{k, order}.as_handle();
    const Piece first = alpha(j, gamma, m - 1, c, depth + 1);
    std::vector<GrowthFn> fns{first.f};
    std::vector<std::uint64_t> cur = first.b;
    std::vector<std::uint64_t> b;
    while (!cur.empty() && b.size() < opt_.max_steps) {
      const std::uint64_t ck = cur.front();
      std::vector<std::uint64_t> rest = above(cur, ck);
      // Sets of K outside the derived family with maximum c_k; only subsets of
      // the chosen points can ever show up in A n B.
      for (const auto& s : sets_ending_at(k, j, b, ck)) {
        const Piece sub = alpha(link(k, s), gamma, m - 1, rest, depth + 1);
        fns.push_back(sub.f);
        rest = sub.b;
        note("alpha-slice", depth, ck, m, rest);
      }
      b.push_back(ck);
      cur = rest;
      note("alpha", depth, ck, m, cur);
    }
    return {b, combine(fns, {}, horizon_)};
  }

  static std::vector<FinSet> sets_ending_at(const FamilyHandle& k, const FamilyHandle& j,
                                            const std::vector<std::uint64_t>& chosen, std::uint64_t ck) {
    std::vector<FinSet> out;
    std::vector<std::uint64_t> cur;
    auto walk = [&](auto&& self, std::size_t from) -> void {
      std::vector<std::uint64_t> with_top = cur;
      with_top.push_back(ck);
      const FinSet s = FinSet::from_sorted(with_top);
      if (!k.member(s)) return;
      if (!j.member(s)) out.push_back(s);
      for (std::size_t i = from; i < chosen.size(); ++i) {
        cur.push_back(chosen[i]);
        self(self, i + 1);
        cur.pop_back();
      }
    };
    walk(walk, 0);
    return out;
  }
};

// Members of a hereditary K inside B, found by a pruned depth-first walk.
template <class Visit>
void members_within(const FamilyHandle& k, const std::vector<std::uint64_t>& b, Visit&& visit) {
  std::vector<std::uint64_t> cur;
  auto walk = [&](auto&& self, std::size_t from) -> void {
    const FinSet s = FinSet::from_sorted(cur);
    if (!k.member(s)) return;
    visit(s);
    for (std::size_t i = from; i < b.size(); ++i) {
      cur.push_back(b[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  walk(walk, 0);
}

}  // namespace

ExtractionResult extract(const FamilyHandle& k, const Ordinal& beta, const FinSet& c, const ExtractOptions& opt) {
  if (!beta.is_finite() || beta.finite_value() > 3)
    throw std::invalid_argument("extraction is supported for beta in {0,1,2,3}");
  if (!k.truncated()) throw std::invalid_argument("extraction needs a truncated family");
  for (auto x : c.elems())
    if (!std::binary_search(k.ground.begin(), k.ground.end(), x))
      throw std::invalid_argument("candidate " + std::to_string(x) + " lies outside the ground set");
  const auto b0 = static_cast<unsigned>(beta.finite_value());
  // Only the beta = 0 promise (K^(2) empty) is a finite-order statement.
  if (b0 == 0 && in_derived(k, FinSet{}, 2))
    throw std::invalid_argument("promise violated: the second derived family is not empty");

  ExtractionResult res;
  const std::uint64_t horizon = k.ground.back();
  const bool meets = std::any_of(c.elems().begin(), c.elems().end(), [&](auto x) { return k.member(FinSet{x}); });
  if (!meets) {
    res.b = c;
    res.f = GrowthFn::identity();
    res.transcript.push_back({"trivial", 0, 0, 0, c});
  } else {
    Extractor ex(horizon, opt, res.transcript);
    Piece p = ex.run(k, b0, c.elems(), 0);
    res.b = FinSet::from_sorted(std::move(p.b));
    res.f = p.f;
  }
  if (res.b.size() < opt.min_size)
    throw std::invalid_argument("candidate set exhausted: |B| = " + std::to_string(res.b.size()) + " < " +
                                std::to_string(opt.min_size));

  // K is hereditary, so {A n B : A in K} is exactly the members of K inside B.
  AdmissibleFamily target(res.f);
  res.verified = true;
  members_within(k, res.b.elems(), [&](const FinSet& s) {
    ++res.replayed;
    if (!target.contains(s, beta)) res.verified = false;
  });
  return res;
}

ExtractionResult extract(const std::vector<FinSet>& k_members, std::uint64_t n, const Ordinal& beta, const FinSet& c,
                         const ExtractOptions& opt) {
  ExtractionResult res = extract(explicit_handle(k_members, n), beta, c, opt);
  AdmissibleFamily target(res.f);
  for (const auto& a : k_members) {
    ++res.replayed;
    if (!target.contains(a.intersect(res.b), beta)) res.verified = false;
  }
  return res;
}

}  // namespace cbsets
