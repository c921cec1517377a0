#include "cbsets/family.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbsets {

std::pair<Ordinal, std::uint64_t> split_finite_tail(const Ordinal& beta) {
  if (beta.is_successor()) {
    const std::uint64_t n = beta.terms().back().coeff;
    std::vector<OrdinalTerm> head(beta.terms().begin(), beta.terms().end() - 1);
    return {Ordinal::from_terms(std::move(head)), n};
  }
  return {beta, 0};
}

namespace {

std::string cache_key(const FinSet& a, const Ordinal& beta) { return set_key(a) + "|" + to_string(beta); }

const Ordinal& omega_squared() {
  static const Ordinal w2 = parse_cnf("w^2");
  return w2;
}

}  // namespace

std::uint64_t membership_capacity(const Ordinal& beta, std::uint64_t m) {
  if (m < 2) return 1;
  constexpr std::uint64_t kCap = GrowthFn::kSaturation;
  std::uint64_t mult = 1;
  auto times_m = [&](std::uint64_t k) {
    for (std::uint64_t i = 0; i < k && mult < kCap; ++i) mult = mult > kCap / m ? kCap : mult * m;
  };
  Ordinal x = beta;
  while (mult < kCap) {
    if (x.is_finite()) {
      times_m(x.is_zero() ? 0 : x.terms().back().coeff);
      break;
    }
    // Every level >= w has cap >= cap(w) = m^(m+1); once that saturates,
    // stop before the fundamental sequences grow huge (m can be 4^8).
    const std::uint64_t saved = mult;
    times_m(m + 1);
    if (mult >= kCap) break;
    mult = saved;
    const auto [lambda, n] = split_finite_tail(x);
    if (n > 0) {
      times_m(n);
      x = lambda;
    } else {
      x = fund_seq(x, m);
    }
  }
  return mult;
}

bool AdmissibleFamily::contains(const FinSet& a, const Ordinal& beta) const {
  if (a.size() <= 1) return true;
  const std::string key = cache_key(a, beta);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const bool r = decide(a, beta);
  std::lock_guard lock(mutex_);
  cache_.emplace(key, r);
  return r;
}

bool AdmissibleFamily::decide(const FinSet& a, const Ordinal& beta) const {
  if (a.size() <= 1) return true;
  const std::uint64_t fmin = f_(a.min());
  if (fmin < 2 || beta.is_zero()) return false;
  const auto [lambda, n] = split_finite_tail(beta);
  if (n + 1 >= a.size()) return true;
  if (a.size() <= membership_capacity(beta, fmin)) return true;
  if (n > 0) return greedy_split(a, beta.predecessor()).size() <= fmin;
  return contains(a, fund_seq(beta, fmin));
}

std::vector<std::size_t> AdmissibleFamily::greedy_split(const FinSet& a, const Ordinal& gamma) const {
  std::vector<std::size_t> sizes;
  std::size_t i = 0;
  // Prefix membership is monotone in the length (hereditary), so the longest
  // member prefix is found by galloping then bisecting.
  while (i < a.size()) {
    const std::size_t rest = a.size() - i;
    std::size_t lo = 1, hi = 2;  // lo is a member prefix length; hi is untested
    while (hi <= rest && contains(a.slice(i, hi), gamma)) {
      lo = hi;
      hi *= 2;
    }
    hi = std::min(hi, rest + 1);  // first length known to fail (or past the end)
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      (contains(a.slice(i, mid), gamma) ? lo : hi) = mid;
    }
    sizes.push_back(lo);
    i += lo;
  }
  return sizes;
}

std::uint64_t AdmissibleFamily::min_blocks(const FinSet& a, const Ordinal& gamma) const {
  return greedy_split(a, gamma).size();
}

bool AdmissibleFamily::is_member_bounded_by(const FinSet& a, const Ordinal& beta, std::uint64_t bound) const {
  return min_blocks(a, beta) <= bound;
}

bool AdmissibleFamily::is_member_bounded(const FinSet& a, const Ordinal& beta, unsigned m) const {
  std::uint64_t bound = 1;
  for (unsigned i = 0; i < m && bound < GrowthFn::kSaturation; ++i) bound *= 3;
  return is_member_bounded_by(a, beta, bound);
}

MembershipCert AdmissibleFamily::certify(const FinSet& a, const Ordinal& beta) const {
  MembershipCert cert;
  cert.set = a;
  cert.level = beta;
  if (a.size() <= 1) return cert;
  const std::uint64_t fmin = f_(a.min());
  const auto [lambda, n] = split_finite_tail(beta);
  // Deep levels: the explicit tree can follow millions of descent steps.
  if (n + 1 < a.size() && !(beta < omega_squared()) && a.size() <= membership_capacity(beta, fmin)) {
    cert.kind = MembershipCert::Kind::Capacity;
    return cert;
  }
  if (n > 0) {
    cert.kind = MembershipCert::Kind::Blocks;
    const Ordinal lower = beta.predecessor();
    if (n + 1 >= a.size()) {
      cert.blocks = {a.slice(0, 1), a.slice(1, a.size() - 1)};
    } else {
      std::size_t first = 0;
      for (auto len : greedy_split(a, lower)) {
        cert.blocks.push_back(a.slice(first, len));
        first += len;
      }
    }
    for (const auto& b : cert.blocks) cert.children.push_back(certify(b, lower));
    return cert;
  }
  cert.kind = MembershipCert::Kind::Limit;
  cert.resolved = fund_seq(beta, fmin);
  cert.children.push_back(certify(a, cert.resolved));
  return cert;
}

MembershipResult AdmissibleFamily::is_member(const FinSet& a, const Ordinal& beta) const {
  MembershipResult r;
  r.member = contains(a, beta);
  if (r.member) r.certificate = certify(a, beta);
  return r;
}

std::vector<FinSet> AdmissibleFamily::enumerate(const Ordinal& beta, unsigned n) const {
  if (n > 20) throw std::invalid_argument("enumerate scans 2^n subsets; n must be <= 20");
  std::vector<FinSet> out;
  std::vector<std::uint64_t> current;
  // Members are closed under removing the maximum, so a depth-first walk that
  // appends increasing elements and prunes non-members visits exactly the
  // members, in lexicographic order.
  auto walk = [&](auto&& self, std::uint64_t next) -> void {
    FinSet s = FinSet::from_sorted(current);
    if (!contains(s, beta)) return;
    out.push_back(s);
    for (std::uint64_t x = next; x <= n; ++x) {
      current.push_back(x);
      self(self, x + 1);
      current.pop_back();
    }
  };
  walk(walk, 1);
  return out;
}

void AdmissibleFamily::clear_cache() const {
  std::lock_guard lock(mutex_);
  cache_.clear();
}

bool verify_certificate(const MembershipCert& cert, const GrowthFn& f) {
  const FinSet& a = cert.set;
  switch (cert.kind) {
    case MembershipCert::Kind::Trivial:
      return a.size() <= 1 && cert.children.empty();
    case MembershipCert::Kind::Blocks: {
      if (!cert.level.is_successor() || a.empty()) return false;
      if (cert.blocks.empty() || cert.blocks.size() != cert.children.size()) return false;
      if (cert.blocks.size() > f(a.min())) return false;
      const Ordinal lower = cert.level.predecessor();
      FinSet joined;
      for (std::size_t i = 0; i < cert.blocks.size(); ++i) {
        if (cert.blocks[i].empty()) return false;
        if (i > 0 && !precedes(cert.blocks[i - 1], cert.blocks[i])) return false;
        const auto& child = cert.children[i];
        if (!(child.set == cert.blocks[i]) || !(child.level == lower)) return false;
        if (!verify_certificate(child, f)) return false;
        joined = joined.unite(cert.blocks[i]);
      }
      return joined == a;
    }
    case MembershipCert::Kind::Capacity:
      return a.size() >= 2 && cert.children.empty() && a.size() <= membership_capacity(cert.level, f(a.min()));
    case MembershipCert::Kind::Limit: {
      if (!cert.level.is_limit() || a.empty() || cert.children.size() != 1) return false;
      if (!(cert.resolved == fund_seq(cert.level, f(a.min())))) return false;
      const auto& child = cert.children.front();
      return child.set == a && child.level == cert.resolved && verify_certificate(child, f);
    }
  }
  return false;
}

MembershipResult is_member(const FinSet& a, const GrowthFn& f, const Ordinal& beta) {
  return AdmissibleFamily(f).is_member(a, beta);
}

std::uint64_t min_blocks(const FinSet& a, const GrowthFn& f, const Ordinal& gamma) {
  return AdmissibleFamily(f).min_blocks(a, gamma);
}

bool is_member_bounded(const FinSet& a, const GrowthFn& f, const Ordinal& beta, unsigned m) {
  return AdmissibleFamily(f).is_member_bounded(a, beta, m);
}

std::vector<FinSet> enumerate(const GrowthFn& f, const Ordinal& beta, unsigned n) {
  return AdmissibleFamily(f).enumerate(beta, n);
}

}  // namespace cbsets
