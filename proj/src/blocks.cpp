#include "cbsets/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <variant>

#include "cbsets/family.hpp"

namespace cbsets {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);
constexpr unsigned kMaxDepth = 1u << 14;

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

struct DepthExceeded {};

std::uint64_t parse_u64(std::string_view s) {
  std::size_t used = 0;
  const std::string str(s);
  unsigned long long v = 0;
  try {
    v = std::stoull(str, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not an integer: '" + str + "'");
  }
  if (used != str.size()) throw std::invalid_argument("not an integer: '" + str + "'");
  return v;
}

}  // namespace

// ---------------------------------------------------------------- growth

GrowthReport check_growth(const GrowthFn& f, std::uint64_t upto) {
  GrowthReport r;
  if (const auto* pb = std::get_if<GrowthFn::PowBase>(&f.spec())) {
    // (fi): sum_{i>=m} c^{-2i} = c^{-2m} / (1 - c^{-2}) <= 2 c^{-2m} iff c^2 >= 2.
    // (fm): c^{-m-2} <= 1/4 for all m >= 1 iff c^3 >= 4.
    r.method = "symbolic";
    const std::uint64_t c = pb->base;
    if (c * c < 2) r.fi = false, r.fi_first_failure = 1;
    if (c * c * c < 4) r.fm = false, r.fm_first_failure = 1;
    return r;
  }
  r.method = "numeric";
  // Partial sums far past `upto`, then an integral bound for the rest. All
  // non-PowBase kinds grow affinely from some point on with slope >= 1.
  const std::uint64_t last = upto + 200000;
  std::vector<double> suffix(last + 2, 0.0);
  {
    double slope = 1, offset = 0;
    if (const auto* af = std::get_if<GrowthFn::Affine>(&f.spec())) slope = double(af->slope), offset = double(af->offset);
    if (const auto* tb = std::get_if<GrowthFn::Table>(&f.spec()))
      slope = double(tb->tail.slope), offset = double(tb->tail.offset);
    // sum_{i>last} 1/(slope i + offset)^2 <= int_last^inf dx/(slope x + offset)^2
    const double fl = slope * double(last) + offset;
    suffix[last + 1] = fl > 0 ? 1.0 / (slope * fl) : kInf;
  }
  for (std::uint64_t i = last; i >= 1; --i) {
    const double fi = std::exp(f.log_value(i));
    suffix[i] = suffix[i + 1] + 1.0 / (fi * fi);
  }
  for (std::uint64_t m = 1; m <= upto; ++m) {
    const double fm = std::exp(f.log_value(m));
    if (r.fi && suffix[m] > 2.0 / (fm * fm) * (1 + 1e-12)) r.fi = false, r.fi_first_failure = m;
    if (r.fm && f.log_value(m) - 2 * f.log_value(m + 1) > std::log(0.25) + 1e-12) r.fm = false, r.fm_first_failure = m;
  }
  return r;
}

// ---------------------------------------------------------------- scale / ground set

double Scale::log_t(std::int64_t j) const { return -double(j) * std::log(base); }

Scale Scale::parse(std::string_view text) {
  if (text == "dec10") return Scale{10.0};
  if (text.starts_with("dec:")) {
    const double b = std::stod(std::string(text.substr(4)));
    if (!(b > 1.0)) throw std::invalid_argument("scale base must exceed 1");
    return Scale{b};
  }
  throw std::invalid_argument("unknown scale '" + std::string(text) + "'");
}

std::string Scale::to_string() const {
  if (base == 10.0) return "dec10";
  return "dec:" + std::to_string(base);
}

std::uint64_t GroundSet::index_at_or_after(std::uint64_t x) const {
  if (x <= first) return 0;
  return (x - first + step - 1) / step;
}

GroundSet GroundSet::parse(std::string_view text) {
  if (text == "even") return {2, 2};
  if (text == "odd") return {1, 2};
  if (text == "all") return {1, 1};
  if (text.starts_with("ap:")) {
    auto rest = text.substr(3);
    auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("ap ground set needs ap:<first>:<step>");
    GroundSet g{parse_u64(rest.substr(0, colon)), parse_u64(rest.substr(colon + 1))};
    if (g.first == 0 || g.step == 0) throw std::invalid_argument("ground set must lie in {1,2,...} and be infinite");
    return g;
  }
  throw std::invalid_argument("unknown ground set '" + std::string(text) + "'");
}

std::string GroundSet::to_string() const {
  if (first == 2 && step == 2) return "even";
  if (first == 1 && step == 2) return "odd";
  if (first == 1 && step == 1) return "all";
  return "ap:" + std::to_string(first) + ":" + std::to_string(step);
}

// ---------------------------------------------------------------- blocks

std::uint64_t Block::max_supp() const {
  if (!complete || coords.empty()) throw std::logic_error("support end unknown for a block past the window");
  return coords.back();
}

double Block::log_phi_scaled(const OrliczFn& m, double c) const {
  double acc = -kInf;
  const double lc = std::log(c);
  for (double lv : log_values) acc = log_add(acc, m.log_eval_at_log(lc + lv));
  return acc;
}

Vec Block::to_vec() const {
  Vec v = Vec::Zero(coords.empty() ? 0 : Eigen::Index(coords.back()));
  for (std::size_t i = 0; i < coords.size(); ++i) v(Eigen::Index(coords[i] - 1)) = std::exp(log_values[i]);
  return v;
}

namespace {

class Builder {
 public:
  Builder(const BlockQuadruple& q, Block& out) : q_(q), out_(out) {
    last_index_ = q.window < q.b.first ? -1 : std::int64_t((q.window - q.b.first) / q.b.step);
  }

  // Largest index that is materialized; shrinks if a later child cannot be resolved.
  std::int64_t last_index() const { return last_index_; }

  BlockNode leaf(double log_a, std::int64_t t_exp, std::uint64_t idx, std::uint64_t& next) {
    BlockNode n;
    n.min_supp = q_.b.at(idx);
    n.t_exp = t_exp;
    const double log_t = q_.s.log_t(t_exp);
    const double log_m = q_.m.log_eval_at_log(log_t);
    const double ratio = std::exp(log_a - log_m);
    n.count = std::max(1.0, std::round(0.75 * ratio));
    const double remaining = std::int64_t(idx) > last_index_ ? 0.0 : double(last_index_ - std::int64_t(idx) + 1);
    const double mat = std::min(n.count, remaining);
    n.materialized = std::uint64_t(mat);
    for (std::uint64_t k = 0; k < n.materialized; ++k) {
      out_.coords.push_back(q_.b.at(idx + k));
      out_.log_values.push_back(log_t);
    }
    n.complete = n.count <= remaining;
    n.log_mass = std::log(n.count) + log_m;
    if (n.complete) next = idx + std::uint64_t(n.count);
    return n;
  }

  std::int64_t leaf_exponent(double log_a) const {
    // Least j >= 1 with M(t_j) <= a/2.
    const double target = log_a - kLn2;
    auto fits = [&](std::int64_t j) { return q_.m.log_eval_at_log(q_.s.log_t(j)) <= target; };
    std::int64_t hi = 1;
    while (!fits(hi)) {
      if (hi > (std::int64_t{1} << 60)) throw BlockInfeasible("scale exhausted: no t in S with M(t) <= a/2");
      hi *= 2;
    }
    std::int64_t lo = hi / 2;  // fits(lo) false unless lo == 0
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      (fits(mid) ? hi : lo) = mid;
    }
    return hi;
  }

  BlockNode build(const Ordinal& level, double log_a, std::uint64_t idx, std::uint64_t& next, unsigned depth) {
    if (depth > kMaxDepth) throw DepthExceeded{};
    const std::uint64_t s = q_.b.at(idx);
    Ordinal eff = level;
    while (eff.is_limit()) eff = fund_seq(eff, q_.f(s));
    if (eff.is_finite() && eff.finite_value() + depth > kMaxDepth) throw DepthExceeded{};

    if (eff.is_zero()) {
      BlockNode n = leaf(log_a, leaf_exponent(log_a), idx, next);
      n.level = level;
      n.log_size = log_a;
      return n;
    }

    BlockNode n;
    n.level = level;
    n.effective = eff;
    n.log_size = log_a;
    n.min_supp = s;
    n.log_p = 2.0 * q_.f.log_value(s);
    const std::uint64_t fs = q_.f(s);
    n.p = fs <= (std::uint64_t{1} << 31) ? fs * fs : 0;
    const Ordinal child_level = eff.predecessor();
    const double child_log = log_a - n.log_p;

    std::uint64_t at = idx;
    double mass = -kInf;
    bool all_complete = true;
    for (std::uint64_t i = 0; n.p == 0 || i < n.p; ++i) {
      if (std::int64_t(at) > last_index_) {
        all_complete = false;
        break;
      }
      std::uint64_t nxt = 0;
      BlockNode child;
      try {
        child = build(child_level, child_log, at, nxt, depth + 1);
      } catch (const DepthExceeded&) {
        if (i == 0) throw;
        // This child would need an absurd recursion depth; stop materializing
        // right before it so everything below the new window stays exact.
        last_index_ = std::int64_t(at) - 1;
        all_complete = false;
        break;
      }
      const bool done = child.complete;
      mass = log_add(mass, child.log_mass);
      n.children.push_back(std::move(child));
      if (!done) {
        all_complete = false;
        break;
      }
      at = nxt;
    }
    n.complete = all_complete && n.p != 0;
    if (n.complete) {
      n.log_mass = mass;
      next = at;
      if (mass > log_a + 1e-9 || mass < log_a - kLn2 - 1e-9)
        throw std::logic_error("block mass outside [a/2, a]");
    }
    return n;
  }

 private:
  const BlockQuadruple& q_;
  Block& out_;
  std::int64_t last_index_;
};

void finish(const BlockQuadruple& q, const Builder& bld, Block& out) {
  out.complete = out.tree.complete;
  out.window = bld.last_index() < 0 ? 0 : q.b.at(std::uint64_t(bld.last_index()));
  // Drop anything materialized past a window that shrank afterwards.
  while (!out.coords.empty() && out.coords.back() > out.window) {
    out.coords.pop_back();
    out.log_values.pop_back();
  }
  if (out.complete) {
    const double lm = out.tree.log_mass, la = out.log_size;
    if (lm > la + 1e-9 || lm < la - kLn2 - 1e-9) throw std::logic_error("block mass outside [a/2, a]");
  }
}

}  // namespace

Block build_leaf(const BlockQuadruple& q, double a, std::int64_t t_exp, std::uint64_t start) {
  if (!(a > 0)) throw std::invalid_argument("block size must be positive");
  if (t_exp < 1) throw std::invalid_argument("scale index starts at 1");
  Block out;
  out.log_size = std::log(a);
  const std::uint64_t idx = q.b.index_at_or_after(start);
  out.start = q.b.at(idx);
  Builder bld(q, out);
  std::uint64_t next = 0;
  out.tree = bld.leaf(out.log_size, t_exp, idx, next);
  out.tree.log_size = out.log_size;
  finish(q, bld, out);
  return out;
}

Block build_block(const BlockQuadruple& q, const Ordinal& beta, double a, std::uint64_t start) {
  if (!(a > 0)) throw std::invalid_argument("block size must be positive");
  const auto g = check_growth(q.f);
  if (!g.fi || !g.fm) throw std::invalid_argument("growth function fails (fi)/(fm)");
  Block out;
  out.beta = beta;
  out.log_size = std::log(a);
  const std::uint64_t idx = q.b.index_at_or_after(start);
  out.start = q.b.at(idx);
  Builder bld(q, out);
  std::uint64_t next = 0;
  try {
    out.tree = bld.build(beta, out.log_size, idx, next, 0);
  } catch (const DepthExceeded&) {
    throw BlockInfeasible("block recursion deeper than " + std::to_string(kMaxDepth) + " levels");
  }
  finish(q, bld, out);
  return out;
}

PhiBound phi_bound_check(const Block& x, const FinSet& a, const BlockQuadruple& q) {
  if (a.empty()) throw std::invalid_argument("A must be nonempty");
  if (a.min() >= x.min_supp()) throw std::invalid_argument("need min A < min supp x");
  if (!x.complete && a.max() > x.window) throw std::invalid_argument("A reaches past the materialized window");
  if (!AdmissibleFamily(q.f).contains(a, x.beta)) throw std::invalid_argument("A is not admissible at the block's level");
  PhiBound r;
  r.log_lhs = -kInf;
  for (std::size_t i = 0; i < x.coords.size(); ++i)
    if (a.contains(x.coords[i])) r.log_lhs = log_add(r.log_lhs, q.m.log_eval_at_log(x.log_values[i]));
  r.log_rhs = kLn2 + x.log_size + q.f.log_value(a.min()) - 2.0 * q.f.log_value(x.min_supp());
  r.lhs = std::exp(r.log_lhs);
  r.rhs = std::exp(r.log_rhs);
  r.ok = r.log_lhs <= log_add(r.log_rhs, std::log(1e-12));
  return r;
}

// ---------------------------------------------------------------- witness

WitnessReport main_witness(const OrliczFn& m, double eta, const Ordinal& beta, const BlockQuadruple& q_in,
                           std::size_t samples, std::uint64_t seed) {
  if (!(eta > 0 && eta <= 1)) throw std::invalid_argument("eta must lie in (0, 1]");
  BlockQuadruple q = q_in;
  q.m = m;
  WitnessReport r;

  const ConditionOne est = condition_one_estimator(m, eta / 2);
  if (est.limit_zero) {
    r.reason = "M(eta t/2)/M(t) -> 0: no witness";
    return r;
  }
  // theta over the scale levels; the direct quotient keeps homogeneous cases exact.
  double theta = kInf;
  for (std::int64_t j = 1; j <= 40; ++j) {
    const double lt = q.s.log_t(j);
    const double t = std::exp(lt), mt = m(t), mh = m(eta * t / 2);
    const double ratio = (mt > 1e-300 && mh > 1e-300)
                             ? mh / mt
                             : std::exp(m.log_eval_at_log(std::log(eta / 2) + lt) - m.log_eval_at_log(lt));
    theta = std::min(theta, ratio);
  }
  r.precondition = theta > 0;
  r.theta = theta;
  if (!r.precondition) {
    r.reason = "theta = 0 on S";
    return r;
  }
  // Guard ceil against 2/theta landing a rounding error above an integer.
  r.j = std::uint64_t(std::ceil(2.0 / theta - 1e-9)) + 1;

  std::vector<Block> xs;
  std::uint64_t start = q.b.first;
  for (std::uint64_t k = 0; k < r.j; ++k) {
    if (start > q.window) break;  // the rest lie wholly past the window
    xs.push_back(build_block(q, beta, 1.0, start));
    if (!xs.back().complete) break;
    start = xs.back().max_supp() + 1;
  }
  for (const auto& x : xs) r.complete_blocks += x.complete ? 1 : 0;

  // (ii): exact for complete blocks, theta * Phi(x_k) >= theta/2 otherwise.
  for (std::uint64_t k = 0; k < r.j; ++k) {
    if (k < xs.size() && xs[k].complete) {
      const double v = std::exp(xs[k].log_phi_scaled(m, eta / 2));
      r.sum_exact_complete += v;
      r.sum_lower += v;
    } else {
      r.sum_lower += theta / 2;
    }
  }

  // (i): sampled A in A^f_beta against the materialized part of sum x_k / 2.
  std::vector<std::uint64_t> coords;
  std::vector<double> half_mass;  // M(t/2) at each coordinate
  std::uint64_t exact_upto = 0;
  for (const auto& x : xs) {
    for (std::size_t i = 0; i < x.coords.size(); ++i) {
      coords.push_back(x.coords[i]);
      half_mass.push_back(std::exp(m.log_eval_at_log(std::log(0.5) + x.log_values[i])));
    }
    exact_upto = x.complete ? x.max_supp() : x.window;
  }
  AdmissibleFamily fam(q.f);
  std::mt19937_64 rng(seed);
  auto evaluate = [&](const FinSet& a) {
    double v = 0;
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (a.contains(coords[i])) v += half_mass[i];
    ++r.samples;
    r.max_restricted_phi = std::max(r.max_restricted_phi, v);
    if (v > 1.0 + 1e-12) {
      ++r.violations;
      if (!r.first_violation) r.first_violation = a;
    }
  };
  auto grow = [&](std::uint64_t m0, std::size_t first, std::size_t stride, std::size_t target) {
    std::vector<std::uint64_t> elems{m0};
    for (std::size_t i = first; i < coords.size() && elems.size() < target; i += stride) {
      if (coords[i] <= elems.back() || coords[i] > exact_upto) continue;
      elems.push_back(coords[i]);
      if (!fam.contains(FinSet::from_sorted(elems), beta)) elems.pop_back();
    }
    fam.clear_cache();
    return FinSet::from_sorted(elems);
  };
  if (!coords.empty()) {
    // Heaviest sets first: a small minimum followed by a long run of the support.
    for (std::uint64_t m0 = 1; m0 <= 8 && r.samples < samples; ++m0) evaluate(grow(m0, 0, 1, 512));
    std::uniform_int_distribution<std::size_t> pos(0, coords.size() - 1);
    std::uniform_int_distribution<std::size_t> stride(1, 8), target(1, 256);
    std::uniform_int_distribution<std::uint64_t> small(1, 16);
    while (r.samples < samples) {
      const std::size_t p0 = pos(rng);
      const std::uint64_t m0 = (rng() & 1) ? small(rng) : coords[p0];
      const std::size_t first = std::size_t(std::upper_bound(coords.begin(), coords.end(), m0) - coords.begin());
      const std::size_t skip = first < coords.size() ? std::uniform_int_distribution<std::size_t>(first, coords.size() - 1)(rng) : first;
      evaluate(grow(m0, (rng() & 1) ? first : skip, stride(rng), target(rng)));
    }
  }
  r.witness = r.violations == 0 && r.sum_lower > 1.0;
  r.reason = r.witness ? "contradiction pair exhibited" : "checks failed";
  return r;
}

}  // namespace cbsets
