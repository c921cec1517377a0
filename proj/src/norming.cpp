#include "cbsets/norming.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

namespace cbsets {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> sorted_abs(const Vec& a, unsigned limit_coord) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < a.size() && std::uint64_t(i) < limit_coord; ++i)
    if (a(i) != 0) out.push_back(std::abs(a(i)));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double pair_sum(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) s += a[i] * b[i];
  return s;
}

Vec to_vec(const std::vector<double>& x) {
  Vec v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v(Eigen::Index(i)) = x[i];
  return v;
}

// All decreasing tuples of length n over {0, 1/g, ..., 1} starting at 1.
void decreasing_grid(unsigned n, unsigned g, std::vector<std::vector<double>>& out) {
  std::vector<unsigned> cur(n, 0);
  cur[0] = g;
  std::function<void(unsigned)> rec = [&](unsigned pos) {
    if (pos == n) {
      std::vector<double> b(n);
      for (unsigned i = 0; i < n; ++i) b[i] = double(cur[i]) / g;
      out.push_back(std::move(b));
      return;
    }
    for (unsigned v = 0; v <= cur[pos - 1]; ++v) {
      cur[pos] = v;
      rec(pos + 1);
    }
  };
  if (n == 1) {
    out.push_back({1.0});
    return;
  }
  rec(1);
}

double lq_norm(const std::vector<double>& b, double q) {
  if (std::isinf(q)) return b.empty() ? 0 : *std::max_element(b.begin(), b.end());
  double s = 0;
  for (double x : b) s += std::pow(x, q);
  return std::pow(s, 1.0 / q);
}

}  // namespace

// ---------------------------------------------------------------- nets

double NormingNet::sup(const Vec& a) const {
  const auto s = sorted_abs(a, nsupp);
  double best = 0;
  for (unsigned n = 1; n <= nmax; ++n)
    for (const auto& b : nets[n - 1]) best = std::max(best, t[n - 1] * pair_sum(s, b));
  return best;
}

double NormingNet::truncated_norm(const Vec& a) const {
  const auto s = sorted_abs(a, nsupp);
  double best = 0;
  for (unsigned n = 1; n <= std::min<std::size_t>(nmax, s.size()); ++n) {
    Vec prefix(static_cast<Eigen::Index>(n));
    for (unsigned i = 0; i < n; ++i) prefix(i) = s[i];
    best = std::max(best, t[n - 1] * rho_norm(prefix, spec.rho));
  }
  return best;
}

NormingNet build_norming(const SymNormSpec& spec, unsigned nmax, unsigned nsupp, std::uint64_t seed) {
  if (spec.kind != SymNormSpec::Kind::Marcinkiewicz) throw std::invalid_argument("norming nets need a Marcinkiewicz norm");
  if (nmax < 1 || nmax > 8 || nsupp < 1 || nsupp > 24) throw std::invalid_argument("need 1 <= nmax <= 8 and 1 <= Nsupp <= 24");
  NormingNet net;
  net.spec = spec;
  net.nmax = nmax;
  net.nsupp = nsupp;
  for (unsigned n = 1; n <= nmax; ++n) net.t.push_back(spec.weights.at(n));
  net.nets.resize(nmax);

  if (spec.rho.kind == Rho::Kind::L1 || spec.rho.kind == Rho::Kind::Linf ||
      (spec.rho.kind == Rho::Kind::Lp && (spec.rho.q == 1.0 || std::isinf(spec.rho.q)))) {
    // Support functions of the l1 / l-infinity prefix norms are attained at one point.
    const bool l1 = spec.rho.kind == Rho::Kind::L1 || (spec.rho.kind == Rho::Kind::Lp && spec.rho.q == 1.0);
    for (unsigned n = 1; n <= nmax; ++n) {
      std::vector<double> b(n, l1 ? 1.0 : 0.0);
      b[0] = 1.0;
      net.nets[n - 1] = {b};
    }
    net.exact = true;
    return net;
  }

  const double q = spec.rho.q;
  const double qd = q / (q - 1.0);  // dual exponent
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  for (unsigned g = 4; g <= 16; g *= 2) {
    bool ok = true;
    for (unsigned n = 1; n <= nmax && ok; ++n) {
      std::vector<std::vector<double>> grid;
      decreasing_grid(n, g, grid);
      for (auto& b : grid) {
        const double s = lq_norm(b, qd);
        for (double& x : b) x /= s;
      }
      // Validation sample of decreasing a, including flat and spiked shapes.
      for (int k = 0; k < 300 && ok; ++k) {
        std::vector<double> a(n);
        for (auto& x : a) x = k % 3 == 0 ? 1.0 : expo(rng);
        if (k % 3 == 1) a[0] += 5.0;
        std::sort(a.begin(), a.end(), std::greater<>());
        double best = 0;
        for (const auto& b : grid) best = std::max(best, pair_sum(a, b));
        if (best < 0.5 * lq_norm(a, q) * (1 - 1e-12)) ok = false;
      }
      net.nets[n - 1] = std::move(grid);
    }
    if (ok) {
      net.grid_step = 1.0 / g;
      return net;
    }
  }
  throw NetValidationFailed("grid net misses the 1/2 factor even at step 1/16");
}

double brute_force_sup(const NormingNet& net, const Vec& a) {
  std::vector<std::pair<std::uint64_t, double>> pts;
  for (Eigen::Index i = 0; i < a.size() && std::uint64_t(i) < net.nsupp; ++i)
    if (a(i) != 0) pts.emplace_back(std::uint64_t(i + 1), std::abs(a(i)));
  const unsigned p = unsigned(pts.size());
  double best = 0;
  for (unsigned n = 1; n <= net.nmax; ++n) {
    const unsigned size = std::min(n, p);
    // Every placement F of the n nonzero slots; only the slots on supp(a) matter.
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p); ++mask) {
      if (unsigned(std::popcount(mask)) != size) continue;
      std::vector<double> vals;
      for (unsigned i = 0; i < p; ++i)
        if (mask >> i & 1) vals.push_back(pts[i].second);
      std::sort(vals.begin(), vals.end(), std::greater<>());
      for (const auto& b : net.nets[n - 1]) best = std::max(best, net.t[n - 1] * pair_sum(vals, b));
    }
  }
  return best;
}

SandwichReport check_sandwich(const NormingNet& net, std::size_t samples, std::uint64_t seed) {
  SandwichReport r;
  r.min_ratio = kInf;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<unsigned> len(1, net.nsupp), shape(0, 3);
  for (std::size_t s = 0; s < samples; ++s) {
    Vec a = Vec::Zero(net.nsupp);
    const unsigned k = len(rng);
    std::vector<unsigned> pos(net.nsupp);
    std::iota(pos.begin(), pos.end(), 0u);
    std::shuffle(pos.begin(), pos.end(), rng);
    const unsigned sh = shape(rng);
    for (unsigned i = 0; i < k; ++i) {
      double v = unit(rng);
      if (sh == 1) v = v < 0 ? -1.0 : 1.0;
      if (sh == 2) v = std::pow(double(i + 1), -0.5) * (v < 0 ? -1 : 1);
      if (sh == 3) v = v * v * v;
      if (v == 0) v = 1;
      a(pos[i]) = v;
    }
    const double nrm = norm(a, net.spec);
    const double sup = net.sup(a);
    ++r.checked;
    r.min_ratio = std::min(r.min_ratio, sup / nrm);
    r.max_ratio = std::max(r.max_ratio, sup / nrm);
    if (sup < 0.5 * nrm - 1e-12 || sup > nrm + 1e-12) ++r.violations;
    if (net.exact) r.max_exact_err = std::max(r.max_exact_err, std::abs(sup - net.truncated_norm(a)));
  }
  return r;
}

// ---------------------------------------------------------------- capped dual ball

namespace {

// A functional g >= 0 with <g, w> = ||w|| and dual norm 1 (w >= 0).
std::vector<double> norming_functional(const std::vector<double>& w, const SymNormSpec& space) {
  std::vector<double> g(w.size(), 0.0);
  const double nw = norm(to_vec(w), space);
  if (nw == 0) return g;
  switch (space.kind) {
    case SymNormSpec::Kind::Lp: {
      if (space.p == 1.0) {
        std::fill(g.begin(), g.end(), 1.0);
        return g;
      }
      for (std::size_t i = 0; i < w.size(); ++i) g[i] = std::pow(w[i] / nw, space.p - 1.0);
      return g;
    }
    case SymNormSpec::Kind::Linf: {
      g[std::size_t(std::max_element(w.begin(), w.end()) - w.begin())] = 1.0;
      return g;
    }
    case SymNormSpec::Kind::Orlicz: {
      double s = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        g[i] = space.m.derivative(w[i] / nw);
        s += w[i] * g[i];
      }
      if (s > 0)
        for (double& x : g) x *= nw / s;
      return g;
    }
    case SymNormSpec::Kind::Marcinkiewicz:
      break;
  }
  throw std::invalid_argument("dual ball optimizer needs an lp, l-infinity or Orlicz space");
}

// Scale b into the dual ball (the box is preserved by shrinking).
std::vector<double> into_ball(std::vector<double> b, const SymNormSpec& space) {
  std::sort(b.begin(), b.end(), std::greater<>());
  const double dn = dual_norm(to_vec(b), space);
  if (dn > 1.0)
    for (double& x : b) x /= dn * (1 + 1e-12);
  return b;
}

void grid_search(const std::vector<double>& a, double t, const SymNormSpec& space, unsigned g, DualSup& r) {
  const std::size_t n = a.size();
  std::vector<unsigned> cur(n, 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned cap) {
    if (pos == n) {
      std::vector<double> b(n);
      for (std::size_t i = 0; i < n; ++i) b[i] = t * cur[i] / g;
      b = into_ball(std::move(b), space);
      const double v = pair_sum(a, b);
      if (v > r.grid_max) r.grid_max = v;
      if (v > r.value) r.value = v, r.witness = b;
      return;
    }
    for (unsigned v = 0; v <= cap; ++v) {
      cur[pos] = v;
      rec(pos + 1, v);
    }
  };
  rec(0, g);
}

}  // namespace

DualSup capped_dual_sup(const Vec& a_star, double t, std::uint64_t dim, const SymNormSpec& space) {
  if (!(t > 0)) throw std::invalid_argument("box bound must be positive");
  std::vector<double> a = sorted_abs(a_star, std::numeric_limits<unsigned>::max());
  if (a.size() > dim) a.resize(dim);
  DualSup r;
  if (a.empty()) {
    r.certified = true;
    return r;
  }
  const std::size_t n = a.size();
  auto upper = [&](double c) {
    std::vector<double> w(n);
    double excess = 0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = std::min(a[i], c);
      excess += a[i] - w[i];
    }
    return t * excess + (c > 0 ? norm(to_vec(w), space) : 0.0);
  };
  auto lower_at = [&](double c) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::min(a[i], c);
    const auto g = norming_functional(w, space);
    std::vector<double> b1(n), b2(n);
    for (std::size_t i = 0; i < n; ++i) {
      b1[i] = std::min(g[i], t);
      b2[i] = a[i] > c ? t : b1[i];
    }
    for (auto* b : {&b1, &b2}) {
      auto f = into_ball(*b, space);
      const double v = pair_sum(a, f);
      if (v > r.value) r.value = v, r.witness = f;
    }
  };

  // Coarse scan of the level c over [0, a_1], then golden refinement.
  const double top = a.front();
  double best_c = top, best_u = upper(top);
  std::vector<double> cands(a.begin(), a.end());
  for (int k = 0; k <= 64; ++k) cands.push_back(top * k / 64.0);
  for (double c : cands) {
    const double u = upper(c);
    if (u < best_u) best_u = u, best_c = c;
  }
  double lo = std::max(0.0, best_c - top / 64.0), hi = std::min(top, best_c + top / 64.0);
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = upper(x1), f2 = upper(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-14 * std::max(1.0, top); ++it) {
    if (f1 < f2) {
      hi = x2, x2 = x1, f2 = f1, x1 = hi - phi * (hi - lo), f1 = upper(x1);
    } else {
      lo = x1, x1 = x2, f1 = f2, x2 = lo + phi * (hi - lo), f2 = upper(x2);
    }
  }
  for (double c : {x1, x2})
    if (const double u = upper(c); u < best_u) best_u = u, best_c = c;
  r.upper = best_u;

  lower_at(best_c);
  lower_at(top);
  // Flat candidates t * 1_{[1..k]}.
  for (std::size_t k = 1; k <= n; ++k) {
    auto b = into_ball(std::vector<double>(k, t), space);
    const double v = pair_sum(a, b);
    if (v > r.value) r.value = v, r.witness = b;
  }

  if (n <= 6) {
    grid_search(a, t, space, space.kind == SymNormSpec::Kind::Orlicz ? 4 : 8, r);
    r.grid_checked = true;
    if (r.grid_max > r.upper + 1e-6)
      throw OptimizerDisagreement("grid point beats the dual upper bound by " + std::to_string(r.grid_max - r.upper));
  }
  r.certified = r.upper - r.value <= 1e-6 * std::max(1.0, r.upper);
  return r;
}

// ---------------------------------------------------------------- converse

std::vector<double> converse_weights(const SymNormSpec& space, double eta, unsigned count) {
  std::vector<double> t;
  for (unsigned n = 1; n <= count; ++n) {
    double tn = 1.0;
    if (space.kind == SymNormSpec::Kind::Linf) {
      tn = 1.0 / n;
    } else {
      const double need = 1.0 / fundamental(space, n);
      // delta(eps) grows with eps; the smallest dyadic eps <= 1 that still works.
      for (int j = 1; j <= 60; ++j) {
        const double eps = std::ldexp(1.0, -j);
        if (delta_of_eps(space, eta / 2, eps).delta < need) break;
        tn = eps;
      }
    }
    if (!t.empty()) tn = std::min(tn, t.back());
    t.push_back(tn);
  }
  return t;
}

RhoValue converse_rho(const SymNormSpec& space, const GrowthFn& f, unsigned n, const Vec& v, double eta) {
  if (n < 1) throw std::invalid_argument("n starts at 1");
  RhoValue r;
  r.t = converse_weights(space, eta, n).back();
  r.dim = double(f(n));
  if (space.kind == SymNormSpec::Kind::Linf) {
    r.rho = norm_linf(v);
    r.detail.value = r.detail.upper = r.rho * r.t;
    r.detail.certified = true;
    return r;
  }
  r.detail = capped_dual_sup(v, r.t, f(n), space);
  r.rho = r.detail.value / r.t;
  return r;
}

InequalityCheck window_inequality(const SymNormSpec& space, const GrowthFn& f, const Vec& v, double eta) {
  InequalityCheck r;
  const auto a = sorted_abs(v, std::numeric_limits<unsigned>::max());
  r.lhs = eta * norm(v, space);
  for (std::size_t n = 1; n <= a.size(); ++n) {
    const std::size_t end = std::min<std::size_t>(a.size(), n - 1 + f(n));
    std::vector<double> window(a.begin() + std::ptrdiff_t(n - 1), a.begin() + std::ptrdiff_t(end));
    r.rhs = std::max(r.rhs, norm(to_vec(window), space));
  }
  r.ok = r.lhs <= r.rhs + 1e-12;
  return r;
}

EquivalenceCheck converse_equivalence(const SymNormSpec& space, const GrowthFn& f, const Vec& v, double eta) {
  EquivalenceCheck r;
  r.norm = norm(v, space);
  const std::size_t len = support(v).size();
  const auto t = converse_weights(space, eta, unsigned(std::max<std::size_t>(len, 1)));
  for (unsigned n = 1; n <= len; ++n) {
    const double val = space.kind == SymNormSpec::Kind::Linf ? t[n - 1] * norm_linf(v)
                                                             : capped_dual_sup(v, t[n - 1], f(n), space).value;
    r.sup = std::max(r.sup, val);
  }
  r.lower_ok = eta / 4 * r.norm <= r.sup + 1e-12;
  r.upper_ok = r.sup <= r.norm + 1e-9;
  return r;
}

// ---------------------------------------------------------------- embed

EmbedParams embed_params(const OrliczFn& m, double eta, unsigned count) {
  const SymNormSpec space = SymNormSpec::orlicz(m);
  EmbedParams p;
  p.delta = delta_sequence(m, eta, count + 1);
  for (unsigned n = 1; n <= count + 1; ++n) {
    const double cap = delta_of_eps(space, 1.0, std::ldexp(1.0, -int(n))).delta;
    double d = std::min(p.delta[n - 1], 0.5 * cap);
    if (n > 1) d = std::min(d, 0.5 * p.delta[n - 2]);
    p.delta[n - 1] = d;
  }
  for (unsigned n = 1; n <= count; ++n) {
    // ||sum_{k<=l} e_k|| = 1/M^{-1}(1/l) > T  iff  l > 1/M(1/T).
    const double target = 1.0 / (eta * p.delta[n]);
    const double log_bound = -m.log_eval(1.0 / target);
    double l = std::floor(std::exp(log_bound)) + 1.0;
    if (l < 9.0e15) {
      // Settle rounding against the fundamental function itself.
      auto ok = [&](double x) { return p.delta[n] * fundamental(space, std::uint64_t(x)) > 1.0 / eta; };
      while (l > 1 && ok(l - 1)) l -= 1;
      while (!ok(l)) l += 1;
    }
    p.l.push_back(l);
  }
  return p;
}

RhoValue embed_rho(const OrliczFn& m, double eta, unsigned n, const Vec& v) {
  if (n < 1) throw std::invalid_argument("n starts at 1");
  const auto params = embed_params(m, eta, n);
  RhoValue r;
  r.t = std::ldexp(1.0, -int(n));
  r.dim = params.l[n - 1];
  const std::uint64_t dim = r.dim > 1e18 ? std::uint64_t(1e18) : std::uint64_t(r.dim);
  r.detail = capped_dual_sup(v, r.t, dim, SymNormSpec::orlicz(m));
  r.rho = r.detail.value / r.t;
  return r;
}

EmbedCheck check_embed_norming(const OrliczFn& m, double eta, const Vec& v, unsigned nmax) {
  EmbedCheck r;
  const SymNormSpec space = SymNormSpec::orlicz(m);
  const auto params = embed_params(m, eta, nmax);
  r.norm = norm(v, space);
  const std::size_t len = support(v).size();
  for (unsigned n = 1; n <= nmax; ++n) {
    const double t = std::ldexp(1.0, -int(n));
    const double l = params.l[n - 1];
    const std::uint64_t dim = l > 1e18 ? std::uint64_t(1e18) : std::uint64_t(l);
    r.sup = std::max(r.sup, capped_dual_sup(v, t, dim, space).value);
    if (l >= double(len) && t * norm_l1(v) <= r.sup) break;  // later terms are no larger
  }
  r.upper_bound = std::max(norm_linf(v) / (eta * params.delta[0]), 2.0 / eta * r.sup);
  r.left_ok = r.sup <= r.norm + 1e-9;
  r.right_ok = r.norm <= r.upper_bound + 1e-9;
  return r;
}

}  // namespace cbsets
