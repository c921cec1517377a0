#include "cbsets/seqspace.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace cbsets {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::string shortest(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

Vec parse_vec(std::string_view text) {
  std::map<std::uint64_t, double> entries;
  if (!trim(text).empty()) {
    std::uint64_t next = 1;
    for (const auto& item : split(text, ',')) {
      std::uint64_t coord = next;
      std::string value = item;
      if (auto at = item.find('@'); at != std::string::npos) {
        value = item.substr(0, at);
        const std::string c = item.substr(at + 1);
        auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), coord);
        if (ec != std::errc() || ptr != c.data() + c.size() || coord == 0)
          throw std::invalid_argument("bad coordinate in '" + item + "'");
      }
      if (!entries.emplace(coord, parse_double(value)).second)
        throw std::invalid_argument("coordinate " + std::to_string(coord) + " given twice");
      next = coord + 1;
    }
  }
  Vec v = Vec::Zero(entries.empty() ? 0 : static_cast<Eigen::Index>(entries.rbegin()->first));
  for (const auto& [c, x] : entries) v(static_cast<Eigen::Index>(c - 1)) = x;
  return v;
}

std::string format_vec(const Vec& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == 0) continue;
    if (!out.empty()) out += ",";
    out += shortest(v(i)) + "@" + std::to_string(i + 1);
  }
  return out;
}

double lp_norm(const Vec& v, double p) {
  if (std::isinf(p)) return norm_linf(v);
  if (p == 1.0) return norm_l1(v);
  // Scale by the max entry so tiny or huge entries do not under/overflow.
  const double m = norm_linf(v);
  if (m == 0) return 0;
  double s = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double phi(const Vec& v, const OrliczFn& m) {
  double s = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != 0) s += m(std::abs(v(i)));
  return s;
}

double luxemburg_norm(const Vec& v, const OrliczFn& m, double tol) {
  double lo = norm_linf(v);
  if (lo == 0) return 0;
  double hi = norm_l1(v);
  // M(1) = 1 forces Phi(v/lo) >= 1; convexity with M(0) = 0 gives M(t) <= t on
  // [0,1], hence Phi(v/hi) <= 1.
  if (phi(v / hi, m) > 1.0) throw std::domain_error("Orlicz function degenerate at the needed scale");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (phi(v / mid, m) <= 1.0 ? hi : lo) = mid;
  }
  return hi;
}

double Weights::at(std::uint64_t n) const {
  if (n == 0) throw std::invalid_argument("weights are indexed from 1");
  if (!values.empty()) {
    if (n > values.size()) throw std::out_of_range("explicit weight list too short");
    return values[n - 1];
  }
  return std::pow(static_cast<double>(n), 1.0 / p - 1.0);
}

SymNormSpec SymNormSpec::lp(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp needs p >= 1");
  SymNormSpec s;
  s.kind = std::isinf(p) ? Kind::Linf : Kind::Lp;
  s.p = p;
  return s;
}

SymNormSpec SymNormSpec::linf() {
  SymNormSpec s;
  s.kind = Kind::Linf;
  s.p = kInf;
  return s;
}

SymNormSpec SymNormSpec::orlicz(OrliczFn m) {
  SymNormSpec s;
  s.kind = Kind::Orlicz;
  s.m = std::move(m);
  return s;
}

SymNormSpec SymNormSpec::weak(double p, Rho rho) {
  if (!(p >= 1.0)) throw std::invalid_argument("weak-lp weights need p >= 1");
  if (rho.kind == Rho::Kind::Lp && !(rho.q >= 1.0)) throw std::invalid_argument("rho = lq needs q >= 1");
  SymNormSpec s;
  s.kind = Kind::Marcinkiewicz;
  s.weights.p = p;
  s.rho = rho;
  return s;
}

SymNormSpec SymNormSpec::parse(std::string_view text) {
  if (text == "linf") return linf();
  if (text.starts_with("lp:")) return lp(parse_double(std::string(text.substr(3))));
  if (text.starts_with("orlicz:")) return orlicz(OrliczFn::parse(text.substr(7)));
  if (text.starts_with("weak:")) return weak(parse_double(std::string(text.substr(5))));
  if (text.starts_with("marc:")) {
    auto parts = split(text.substr(5), ':');
    if (parts.size() < 2) throw std::invalid_argument("marc:<p>:<rho> expected");
    Rho rho;
    if (parts[1] == "l1" && parts.size() == 2) {
      rho.kind = Rho::Kind::L1;
    } else if (parts[1] == "linf" && parts.size() == 2) {
      rho.kind = Rho::Kind::Linf;
    } else if (parts[1] == "lp" && parts.size() == 3) {
      rho.kind = Rho::Kind::Lp;
      rho.q = parse_double(parts[2]);
    } else {
      throw std::invalid_argument("rho must be l1, linf or lp:<q>");
    }
    return weak(parse_double(parts[0]), rho);
  }
  throw std::invalid_argument("unknown space '" + std::string(text) + "'");
}

std::string SymNormSpec::to_string() const {
  switch (kind) {
    case Kind::Lp:
      return "lp:" + shortest(p);
    case Kind::Linf:
      return "linf";
    case Kind::Orlicz:
      return "orlicz:" + m.to_string();
    case Kind::Marcinkiewicz: {
      std::string r = rho.kind == Rho::Kind::L1 ? "l1" : rho.kind == Rho::Kind::Linf ? "linf" : "lp:" + shortest(rho.q);
      return "marc:" + shortest(weights.p) + ":" + r;
    }
  }
  return "?";
}

double rho_norm(const Vec& x, const Rho& rho) {
  switch (rho.kind) {
    case Rho::Kind::L1:
      return norm_l1(x);
    case Rho::Kind::Linf:
      return norm_linf(x);
    case Rho::Kind::Lp:
      return lp_norm(x, rho.q);
  }
  return 0;
}

double marcinkiewicz_norm(const Vec& v, const Weights& t, const Rho& rho) {
  const Vec a = rearrange(v);
  double best = 0, run = 0;
  for (Eigen::Index n = 0; n < a.size(); ++n) {
    double r = 0;
    switch (rho.kind) {
      case Rho::Kind::L1:
        r = (run += a(n));
        break;
      case Rho::Kind::Linf:
        r = a(0);
        break;
      case Rho::Kind::Lp:
        run += std::pow(a(n) / a(0), rho.q);
        r = a(0) * std::pow(run, 1.0 / rho.q);
        break;
    }
    best = std::max(best, t.at(static_cast<std::uint64_t>(n + 1)) * r);
  }
  return best;
}

double norm(const Vec& v, const SymNormSpec& spec) {
  switch (spec.kind) {
    case SymNormSpec::Kind::Lp:
      return lp_norm(v, spec.p);
    case SymNormSpec::Kind::Linf:
      return norm_linf(v);
    case SymNormSpec::Kind::Orlicz:
      return luxemburg_norm(v, spec.m);
    case SymNormSpec::Kind::Marcinkiewicz:
      return marcinkiewicz_norm(v, spec.weights, spec.rho);
  }
  return 0;
}

double fundamental(const SymNormSpec& spec, std::uint64_t n) {
  if (n == 0) return 0;
  const double dn = static_cast<double>(n);
  switch (spec.kind) {
    case SymNormSpec::Kind::Lp:
      return spec.p == 1.0 ? dn : std::pow(dn, 1.0 / spec.p);
    case SymNormSpec::Kind::Linf:
      return 1.0;
    case SymNormSpec::Kind::Orlicz:
      // Phi(1_n / rho) = n M(1/rho) = 1.
      return 1.0 / spec.m.inverse(1.0 / dn);
    case SymNormSpec::Kind::Marcinkiewicz: {
      // sup_{m<=n} t_m rho(1_m); the weak-lp weights give closed forms.
      if (spec.weights.values.empty()) {
        const double e = 1.0 / spec.weights.p - 1.0;
        const double r = spec.rho.kind == Rho::Kind::L1 ? 1.0 : spec.rho.kind == Rho::Kind::Linf ? 0.0 : 1.0 / spec.rho.q;
        // t_m rho(1_m) = m^{e + r}: increasing iff e + r >= 0.
        return e + r >= 0 ? (spec.rho.kind == Rho::Kind::L1 ? dn * spec.weights.at(n) : std::pow(dn, e + r)) : 1.0;
      }
      double best = 0;
      for (std::uint64_t m = 1; m <= n; ++m) {
        const double dm = static_cast<double>(m);
        const double r = spec.rho.kind == Rho::Kind::L1 ? dm : spec.rho.kind == Rho::Kind::Linf ? 1.0 : std::pow(dm, 1.0 / spec.rho.q);
        best = std::max(best, spec.weights.at(m) * r);
      }
      return best;
    }
  }
  return 0;
}

double dual_fundamental(const SymNormSpec& spec, std::uint64_t n) {
  return n == 0 ? 0.0 : static_cast<double>(n) / fundamental(spec, n);
}

double orlicz_dual_norm(const Vec& y, const OrliczFn& m) {
  const double ymax = norm_linf(y);
  if (ymax == 0) return 0;
  if (m.kind() == OrliczFn::Kind::Power && m.exponent() == 1.0) return ymax;
  auto objective = [&](double logk) {
    const double k = std::exp(logk);
    double s = 1.0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      if (y(i) != 0) s += m.conjugate(k * std::abs(y(i)));
    return s / k;
  };
  // (1 + G(k))/k with G convex, G(0) = 0 is unimodal in k: its derivative has
  // the sign of k G'(k) - G(k) - 1, a nondecreasing function.
  const double slope = m.asymptotic_slope();
  double hi = std::isfinite(slope) ? std::log(slope / ymax) : std::log(1.0 / ymax);
  double lo = hi - 1.0;
  if (!std::isfinite(slope)) {
    while (objective(hi + 1.0) < objective(hi)) hi += 1.0;
    hi += 1.0;
  }
  while (objective(lo - 1.0) <= objective(lo) && lo > hi - 200) lo -= 1.0;
  lo -= 1.0;
  if (!std::isfinite(objective(lo)) || !std::isfinite(objective(hi - 1e-12)))
    throw std::runtime_error("dual-norm minimization failed to bracket");
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = objective(d);
    }
  }
  return std::min({fc, fd, objective(0.5 * (a + b))});
}

double dual_norm(const Vec& y, const SymNormSpec& spec) {
  switch (spec.kind) {
    case SymNormSpec::Kind::Lp:
      return spec.p == 1.0 ? norm_linf(y) : lp_norm(y, spec.p / (spec.p - 1.0));
    case SymNormSpec::Kind::Linf:
      return norm_l1(y);
    case SymNormSpec::Kind::Orlicz:
      return orlicz_dual_norm(y, spec.m);
    case SymNormSpec::Kind::Marcinkiewicz:
      break;
  }
  throw std::invalid_argument("dual norm is not available for " + spec.to_string());
}

DeltaOfEps delta_of_eps(const SymNormSpec& spec, double xi, double eps, std::uint64_t horizon) {
  if (!(xi > 0) || !(eps > 0)) throw std::invalid_argument("xi and eps must be positive");
  const double target = 1.0 / eps;
  auto passes = [&](std::uint64_t n) { return dual_fundamental(spec, n) > target; };
  std::uint64_t hi = 1;
  while (!passes(hi)) {
    if (hi >= horizon) throw std::domain_error("dual fundamental function stays below 1/eps up to the horizon (l1-like space)");
    hi = std::min(hi * 2, horizon);
  }
  std::uint64_t lo = hi / 2;  // fails (or 0)
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    (passes(mid) ? hi : lo) = mid;
  }
  return {hi, xi / (4.0 * static_cast<double>(hi))};
}

bool verify_delta(const OrliczFn& m, double eta, unsigned n, double delta, int points) {
  const double span = std::log(1e12);
  const double bound = -static_cast<double>(n) * std::log(2.0);
  for (int i = 0; i < points; ++i) {
    const double t = delta * std::exp(-span * i / (points - 1));
    if (!(m.log_eval(eta * t) - m.log_eval(t) < bound)) return false;
  }
  return true;
}

std::vector<double> delta_sequence(const OrliczFn& m, double eta, unsigned count) {
  std::vector<double> out;
  unsigned j = 0;
  for (unsigned n = 1; n <= count; ++n) {
    bool found = false;
    for (++j; j <= 1400; ++j) {
      const double d = std::exp(-0.5 * j);
      if (verify_delta(m, eta, n, d)) {
        out.push_back(d);
        found = true;
        break;
      }
    }
    if (!found)
      throw DeltaSearchFailed("no delta_" + std::to_string(n) + " within floating range: M(eta t)/M(t) < 2^-" +
                                  std::to_string(n) + " fails near 0",
                              n);
  }
  return out;
}

ConditionOne condition_one_estimator(const OrliczFn& m, double eta) {
  ConditionOne r;
  r.monotone = true;
  for (int j = 1; j <= 40; ++j) {
    const double t = std::ldexp(1.0, -j);
    const double num = m(eta * t), den = m(t);
    // Direct quotient while both values are normal; log space once they underflow.
    const double ratio = num > 1e-300 && den > 1e-300 ? num / den : std::exp(m.log_eval(eta * t) - m.log_eval(t));
    if (!r.ratios.empty() && ratio > r.ratios.back() * (1 + 1e-12)) r.monotone = false;
    r.ratios.push_back(ratio);
  }
  r.last_ratio = r.ratios.back();
  // Still falling by orders of magnitude over the last 20 halvings: the limit is 0.
  r.limit_zero = r.ratios[39] < 1e-3 * r.ratios[19];
  r.bound = r.limit_zero ? 0.0 : *std::min_element(r.ratios.begin(), r.ratios.end());
  return r;
}

double StepMap::operator()(double a) const {
  auto it = std::lower_bound(boundaries.begin(), boundaries.end(), a);
  if (it == boundaries.begin() || it == boundaries.end()) throw std::out_of_range("point outside the binned range");
  return values[static_cast<std::size_t>(it - boundaries.begin())];
}

std::size_t StepMap::distinct_values(const std::vector<double>& a) const {
  std::set<double> s;
  for (double x : a) s.insert((*this)(x));
  return s.size();
}

StepMap discretize(const std::vector<double>& a, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  if (std::find(a.begin(), a.end(), 0.0) == a.end()) throw std::invalid_argument("A must contain 0");
  double r = 0;
  for (double x : a) r = std::max(r, std::abs(x));
  const double half = eps / 2.0;
  const auto l = static_cast<long long>(std::ceil(r / half));
  const std::set<double> in_a(a.begin(), a.end());
  StepMap h;
  h.boundaries.push_back(static_cast<double>(-l - 1) * half);
  h.values.push_back(0);  // unused slot: nothing lies at or below b_{-l-1}
  const double steps = static_cast<double>(a.size() + 2);
  for (long long k = -l; k <= l; ++k) {
    // b_k in [k eps/2, (k+1) eps/2) outside A: among |A| + 2 candidates one is free.
    double b = static_cast<double>(k) * half;
    for (int i = 0; in_a.contains(b); ++i) b = static_cast<double>(k) * half + half * (i + 1) / steps;
    h.boundaries.push_back(b);
    h.values.push_back(b);
  }
  // The bin of 0 maps to 0: every a in it is within one bin width of 0.
  auto zero_bin = static_cast<std::size_t>(std::lower_bound(h.boundaries.begin(), h.boundaries.end(), 0.0) -
                                           h.boundaries.begin());
  h.values[zero_bin] = 0;
  return h;
}

}  // namespace cbsets
