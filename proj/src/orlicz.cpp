#include "cbsets/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cbsets {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kInvE = std::exp(-1.0);

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

}  // namespace

double log_square_scale() { return 1.0 / (2.0 - kInvE); }

OrliczFn OrliczFn::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("power Orlicz function needs p >= 1");
  OrliczFn m;
  m.kind_ = Kind::Power;
  m.p_ = p;
  return m;
}

OrliczFn OrliczFn::log_square() {
  OrliczFn m;
  m.kind_ = Kind::LogSquare;
  m.p_ = 0;
  return m;
}

OrliczFn OrliczFn::custom(std::vector<std::pair<double, double>> knots) {
  std::sort(knots.begin(), knots.end());
  if (knots.empty() || knots.front().first != 0.0) knots.insert(knots.begin(), {0.0, 0.0});
  if (knots.front().second != 0.0) throw std::invalid_argument("custom Orlicz function must vanish at 0");
  if (knots.size() < 2) throw std::invalid_argument("custom Orlicz function needs a knot beyond 0");
  double last_slope = 0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double dt = knots[i].first - knots[i - 1].first;
    if (!(dt > 0)) throw std::invalid_argument("custom Orlicz knots must be distinct");
    const double slope = (knots[i].second - knots[i - 1].second) / dt;
    if (slope < last_slope - 1e-15) throw std::invalid_argument("custom Orlicz function must be convex");
    if (i == 1 && !(slope > 0)) throw std::invalid_argument("custom Orlicz function must be nondegenerate");
    last_slope = slope;
  }
  OrliczFn m;
  m.kind_ = Kind::Custom;
  m.p_ = 0;
  m.knots_ = std::move(knots);
  if (std::abs(m(1.0) - 1.0) > 1e-12) throw std::invalid_argument("custom Orlicz function must satisfy M(1) = 1");
  return m;
}

OrliczFn OrliczFn::parse(std::string_view text) {
  if (text == "logsq") return log_square();
  if (text.starts_with("pow:")) return power(to_double(std::string(text.substr(4))));
  if (text.starts_with("custom:")) {
    std::vector<std::pair<double, double>> knots;
    for (const auto& item : split(text.substr(7), ',')) {
      auto tv = split(item, ':');
      if (tv.size() != 2) throw std::invalid_argument("custom knot must be t:v");
      knots.emplace_back(to_double(tv[0]), to_double(tv[1]));
    }
    return custom(std::move(knots));
  }
  throw std::invalid_argument("unknown Orlicz function '" + std::string(text) + "'");
}

double OrliczFn::operator()(double t) const {
  if (t < 0) throw std::domain_error("Orlicz functions take t >= 0");
  if (t == 0) return 0;
  switch (kind_) {
    case Kind::Power:
      return p_ == 1.0 ? t : (p_ == 2.0 ? t * t : std::pow(t, p_));
    case Kind::LogSquare: {
      const double c = log_square_scale();
      if (t >= kInvE) return c * (2.0 * t - kInvE);
      const double u = std::log(1.0 / t);
      return c * std::exp(-u * u);
    }
    case Kind::Custom: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), t, [](double x, const auto& k) { return x < k.first; });
      const auto& hi = it == knots_.end() ? knots_.back() : *it;
      const auto& lo = it == knots_.end() ? knots_[knots_.size() - 2] : *(it - 1);
      const double slope = (hi.second - lo.second) / (hi.first - lo.first);
      return lo.second + slope * (t - lo.first);
    }
  }
  return 0;
}

double OrliczFn::log_eval(double t) const {
  if (t <= 0) return -kInf;
  switch (kind_) {
    case Kind::Power:
      return p_ * std::log(t);
    case Kind::LogSquare: {
      if (t >= kInvE) return std::log((*this)(t));
      const double u = std::log(1.0 / t);
      return std::log(log_square_scale()) - u * u;
    }
    case Kind::Custom:
      return std::log((*this)(t));
  }
  return 0;
}

double OrliczFn::log_eval_at_log(double log_t) const {
  if (log_t > -600.0) return log_eval(std::exp(log_t));
  switch (kind_) {
    case Kind::Power:
      return p_ * log_t;
    case Kind::LogSquare:
      return std::log(log_square_scale()) - log_t * log_t;
    case Kind::Custom:
      // Linear near 0: M(t) = slope * t.
      return std::log(derivative(0.0)) + log_t;
  }
  return 0;
}

double OrliczFn::derivative(double t) const {
  switch (kind_) {
    case Kind::Power:
      if (t <= 0) return p_ == 1.0 ? 1.0 : 0.0;
      return p_ * std::pow(t, p_ - 1.0);
    case Kind::LogSquare: {
      const double c = log_square_scale();
      if (t <= 0) return 0;
      if (t >= kInvE) return 2.0 * c;
      const double u = std::log(1.0 / t);
      return c * std::exp(-u * u) * 2.0 * u / t;
    }
    case Kind::Custom: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), t, [](double x, const auto& k) { return x < k.first; });
      const auto& hi = it == knots_.end() ? knots_.back() : *it;
      const auto& lo = it == knots_.end() ? knots_[knots_.size() - 2] : *(it - 1);
      return (hi.second - lo.second) / (hi.first - lo.first);
    }
  }
  return 0;
}

double OrliczFn::inverse(double y) const {
  if (y < 0) throw std::domain_error("inverse of a negative value");
  if (y == 0) return 0;
  switch (kind_) {
    case Kind::Power:
      return p_ == 1.0 ? y : (p_ == 2.0 ? std::sqrt(y) : std::pow(y, 1.0 / p_));
    case Kind::LogSquare: {
      const double c = log_square_scale();
      if (y >= c * kInvE) return (y / c + kInvE) / 2.0;
      return std::exp(-std::sqrt(std::log(c / y)));
    }
    case Kind::Custom: {
      for (std::size_t i = 1; i < knots_.size(); ++i)
        if (knots_[i].second >= y || i + 1 == knots_.size()) {
          const auto& lo = knots_[i - 1];
          const auto& hi = knots_[i];
          return lo.first + (y - lo.second) * (hi.first - lo.first) / (hi.second - lo.second);
        }
      break;
    }
  }
  return 0;
}

double OrliczFn::asymptotic_slope() const {
  switch (kind_) {
    case Kind::Power:
      return p_ == 1.0 ? 1.0 : kInf;
    case Kind::LogSquare:
      return 2.0 * log_square_scale();
    case Kind::Custom:
      return derivative(knots_.back().first + 1.0);
  }
  return kInf;
}

double OrliczFn::conjugate(double s) const {
  if (s < 0) throw std::domain_error("conjugate evaluated at s < 0");
  if (s == 0) return 0;
  switch (kind_) {
    case Kind::Power: {
      if (p_ == 1.0) return s <= 1.0 ? 0.0 : kInf;
      // sup_t s t - t^p at t = (s/p)^{1/(p-1)}: value (p-1) (s/p)^{p/(p-1)}
      return (p_ - 1.0) * std::pow(s / p_, p_ / (p_ - 1.0));
    }
    case Kind::LogSquare: {
      const double slope = asymptotic_slope();
      if (s > slope) return kInf;
      // M' increases from 0 to 2c on (0, 1/e]; the maximizer solves M'(t) = s.
      // With u = ln(1/t): ln M' = ln(2c) + ln u + u - u^2, decreasing for u >= 1.
      // Safeguarded Newton on g(u) = ln u + u - u^2 - ln(s/2c).
      const double target = std::log(s / slope);
      auto g = [&](double u) { return std::log(u) + u - u * u - target; };
      double lo = 1.0, hi = 2.0;
      while (g(hi) > 0) lo = hi, hi *= 2.0;
      double u = 0.5 * (lo + hi);
      for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
        const double gu = g(u);
        if (gu == 0) break;
        (gu > 0 ? lo : hi) = u;
        const double next = u - gu / (1.0 / u + 1.0 - 2.0 * u);
        u = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
      }
      const double t = std::exp(-u);
      return std::max(0.0, s * t - (*this)(t));
    }
    case Kind::Custom: {
      if (s > asymptotic_slope()) return kInf;
      double best = 0;
      for (const auto& [t, v] : knots_) best = std::max(best, s * t - v);
      return best;
    }
  }
  return kInf;
}

bool OrliczFn::check_shape(int points) const {
  if ((*this)(0.0) != 0.0 || std::abs((*this)(1.0) - 1.0) > 1e-12) return false;
  const double h = 1.0 / points;
  double prev = 0, prev_slope = -kInf;
  for (int i = 1; i <= points; ++i) {
    const double v = (*this)(i * h);
    if (v < prev || !(v > 0)) return false;
    const double slope = (v - prev) / h;
    if (slope < prev_slope - 1e-9 * std::max(1.0, std::abs(prev_slope))) return false;
    prev = v;
    prev_slope = slope;
  }
  return true;
}

std::string OrliczFn::to_string() const {
  switch (kind_) {
    case Kind::Power: {
      std::string p = std::to_string(p_);
      p.erase(p.find_last_not_of('0') + 1);
      if (p.back() == '.') p.pop_back();
      return "pow:" + p;
    }
    case Kind::LogSquare:
      return "logsq";
    case Kind::Custom: {
      std::string out = "custom:";
      for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (i > 1) out += ",";
        out += std::to_string(knots_[i].first) + ":" + std::to_string(knots_[i].second);
      }
      return out;
    }
  }
  return "?";
}

}  // namespace cbsets
