#include "cbsets/growth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace cbsets {

FinSet::FinSet(std::initializer_list<std::uint64_t> elems) : FinSet(from_sorted(std::vector<std::uint64_t>(elems))) {}

FinSet FinSet::from_sorted(std::vector<std::uint64_t> elems) {
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (elems[i] == 0) throw std::invalid_argument("set elements must be >= 1");
    if (i > 0 && elems[i] <= elems[i - 1]) throw std::invalid_argument("set elements must strictly increase");
  }
  FinSet s;
  s.elems_ = std::move(elems);
  return s;
}

FinSet FinSet::from_unsorted(std::vector<std::uint64_t> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return from_sorted(std::move(elems));
}

FinSet FinSet::from_mask(std::uint64_t mask) {
  FinSet s;
  for (std::uint64_t i = 0; i < 64; ++i)
    if (mask >> i & 1U) s.elems_.push_back(i + 1);
  return s;
}

FinSet FinSet::parse(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == ' ') ++pos;
  if (pos == text.size()) return {};
  while (true) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
    if (ec != std::errc{}) throw std::invalid_argument("bad set literal: " + std::string(text));
    out.push_back(v);
    pos = static_cast<std::size_t>(ptr - text.data());
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos == text.size()) break;
    if (text[pos] != ',') throw std::invalid_argument("bad set literal: " + std::string(text));
    ++pos;
  }
  return from_sorted(std::move(out));
}

std::uint64_t FinSet::min() const {
  if (elems_.empty()) throw std::domain_error("min of empty set");
  return elems_.front();
}

std::uint64_t FinSet::max() const {
  if (elems_.empty()) throw std::domain_error("max of empty set");
  return elems_.back();
}

bool FinSet::contains(std::uint64_t x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

FinSet FinSet::below(std::uint64_t a) const {
  FinSet s;
  s.elems_.assign(elems_.begin(), std::lower_bound(elems_.begin(), elems_.end(), a));
  return s;
}

FinSet FinSet::upto(std::uint64_t a) const {
  FinSet s;
  s.elems_.assign(elems_.begin(), std::upper_bound(elems_.begin(), elems_.end(), a));
  return s;
}

FinSet FinSet::above(std::uint64_t a) const {
  FinSet s;
  s.elems_.assign(std::upper_bound(elems_.begin(), elems_.end(), a), elems_.end());
  return s;
}

FinSet FinSet::slice(std::size_t first, std::size_t count) const {
  FinSet s;
  s.elems_.assign(elems_.begin() + static_cast<std::ptrdiff_t>(first),
                  elems_.begin() + static_cast<std::ptrdiff_t>(first + count));
  return s;
}

FinSet FinSet::with(std::uint64_t x) const {
  if (x == 0) throw std::invalid_argument("set elements must be >= 1");
  FinSet s = *this;
  auto it = std::lower_bound(s.elems_.begin(), s.elems_.end(), x);
  if (it == s.elems_.end() || *it != x) s.elems_.insert(it, x);
  return s;
}

FinSet FinSet::without(std::uint64_t x) const {
  FinSet s = *this;
  auto it = std::lower_bound(s.elems_.begin(), s.elems_.end(), x);
  if (it != s.elems_.end() && *it == x) s.elems_.erase(it);
  return s;
}

bool FinSet::subset_of(const FinSet& other) const {
  return std::includes(other.elems_.begin(), other.elems_.end(), elems_.begin(), elems_.end());
}

FinSet FinSet::intersect(const FinSet& other) const {
  FinSet s;
  std::set_intersection(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(),
                        std::back_inserter(s.elems_));
  return s;
}

FinSet FinSet::unite(const FinSet& other) const {
  FinSet s;
  std::set_union(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end(), std::back_inserter(s.elems_));
  return s;
}

std::uint64_t FinSet::mask() const {
  std::uint64_t m = 0;
  for (auto x : elems_) {
    if (x > 64) throw std::domain_error("mask needs elements <= 64");
    m |= std::uint64_t{1} << (x - 1);
  }
  return m;
}

std::string to_string(const FinSet& a) {
  std::string out;
  for (auto x : a.elems()) {
    if (!out.empty()) out += ',';
    out += std::to_string(x);
  }
  return out;
}

std::string set_key(const FinSet& a) {
  std::string out;
  out.reserve(a.size() * sizeof(std::uint64_t));
  for (auto x : a.elems()) out.append(reinterpret_cast<const char*>(&x), sizeof x);
  return out;
}

bool precedes(const FinSet& a, const FinSet& b) { return a.empty() || b.empty() || a.max() < b.min(); }

// ---------------------------------------------------------------------------

namespace {

std::uint64_t saturate(long double v) {
  if (v >= static_cast<long double>(GrowthFn::kSaturation)) return GrowthFn::kSaturation;
  return static_cast<std::uint64_t>(v);
}

std::uint64_t affine_at(const GrowthFn::Affine& a, std::uint64_t k) {
  return saturate(static_cast<long double>(a.slope) * static_cast<long double>(k) + static_cast<long double>(a.offset));
}

void validate_affine(const GrowthFn::Affine& a, std::uint64_t first_k) {
  if (a.slope < 1) throw std::invalid_argument("affine growth needs slope >= 1");
  if (static_cast<long double>(a.slope) * first_k + a.offset < 1)
    throw std::invalid_argument("growth function values must be >= 1");
}

std::uint64_t parse_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("bad integer: " + std::string(s));
  return v;
}

std::int64_t parse_i64(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("bad integer: " + std::string(s));
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

GrowthFn::GrowthFn(Spec spec) : spec_(std::move(spec)) {
  if (auto* a = std::get_if<Affine>(&spec_)) validate_affine(*a, 1);
  if (auto* p = std::get_if<PowBase>(&spec_); p && p->base < 2)
    throw std::invalid_argument("power growth needs base >= 2");
  if (auto* t = std::get_if<Table>(&spec_)) {
    validate_affine(t->tail, t->prefix.size() + 1);
    for (std::size_t i = 0; i < t->prefix.size(); ++i) {
      if (t->prefix[i] < 1) throw std::invalid_argument("growth function values must be >= 1");
      if (i > 0 && t->prefix[i] <= t->prefix[i - 1]) throw std::invalid_argument("growth table must strictly increase");
    }
    if (!t->prefix.empty() && affine_at(t->tail, t->prefix.size() + 1) <= t->prefix.back())
      throw std::invalid_argument("growth table tail must continue increasing");
  }
}

GrowthFn GrowthFn::parse(std::string_view text) {
  if (text == "id") return identity();
  if (text.starts_with("pow:")) return pow(parse_u64(text.substr(4)));
  if (text.starts_with("pow") && text.size() > 3) return pow(parse_u64(text.substr(3)));
  if (text.size() > 2 && text.ends_with("^k")) return pow(parse_u64(text.substr(0, text.size() - 2)));
  if (text.starts_with("affine:")) {
    auto parts = split(text.substr(7), ':');
    if (parts.size() != 2) throw std::invalid_argument("affine:a:b expected");
    return affine(parse_u64(parts[0]), parse_i64(parts[1]));
  }
  if (text.starts_with("table:")) {
    auto parts = split(text.substr(6), ':');
    if (parts.size() != 3) throw std::invalid_argument("table:v1,v2,...:a:b expected");
    std::vector<std::uint64_t> prefix;
    if (!parts[0].empty())
      for (auto v : split(parts[0], ',')) prefix.push_back(parse_u64(v));
    return table(std::move(prefix), Affine{parse_u64(parts[1]), parse_i64(parts[2])});
  }
  if (auto k = text.find('k'); k != std::string_view::npos && k > 0) {
    const std::uint64_t slope = parse_u64(text.substr(0, k));
    std::int64_t offset = 0;
    if (k + 1 < text.size()) {
      auto rest = text.substr(k + 1);
      if (rest.front() == '+') rest.remove_prefix(1);
      offset = parse_i64(rest);
    }
    return affine(slope, offset);
  }
  throw std::invalid_argument("unknown growth function: " + std::string(text));
}

std::uint64_t GrowthFn::operator()(std::uint64_t k) const {
  if (k == 0) throw std::invalid_argument("growth functions are defined on k >= 1");
  return std::visit(
      [k](const auto& s) -> std::uint64_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return std::min(k, kSaturation);
        } else if constexpr (std::is_same_v<T, Affine>) {
          return affine_at(s, k);
        } else if constexpr (std::is_same_v<T, PowBase>) {
          long double v = 1;
          for (std::uint64_t i = 0; i < k; ++i) {
            v *= static_cast<long double>(s.base);
            if (v >= static_cast<long double>(kSaturation)) return kSaturation;
          }
          return saturate(v);
        } else {
          if (k <= s.prefix.size()) return s.prefix[k - 1];
          return affine_at(s.tail, k);
        }
      },
      spec_);
}

double GrowthFn::log_value(std::uint64_t k) const {
  if (const auto* p = std::get_if<PowBase>(&spec_)) return static_cast<double>(k) * std::log(static_cast<double>(p->base));
  return std::log(static_cast<double>((*this)(k)));
}

std::string to_string(const GrowthFn& f) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GrowthFn::Identity>) {
          return "id";
        } else if constexpr (std::is_same_v<T, GrowthFn::Affine>) {
          return "affine:" + std::to_string(s.slope) + ":" + std::to_string(s.offset);
        } else if constexpr (std::is_same_v<T, GrowthFn::PowBase>) {
          return "pow" + std::to_string(s.base);
        } else {
          std::string out = "table:";
          for (std::size_t i = 0; i < s.prefix.size(); ++i) out += (i ? "," : "") + std::to_string(s.prefix[i]);
          return out + ":" + std::to_string(s.tail.slope) + ":" + std::to_string(s.tail.offset);
        }
      },
      f.spec());
}

GrowthFn pointwise_max(const std::vector<GrowthFn>& fns, std::uint64_t horizon) {
  if (fns.empty()) return GrowthFn::identity();
  std::uint64_t slope = 1;
  for (const auto& f : fns) {
    if (std::holds_alternative<GrowthFn::PowBase>(f.spec()))
      throw std::invalid_argument("pointwise_max supports affine-tailed growth functions only");
    if (const auto* a = std::get_if<GrowthFn::Affine>(&f.spec())) slope = std::max(slope, a->slope);
    if (const auto* t = std::get_if<GrowthFn::Table>(&f.spec())) {
      slope = std::max(slope, t->tail.slope);
      horizon = std::max<std::uint64_t>(horizon, t->prefix.size());
    }
  }
  std::vector<std::uint64_t> prefix;
  for (std::uint64_t k = 1; k <= horizon; ++k) {
    std::uint64_t v = 0;
    for (const auto& f : fns) v = std::max(v, f(k));
    if (!prefix.empty()) v = std::max(v, prefix.back() + 1);
    prefix.push_back(v);
  }
  // Tail: slope * k + offset must dominate every input beyond the horizon and
  // exceed the last prefix value. Inputs are affine past their prefixes, so
  // checking the first tail point against each input's own slope suffices.
  std::int64_t offset = 0;
  const std::uint64_t k0 = horizon + 1;
  long double need = prefix.empty() ? 1.0L : static_cast<long double>(prefix.back()) + 1.0L;
  for (const auto& f : fns) need = std::max<long double>(need, static_cast<long double>(f(k0)));
  offset = static_cast<std::int64_t>(std::ceil(need - static_cast<long double>(slope) * k0));
  return GrowthFn::table(std::move(prefix), GrowthFn::Affine{slope, offset});
}

}  // namespace cbsets
