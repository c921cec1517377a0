#include "cbsets/ordinal.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace cbsets {

Ordinal Ordinal::finite(std::uint64_t n) {
  Ordinal r;
  if (n > 0) r.terms_.push_back({Ordinal{}, n});
  return r;
}

Ordinal Ordinal::omega() { return omega_pow(finite(1)); }

Ordinal Ordinal::omega_pow(const Ordinal& exponent, std::uint64_t coeff) {
  Ordinal r;
  if (coeff > 0) r.terms_.push_back({exponent, coeff});
  return r;
}

Ordinal Ordinal::from_terms(std::vector<OrdinalTerm> terms) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff == 0) throw std::invalid_argument("zero coefficient in CNF");
    if (i > 0 && !(terms[i].exponent < terms[i - 1].exponent))
      throw std::invalid_argument("CNF exponents must strictly decrease");
  }
  Ordinal r;
  r.terms_ = std::move(terms);
  return r;
}

bool Ordinal::is_finite() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero()); }

bool Ordinal::is_successor() const { return !terms_.empty() && terms_.back().exponent.is_zero(); }

bool Ordinal::is_limit() const { return !terms_.empty() && !terms_.back().exponent.is_zero(); }

std::uint64_t Ordinal::finite_value() const {
  if (!is_finite()) throw std::domain_error("ordinal is infinite");
  return terms_.empty() ? 0 : terms_[0].coeff;
}

Ordinal Ordinal::successor() const {
  Ordinal r = *this;
  if (is_successor()) {
    if (r.terms_.back().coeff == std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("finite coefficient overflow");
    ++r.terms_.back().coeff;
  } else {
    r.terms_.push_back({Ordinal{}, 1});
  }
  return r;
}

Ordinal Ordinal::predecessor() const {
  if (!is_successor()) throw std::domain_error("predecessor of a non-successor");
  Ordinal r = *this;
  if (--r.terms_.back().coeff == 0) r.terms_.pop_back();
  return r;
}

Ordinal operator+(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  const Ordinal& lead = b.terms_.front().exponent;
  Ordinal r;
  for (const auto& t : a.terms_) {
    if (t.exponent < lead) break;
    r.terms_.push_back(t);
  }
  std::size_t i = 0;
  if (!r.terms_.empty() && r.terms_.back().exponent == lead) {
    r.terms_.back().coeff += b.terms_.front().coeff;
    i = 1;
  }
  for (; i < b.terms_.size(); ++i) r.terms_.push_back(b.terms_[i]);
  return r;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.terms_[i].exponent <=> b.terms_[i].exponent; c != 0) return c;
    if (auto c = a.terms_[i].coeff <=> b.terms_[i].coeff; c != 0) return c;
  }
  return a.terms_.size() <=> b.terms_.size();
}

bool operator==(const Ordinal& a, const Ordinal& b) { return (a <=> b) == 0; }

std::strong_ordering compare(const Ordinal& a, const Ordinal& b) { return a <=> b; }

OrdinalClass classify(const Ordinal& a) {
  if (a.is_zero()) return {OrdinalKind::Zero, std::nullopt};
  if (a.is_successor()) return {OrdinalKind::Successor, a.predecessor()};
  return {OrdinalKind::Limit, std::nullopt};
}

// ---------------------------------------------------------------------------
// Text form

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Ordinal parse_all() {
    Ordinal r = sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return r;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw OrdinalParseError(what + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool peek_digit() {
    skip_ws();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  std::uint64_t nat() {
    if (!peek_digit()) fail("expected a natural number");
    std::uint64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      const std::uint64_t d = static_cast<std::uint64_t>(s_[pos_] - '0');
      if (v > (std::numeric_limits<std::uint64_t>::max() - d) / 10) fail("natural number overflow");
      v = v * 10 + d;
      ++pos_;
    }
    return v;
  }

  Ordinal atom() {
    if (peek_digit()) return Ordinal::finite(nat());
    if (accept('(')) {
      Ordinal r = sum();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (accept('w')) {
      if (accept('^')) return Ordinal::omega_pow(atom());
      return Ordinal::omega();
    }
    fail("expected an exponent");
  }

  // One summand; returns it as a single (exponent, coeff) pair.
  OrdinalTerm term() {
    if (peek_digit()) {
      const std::uint64_t n = nat();
      return {Ordinal{}, n};
    }
    if (!accept('w')) fail("expected 'w' or a natural number");
    OrdinalTerm t{Ordinal::finite(1), 1};
    if (accept('^')) t.exponent = atom();
    if (accept('*')) t.coeff = nat();
    return t;
  }

  Ordinal sum() {
    std::vector<OrdinalTerm> terms;
    bool lone_zero = false;
    std::size_t count = 0;
    do {
      OrdinalTerm t = term();
      ++count;
      if (t.coeff == 0) {
        if (t.exponent.is_zero() && count == 1) {
          lone_zero = true;
          continue;
        }
        fail("zero coefficient");
      }
      if (!terms.empty() && !(t.exponent < terms.back().exponent)) fail("exponents must strictly decrease");
      terms.push_back(std::move(t));
    } while (accept('+'));
    if (lone_zero && count > 1) fail("zero coefficient");
    return Ordinal::from_terms(std::move(terms));
  }
};

std::string atom_string(const Ordinal& e) {
  if (e.is_finite()) return std::to_string(e.finite_value());
  const auto& ts = e.terms();
  if (ts.size() == 1 && ts[0].coeff == 1) {
    if (ts[0].exponent == Ordinal::finite(1)) return "w";
    return "w^" + atom_string(ts[0].exponent);
  }
  return "(" + to_string(e) + ")";
}

}  // namespace

Ordinal parse_cnf(std::string_view text) { return Parser(text).parse_all(); }

std::string to_string(const Ordinal& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (const auto& t : a.terms()) {
    if (!out.empty()) out += "+";
    if (t.exponent.is_zero()) {
      out += std::to_string(t.coeff);
      continue;
    }
    out += "w";
    if (!(t.exponent == Ordinal::finite(1))) out += "^" + atom_string(t.exponent);
    if (t.coeff != 1) out += "*" + std::to_string(t.coeff);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fundamental sequences

Ordinal canonical_fundamental(const Ordinal& beta, std::uint64_t m) {
  if (!beta.is_limit()) throw NotALimit("fundamental sequence of non-limit " + to_string(beta));
  std::vector<OrdinalTerm> prefix(beta.terms().begin(), beta.terms().end() - 1);
  const OrdinalTerm& last = beta.terms().back();
  if (last.coeff > 1) prefix.push_back({last.exponent, last.coeff - 1});
  Ordinal base = Ordinal::from_terms(std::move(prefix));
  if (last.exponent.is_successor()) return base + Ordinal::omega_pow(last.exponent.predecessor(), m);
  return base + Ordinal::omega_pow(canonical_fundamental(last.exponent, m));
}

Ordinal fund_seq(const Ordinal& beta, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("fund_seq index is 1-based");
  if (n == std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("fund_seq index overflow");
  return canonical_fundamental(beta, n + 1);
}

Ordinal pred_fn(const Ordinal& beta) {
  if (beta.is_zero()) throw std::domain_error("p(0) is undefined");
  if (beta.is_successor()) return beta.predecessor();
  return fund_seq(beta, 1);
}

PIterationResult check_p_iteration(const Ordinal& beta, std::uint64_t n, std::uint64_t cap) {
  const Ordinal target = fund_seq(beta, n).successor();
  Ordinal x = fund_seq(beta, n + 1);
  for (std::uint64_t k = 0; k <= cap; ++k) {
    if (x == target) return {true, k};
    if (x < target || x.is_zero() || k == cap) return {false, k};
    x = pred_fn(x);
  }
  return {false, cap};
}

std::vector<Ordinal> default_exponent_pool() {
  std::vector<Ordinal> pool;
  for (const char* s : {"0", "1", "2", "3", "4", "w", "w+1", "w+2", "w*2", "w*2+1", "w^2", "w^2+1", "w^2+w", "w^3"})
    pool.push_back(parse_cnf(s));
  return pool;
}

std::vector<Ordinal> cnf_universe(const std::vector<Ordinal>& exponents, std::size_t max_terms,
                                  std::uint64_t max_coeff) {
  std::vector<Ordinal> sorted = exponents;
  std::sort(sorted.begin(), sorted.end(), [](const Ordinal& a, const Ordinal& b) { return b < a; });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<Ordinal> out{Ordinal{}};
  std::vector<OrdinalTerm> current;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (current.size() == max_terms) return;
    for (std::size_t i = from; i < sorted.size(); ++i) {
      for (std::uint64_t c = 1; c <= max_coeff; ++c) {
        current.push_back({sorted[i], c});
        out.push_back(Ordinal::from_terms(current));
        self(self, i + 1);
        current.pop_back();
      }
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cbsets
