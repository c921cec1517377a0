#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cbsets {

struct OrdinalTerm;

/// An ordinal below epsilon_0 in Cantor normal form
///   w^e1*c1 + ... + w^ek*ck,  e1 > ... > ek,  ci >= 1.
/// The empty term list is 0. Values are immutable once built.
class Ordinal {
 public:
  Ordinal() = default;

  static Ordinal finite(std::uint64_t n);
  static Ordinal omega();
  /// w^exponent * coeff (coeff == 0 gives 0).
  static Ordinal omega_pow(const Ordinal& exponent, std::uint64_t coeff = 1);
  /// Builds from terms; throws std::invalid_argument unless the exponents are
  /// strictly decreasing and every coefficient is positive.
  static Ordinal from_terms(std::vector<OrdinalTerm> terms);

  const std::vector<OrdinalTerm>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_finite() const;
  bool is_successor() const;
  bool is_limit() const;
  /// Value of a finite ordinal; throws if infinite.
  std::uint64_t finite_value() const;

  /// this + 1
  Ordinal successor() const;
  /// Exact predecessor of a successor ordinal.
  Ordinal predecessor() const;

  friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);
  friend bool operator==(const Ordinal& a, const Ordinal& b);

 private:
  std::vector<OrdinalTerm> terms_;
};

struct OrdinalTerm {
  Ordinal exponent;
  std::uint64_t coeff = 1;
};

enum class OrdinalKind { Zero, Successor, Limit };

struct OrdinalClass {
  OrdinalKind kind = OrdinalKind::Zero;
  std::optional<Ordinal> predecessor;  // set iff kind == Successor
};

class OrdinalParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotALimit : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Text form:
//   sum  := term ("+" term)*
//   term := "w" ("^" atom)? ("*" nat)? | nat
//   atom := nat | "w" | "w^" atom | "(" sum ")"
Ordinal parse_cnf(std::string_view text);
std::string to_string(const Ordinal& a);

std::strong_ordering compare(const Ordinal& a, const Ordinal& b);
OrdinalClass classify(const Ordinal& a);

/// Canonical scheme: C(g + w^(d+1), m) = g + w^d*m, C(g + w^d, m) = g + w^C(d, m)
/// for limit d.
Ordinal canonical_fundamental(const Ordinal& beta, std::uint64_t m);

/// b(beta, n) = C(beta, n + 1), n >= 1.
Ordinal fund_seq(const Ordinal& beta, std::uint64_t n);

/// p(beta): predecessor on successors, fund_seq(beta, 1) on limits.
Ordinal pred_fn(const Ordinal& beta);

struct PIterationResult {
  bool found = false;
  std::uint64_t k = 0;  // steps taken (== cap on failure)
};

/// Least k <= cap with p^k(b(beta, n + 1)) == b(beta, n) + 1.
PIterationResult check_p_iteration(const Ordinal& beta, std::uint64_t n, std::uint64_t cap);

/// Ordinals built from up to `max_terms` terms with exponents drawn from
/// `exponents` and coefficients in [1, max_coeff], sorted ascending.
std::vector<Ordinal> cnf_universe(const std::vector<Ordinal>& exponents, std::size_t max_terms,
                                  std::uint64_t max_coeff);

/// The default exponent pool used by the property suites: finite values up to 4
/// and a handful of exponents up to w^3.
std::vector<Ordinal> default_exponent_pool();

}  // namespace cbsets
