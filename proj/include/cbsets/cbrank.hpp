#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbsets/family.hpp"
#include "cbsets/growth.hpp"
#include "cbsets/ordinal.hpp"

namespace cbsets {

/// Raised when a handle's answers contradict each other (e.g. ext_infinite(A)
/// holds but A u {b} fails for a large b).
struct OracleInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hereditary family K of finite sets, given as an oracle.
///
/// Two flavours:
///  - unbounded: `ground` is empty; "infinitely many b with A u {b} in K" is
///    answered by ext_infinite, or by probing one point beyond the horizon.
///  - truncated: `ground` lists the admissible elements; derivatives are the
///    truncated ones, where "infinitely many" means "the next ground element
///    past max(max A, horizon) still works".
struct FamilyHandle {
  std::function<bool(const FinSet&)> member;
  std::function<bool(const FinSet&)> ext_infinite;  // optional
  std::string description;
  std::uint64_t horizon = 64;
  std::vector<std::uint64_t> ground;  // ascending; empty = all of N

  bool truncated() const { return !ground.empty(); }
};

constexpr unsigned kDefaultDerivedCap = 8;
constexpr unsigned kMaxDerivedOrder = 64;

/// A^f_beta as a handle. Horizon 64 keeps probes past every rank that the
/// finite-order derivative code can ask about.
FamilyHandle af_handle(const GrowthFn& f, const Ordinal& beta, std::uint64_t horizon = 64);
inline FamilyHandle schreier_handle() { return af_handle(GrowthFn::identity(), Ordinal::finite(1)); }
/// Restriction of `h` to subsets of [1..n]; horizon defaults to the middle element.
FamilyHandle truncate(const FamilyHandle& h, std::uint64_t n);
/// Explicit finite family over [1..n]. Throws std::invalid_argument unless hereditary.
FamilyHandle explicit_handle(const std::vector<FinSet>& members, std::uint64_t n);
/// {E subset of ground above max S : S u E in K}; hereditary whenever K is.
FamilyHandle link(const FamilyHandle& h, const FinSet& s);

/// A in K^(k) for finite k <= kMaxDerivedOrder.
bool in_derived(const FamilyHandle& h, const FinSet& a, unsigned k);

/// K^(k) packaged as a handle of its own.
struct DerivedHandle {
  FamilyHandle base;
  unsigned order = 0;
  bool contains(const FinSet& a) const { return in_derived(base, a, order); }
  FamilyHandle as_handle() const;
};

struct RankResult {
  bool at_least_cap = false;
  unsigned rank = 0;  // meaningful when !at_least_cap
};

/// Largest r < cap with A in K^(r), or at_least_cap when A in K^(cap).
/// Throws std::invalid_argument if A is not in K.
RankResult rank_finite(const FamilyHandle& h, const FinSet& a, unsigned cap = kDefaultDerivedCap);

struct SplitPoint {
  std::uint64_t a = 0;
  FinSet prefix;  // A(<a)
};

/// First a in A with A(<a) in K^(gamma) but A(a) not; throws std::invalid_argument
/// when A is in K^(gamma) or the empty set is not. A itself need not lie in K.
SplitPoint split_point(const FamilyHandle& h, const FinSet& a, unsigned gamma);

struct ExtractionStep {
  std::string rule;  // "base", "next", "alpha", "alpha-slice", "trivial"
  unsigned depth = 0;
  std::uint64_t c = 0;
  unsigned m = 0;
  FinSet universe;  // candidate set left after the step
};

struct ExtractionResult {
  FinSet b;
  GrowthFn f;
  bool verified = false;
  std::uint64_t replayed = 0;  // number of sets A n B checked
  std::vector<ExtractionStep> transcript;
};

struct ExtractOptions {
  std::size_t min_size = 1;    // error if B ends up smaller
  std::size_t max_steps = 64;  // per recursion level
};

/// Desk-scale extraction for finite beta <= 3 over a truncated handle.
/// Throws std::invalid_argument on unsupported beta, a violated promise, or a
/// candidate set exhausted before B reaches min_size.
ExtractionResult extract(const FamilyHandle& k, const Ordinal& beta, const FinSet& c, const ExtractOptions& opt = {});
ExtractionResult extract(const std::vector<FinSet>& k_members, std::uint64_t n, const Ordinal& beta, const FinSet& c,
                         const ExtractOptions& opt = {});

}  // namespace cbsets
