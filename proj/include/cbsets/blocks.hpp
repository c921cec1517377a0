#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cbsets/growth.hpp"
#include "cbsets/orlicz.hpp"
#include "cbsets/ordinal.hpp"
#include "cbsets/seqspace.hpp"

namespace cbsets {

/// Outcome of the two growth conditions
///   (fi) sum_{i>=m} 1/f(i)^2 <= 2/f(m)^2      (fm) f(m)/f(m+1)^2 <= 1/4.
struct GrowthReport {
  bool fi = true;
  bool fm = true;
  std::optional<std::uint64_t> fi_first_failure;
  std::optional<std::uint64_t> fm_first_failure;
  std::string method;  // "symbolic" or "numeric"
};

/// PowBase is decided in closed form; everything else is checked for m up to
/// `upto` with the (fi) tail past the checked range bounded by an integral.
GrowthReport check_growth(const GrowthFn& f, std::uint64_t upto = 400);

/// Scalar levels t_j = base^{-j}, j >= 1.
struct Scale {
  double base = 10.0;
  double log_t(std::int64_t j) const;
  /// "dec10" or "dec:<base>".
  static Scale parse(std::string_view text);
  std::string to_string() const;
};

/// Ground set {first + step * i : i >= 0}.
struct GroundSet {
  std::uint64_t first = 2;
  std::uint64_t step = 2;
  std::uint64_t at(std::uint64_t index) const { return first + step * index; }
  /// Least index whose element is >= x.
  std::uint64_t index_at_or_after(std::uint64_t x) const;
  /// "even", "odd", "all", "ap:<first>:<step>".
  static GroundSet parse(std::string_view text);
  std::string to_string() const;
};

struct BlockQuadruple {
  GrowthFn f = GrowthFn::pow(4);
  OrliczFn m = OrliczFn::power(2.0);
  Scale s;
  GroundSet b;
  /// Coordinates above this bound are not materialized.
  std::uint64_t window = std::uint64_t{1} << 16;
};

class BlockInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decomposition record. Sizes and masses are natural logs: children of deep
/// blocks have sizes far below the double range.
struct BlockNode {
  Ordinal level;      // as requested
  Ordinal effective;  // after limit levels are resolved
  double log_size = 0;
  std::uint64_t min_supp = 0;
  // internal nodes
  double log_p = 0;
  std::uint64_t p = 0;  // 0 when p exceeds 2^62
  // leaves: t = base^{-t_exp}, |C| = count
  std::int64_t t_exp = 0;
  double count = 0;
  std::uint64_t materialized = 0;  // leaf coordinates inside the window
  bool complete = false;           // whole support inside the window
  double log_mass = 0;             // ln Phi(x), valid when complete
  std::vector<BlockNode> children;
  bool is_leaf() const { return effective.is_zero(); }
};

struct Block {
  Ordinal beta;
  double log_size = 0;
  std::uint64_t start = 0;
  BlockNode tree;
  /// Materialized support (increasing) and ln of the value there.
  std::vector<std::uint64_t> coords;
  std::vector<double> log_values;
  bool complete = false;
  std::uint64_t window = 0;

  std::uint64_t min_supp() const { return tree.min_supp; }
  /// Largest support element; only when complete.
  std::uint64_t max_supp() const;
  /// ln Phi(c x) over the materialized support.
  double log_phi_scaled(const OrliczFn& m, double c) const;
  /// The materialized part as a vector (values may underflow to 0).
  Vec to_vec() const;
};

/// Leaf t chi_C with t = base^{-t_exp} and |C| = round(3a / (4 M(t))), which
/// lands in [a/2, a] whenever M(t) <= a/2.
Block build_leaf(const BlockQuadruple& q, double a, std::int64_t t_exp, std::uint64_t start);

/// Level-beta block of size a whose support starts at the first element of B
/// that is >= start. Leaves use the largest t in S with M(t) <= a'/2. Internal
/// nodes have p = f(min supp)^2 children of size a/p.
Block build_block(const BlockQuadruple& q, const Ordinal& beta, double a, std::uint64_t start);

struct PhiBound {
  double lhs = 0, rhs = 0;
  double log_lhs = 0, log_rhs = 0;
  bool ok = false;
};

/// Phi(x chi_A) against 2 a f(min A) / f(min supp x)^2.
/// Throws std::invalid_argument if A is not in A^f_beta, min A >= min supp x,
/// or A reaches past the window of an incomplete block.
PhiBound phi_bound_check(const Block& x, const FinSet& a, const BlockQuadruple& q);

struct WitnessReport {
  bool precondition = false;  // M(eta t/2)/M(t) bounded below on S
  std::string reason;
  double theta = 0;
  std::uint64_t j = 0;
  std::size_t complete_blocks = 0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  double max_restricted_phi = 0;  // max over samples of Phi((1/2 sum x_k) chi_A)
  std::optional<FinSet> first_violation;
  double sum_lower = 0;    // lower bound for sum Phi(eta x_k / 2)
  double sum_exact_complete = 0;
  bool witness = false;
};

/// Builds x_1 < ... < x_j of size 1 at level beta, j = ceil(2/theta) + 1, and
/// checks (i) Phi((1/2 sum x_k) chi_A) <= 1 on sampled A in A^f_beta and
/// (ii) sum Phi(eta x_k / 2) > 1. Blocks past the window contribute their
/// structural bound theta/2 to (ii).
WitnessReport main_witness(const OrliczFn& m, double eta, const Ordinal& beta, const BlockQuadruple& q,
                           std::size_t samples, std::uint64_t seed);

}  // namespace cbsets
