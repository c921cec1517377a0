#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cbsets/growth.hpp"
#include "cbsets/ordinal.hpp"

namespace cbsets {

/// Proof tree for A in A^f_level.
///  - Trivial: |A| <= 1, a member at every level.
///  - Blocks: successor level; A = A_1 < ... < A_k, k <= f(min A), each child
///    certifies A_i at level - 1.
///  - Limit: limit level; the single child certifies A at b(level, f(min A)).
///  - Capacity: level >= w^2 and |A| <= membership_capacity(level, f(min A));
///    checked by recomputing the bound.
struct MembershipCert {
  enum class Kind { Trivial, Blocks, Limit, Capacity };
  Kind kind = Kind::Trivial;
  FinSet set;
  Ordinal level;
  std::vector<FinSet> blocks;  // Blocks only
  Ordinal resolved;            // Limit only
  std::vector<MembershipCert> children;
};

/// Replays a certificate against the recursive definition. Never trusts cached
/// answers; the only oracle used is fund_seq.
bool verify_certificate(const MembershipCert& cert, const GrowthFn& f);

struct MembershipResult {
  bool member = false;
  std::optional<MembershipCert> certificate;
};

/// Every A with f(min A) >= m >= 2 and |A| <= cap is in A^f_beta, where
/// cap(n) = m^n, cap(gamma + 1) = m cap(gamma), cap(lambda) = cap(b(lambda, m)).
/// (Successors: chop A into <= m chunks of size cap(gamma). Limits: cap is
/// nondecreasing along fundamental sequences, by the Bachmann property;
/// cap >= m^(m+1) at every level >= w.)
/// Computed iteratively; saturates at GrowthFn::kSaturation. 1 when m < 2.
std::uint64_t membership_capacity(const Ordinal& beta, std::uint64_t m);

/// Membership oracle for the hierarchy A^f_beta with b = fund_seq.
///
/// Successor levels use the greedy longest-prefix split. Levels of the form
/// lambda + n with n >= |A| - 1 are decided directly: such a level contains A
/// iff |A| <= 1 or f(min A) >= 2 (peel off the minimum one level at a time).
/// Answers are cached per (set, level); the cache is shared across threads.
class AdmissibleFamily {
 public:
  explicit AdmissibleFamily(GrowthFn f) : f_(std::move(f)) {}

  const GrowthFn& growth() const { return f_; }

  bool contains(const FinSet& a, const Ordinal& beta) const;
  MembershipResult is_member(const FinSet& a, const Ordinal& beta) const;

  /// Least k with A = A_1 < ... < A_k, every A_i in A^f_gamma (0 for the empty set).
  std::uint64_t min_blocks(const FinSet& a, const Ordinal& gamma) const;

  /// A is a union of at most `bound` consecutive A^f_beta blocks.
  bool is_member_bounded_by(const FinSet& a, const Ordinal& beta, std::uint64_t bound) const;
  /// The A^f_{beta,m} sets: bound 3^m.
  bool is_member_bounded(const FinSet& a, const Ordinal& beta, unsigned m) const;

  /// All members contained in [1..n] in lexicographic order; n <= 20.
  std::vector<FinSet> enumerate(const Ordinal& beta, unsigned n) const;

  void clear_cache() const;

 private:
  GrowthFn f_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, bool> cache_;

  bool decide(const FinSet& a, const Ordinal& beta) const;
  /// Sizes of the greedy blocks (empty for the empty set).
  std::vector<std::size_t> greedy_split(const FinSet& a, const Ordinal& gamma) const;
  MembershipCert certify(const FinSet& a, const Ordinal& beta) const;
};

/// Free-function forms.
MembershipResult is_member(const FinSet& a, const GrowthFn& f, const Ordinal& beta);
std::uint64_t min_blocks(const FinSet& a, const GrowthFn& f, const Ordinal& gamma);
bool is_member_bounded(const FinSet& a, const GrowthFn& f, const Ordinal& beta, unsigned m);
std::vector<FinSet> enumerate(const GrowthFn& f, const Ordinal& beta, unsigned n);

/// Splits beta into (lambda, n) with beta = lambda + n and lambda zero or a limit.
std::pair<Ordinal, std::uint64_t> split_finite_tail(const Ordinal& beta);

}  // namespace cbsets
