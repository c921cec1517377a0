#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cbsets {

/// Finite subset of {1, 2, ...} kept as a strictly increasing tuple.
class FinSet {
 public:
  FinSet() = default;
  FinSet(std::initializer_list<std::uint64_t> elems);
  /// Throws std::invalid_argument unless strictly increasing and >= 1.
  static FinSet from_sorted(std::vector<std::uint64_t> elems);
  /// Sorts and deduplicates.
  static FinSet from_unsorted(std::vector<std::uint64_t> elems);
  /// Bit i of `mask` selects element i + 1.
  static FinSet from_mask(std::uint64_t mask);
  /// Comma-separated increasing integers; empty string is the empty set.
  static FinSet parse(std::string_view text);

  const std::vector<std::uint64_t>& elems() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  std::uint64_t min() const;
  std::uint64_t max() const;
  bool contains(std::uint64_t x) const;

  /// A(<a): elements strictly below a.
  FinSet below(std::uint64_t a) const;
  /// A(a): elements <= a.
  FinSet upto(std::uint64_t a) const;
  /// Elements > a.
  FinSet above(std::uint64_t a) const;
  /// Consecutive slice [first, first + count) of the sorted elements.
  FinSet slice(std::size_t first, std::size_t count) const;
  /// A with x added (any position).
  FinSet with(std::uint64_t x) const;
  FinSet without(std::uint64_t x) const;

  bool subset_of(const FinSet& other) const;
  FinSet intersect(const FinSet& other) const;
  FinSet unite(const FinSet& other) const;
  /// Only valid when max() <= 64.
  std::uint64_t mask() const;

  friend auto operator<=>(const FinSet&, const FinSet&) = default;
  friend bool operator==(const FinSet&, const FinSet&) = default;

 private:
  std::vector<std::uint64_t> elems_;
};

std::string to_string(const FinSet& a);
/// Key usable in hash maps.
std::string set_key(const FinSet& a);

/// "A < B" in the sense max A < min B; empty sets compare below/above anything.
bool precedes(const FinSet& a, const FinSet& b);

/// A strictly increasing f : N -> N tending to infinity.
class GrowthFn {
 public:
  struct Identity {};
  struct Affine {
    std::uint64_t slope = 1;
    std::int64_t offset = 0;
  };
  struct PowBase {
    std::uint64_t base = 2;
  };
  struct Table {
    std::vector<std::uint64_t> prefix;  // f(1), ..., f(len)
    Affine tail;                        // f(k) = slope * k + offset for k > len
  };
  using Spec = std::variant<Identity, Affine, PowBase, Table>;

  /// Values are clamped to this ceiling; every caller compares against set sizes
  /// or uses the value as a fundamental-sequence index, both far below it.
  static constexpr std::uint64_t kSaturation = std::uint64_t{1} << 62;

  GrowthFn() = default;
  explicit GrowthFn(Spec spec);

  static GrowthFn identity() { return GrowthFn(Identity{}); }
  static GrowthFn affine(std::uint64_t slope, std::int64_t offset) { return GrowthFn(Affine{slope, offset}); }
  static GrowthFn pow(std::uint64_t base) { return GrowthFn(PowBase{base}); }
  static GrowthFn table(std::vector<std::uint64_t> prefix, Affine tail) {
    return GrowthFn(Table{std::move(prefix), tail});
  }

  /// Accepts "id", "2k", "<a>k+<b>", "affine:a:b", "pow4", "pow:c", "4^k",
  /// "table:v1,v2,...:a:b".
  static GrowthFn parse(std::string_view text);

  std::uint64_t operator()(std::uint64_t k) const;
  /// Natural log of f(k) without saturation.
  double log_value(std::uint64_t k) const;

  const Spec& spec() const { return spec_; }

 private:
  Spec spec_ = Identity{};
};

std::string to_string(const GrowthFn& f);

/// Pointwise maximum of `fns` on [1, horizon], padded to be strictly increasing,
/// continued past the horizon by the affine tail max(slope) * k + c that stays above
/// every input's tail. Used to merge the functions produced by extraction steps.
GrowthFn pointwise_max(const std::vector<GrowthFn>& fns, std::uint64_t horizon);

}  // namespace cbsets
