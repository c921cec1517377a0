#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cbsets/growth.hpp"
#include "cbsets/orlicz.hpp"
#include "cbsets/seqspace.hpp"

namespace cbsets {

/// Finite norming data for a Marcinkiewicz norm sup_n t_n rho_n(a*_1..a*_n),
/// truncated to n <= nmax and supports in [1..nsupp].
///
/// nets[n-1] holds the decreasing dual tuples b of length n. The truncated K
/// consists of t_n sum_{i} eps_i b_i e'_{k_i} over b in nets[n-1], distinct
/// k_1..k_n <= nsupp and signs eps_i.
struct NormingNet {
  SymNormSpec spec;
  unsigned nmax = 0;
  unsigned nsupp = 0;
  std::vector<double> t;                            // t_1..t_nmax
  std::vector<std::vector<std::vector<double>>> nets;
  double grid_step = 0;  // delta of the grid net; 0 for the exact nets
  bool exact = false;    // singleton nets (l1 / l-infinity rho)

  /// sup_{c in K} <a, c>: for each n the best placement puts b on the top
  /// n entries of |a| in order.
  double sup(const Vec& a) const;
  /// max_{n <= nmax} t_n rho_n(a*_1..a*_n): the norm seen by the truncated K.
  double truncated_norm(const Vec& a) const;
};

class NetValidationFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// spec must be a Marcinkiewicz spec; nmax <= 8, nsupp <= 24.
NormingNet build_norming(const SymNormSpec& spec, unsigned nmax, unsigned nsupp, std::uint64_t seed = 1);

/// Independent evaluation: walks every support F of size n inside
/// supp(a) cap [1..nsupp] and every b in the net, pairing b with |a| on F.
double brute_force_sup(const NormingNet& net, const Vec& a);

struct SandwichReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double min_ratio = 0;      // min sup/||a||
  double max_ratio = 0;      // max sup/||a||
  double max_exact_err = 0;  // |sup - truncated norm|, exact nets only
};

/// 1/2 ||a|| <= sup_K <a,c> <= ||a|| on `samples` random a supported in [1..nsupp].
SandwichReport check_sandwich(const NormingNet& net, std::size_t samples, std::uint64_t seed);

/// sup{ <a, b> : 0 <= b_k <= t, ||sum b_k e'_k|| <= 1, b in R^dim }, a decreasing
/// and nonnegative (entries past dim are ignored).
///
/// Upper bound: <a,b> <= t sum (a - c)_+ + ||min(a, c)|| for every level c,
/// minimized over c. Lower bound: a feasible b built from a norming functional
/// of min(a, c). Certified when the two meet within 1e-6. For dim <= 6 a grid
/// over decreasing b is also searched, and a grid point beating the upper bound
/// is reported as an error.
struct DualSup {
  double value = 0;  // best feasible value found
  double upper = 0;
  bool certified = false;
  bool grid_checked = false;
  double grid_max = 0;
  std::vector<double> witness;  // feasible b attaining `value`
};

class OptimizerDisagreement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DualSup capped_dual_sup(const Vec& a_star, double t, std::uint64_t dim, const SymNormSpec& space);

struct RhoValue {
  double rho = 0;
  double t = 0;        // t_n (converse) or 2^{-n} (embed)
  double dim = 0;      // f(n) or l_n; l_n can exceed 2^64
  DualSup detail;
};

/// t_1..t_count: the least eps in {2^{-j}} (capped at 1) with
/// delta(eps) >= 1/||sum_{k<=n} e_k||, delta from delta_of_eps with xi = eta/2.
std::vector<double> converse_weights(const SymNormSpec& space, double eta, unsigned count);

/// rho_n(v*) = (1/t_n) sup{ sum_{k<=f(n)} v*_k b_k : ||b||_inf <= t_n, ||sum b_k e'_k|| <= 1 }.
RhoValue converse_rho(const SymNormSpec& space, const GrowthFn& f, unsigned n, const Vec& v, double eta = 0.5);

struct InequalityCheck {
  double lhs = 0, rhs = 0;
  bool ok = false;
};

/// eta ||v|| <= sup_n || sum_{k=n}^{n+f(n)-1} v*_k e_k ||.
InequalityCheck window_inequality(const SymNormSpec& space, const GrowthFn& f, const Vec& v, double eta);

/// (eta/4) ||v|| <= sup_n t_n rho_n(v*_1..v*_{f(n)}) <= ||v||.
struct EquivalenceCheck {
  double norm = 0, sup = 0;
  bool lower_ok = false, upper_ok = false;
};
EquivalenceCheck converse_equivalence(const SymNormSpec& space, const GrowthFn& f, const Vec& v, double eta);

struct EmbedParams {
  std::vector<double> delta;  // delta_1..delta_{count+1}
  std::vector<double> l;      // l_1..l_count
};

/// Level sequence for (M, eta), shrunk so that delta_n < delta(2^{-n}) (delta_of_eps
/// with xi = 1), and l_n = least l with delta_{n+1} ||sum_{k<=l} e_k|| > 1/eta.
EmbedParams embed_params(const OrliczFn& m, double eta, unsigned count);

/// rho_n(v*) = 2^n sup{ sum v*_k b_k : 2^{-n} >= b_1 >= ... >= b_{l_n} >= 0, ||sum b_k e'_k|| <= 1 }.
RhoValue embed_rho(const OrliczFn& m, double eta, unsigned n, const Vec& v);

/// Both halves of
///   sup_n 2^{-n} rho_n <= ||a|| <= max{ ||a||_inf / (eta delta_1), (2/eta) sup_n 2^{-n} rho_n }
/// with n up to nmax.
struct EmbedCheck {
  double norm = 0, sup = 0, upper_bound = 0;
  bool left_ok = false, right_ok = false;
};
EmbedCheck check_embed_norming(const OrliczFn& m, double eta, const Vec& v, unsigned nmax);

}  // namespace cbsets
