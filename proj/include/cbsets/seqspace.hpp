#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <boost/rational.hpp>

#include "cbsets/orlicz.hpp"

using Rational = boost::rational<long long>;

namespace Eigen {
// Exact arithmetic for the counting norms (l1, l-infinity, Marcinkiewicz with
// rational weights); nothing here relies on epsilon().
template <>
struct NumTraits<Rational> : GenericNumTraits<Rational> {
  using Real = Rational;
  using NonInteger = Rational;
  using Literal = Rational;
  using Nested = Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 4
  };
  static Rational epsilon() { return Rational(0); }
  static Rational dummy_precision() { return Rational(0); }
  static int digits10() { return 0; }
};
}  // namespace Eigen

namespace cbsets {

/// Finitely supported sequence; entry i holds the coefficient of e_{i+1}.
template <class Scalar>
using SeqVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using Vec = SeqVec<double>;

/// "3@1,4@2" (value@coordinate) or a plain comma list "3,4"; empty string = 0.
Vec parse_vec(std::string_view text);
/// value@coordinate list over the support.
std::string format_vec(const Vec& v);

template <class Scalar>
Scalar abs_value(const Scalar& x) {
  return x < Scalar(0) ? Scalar(-x) : x;
}

/// Decreasing rearrangement a* of |a|, zeros dropped.
template <class Scalar>
SeqVec<Scalar> rearrange(const SeqVec<Scalar>& v) {
  std::vector<Scalar> mags;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != Scalar(0)) mags.push_back(abs_value(v(i)));
  std::sort(mags.begin(), mags.end(), [](const Scalar& a, const Scalar& b) { return b < a; });
  SeqVec<Scalar> out(static_cast<Eigen::Index>(mags.size()));
  for (std::size_t i = 0; i < mags.size(); ++i) out(static_cast<Eigen::Index>(i)) = mags[i];
  return out;
}

template <class Scalar>
Scalar norm_l1(const SeqVec<Scalar>& v) {
  Scalar s(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) s += abs_value(v(i));
  return s;
}

template <class Scalar>
Scalar norm_linf(const SeqVec<Scalar>& v) {
  Scalar s(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) s = std::max(s, abs_value(v(i)));
  return s;
}

/// 1-based support.
template <class Scalar>
std::vector<std::uint64_t> support(const SeqVec<Scalar>& v) {
  std::vector<std::uint64_t> s;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != Scalar(0)) s.push_back(static_cast<std::uint64_t>(i + 1));
  return s;
}

double lp_norm(const Vec& v, double p);

/// Phi(v) = sum M(|v_k|).
double phi(const Vec& v, const OrliczFn& m);

/// Luxemburg norm by bisection on [||v||_inf, ||v||_1] to absolute width 1e-12;
/// the returned rho satisfies Phi(v/rho) <= 1.
double luxemburg_norm(const Vec& v, const OrliczFn& m, double tol = 1e-12);

/// Lattice norm applied to each prefix a*_1..a*_n (independent of n).
struct Rho {
  enum class Kind { L1, Linf, Lp };
  Kind kind = Kind::L1;
  double q = 1.0;
};

/// Decreasing weights t_n > 0. Weak-l^p: t_n = n^{1/p - 1}. Explicit lists
/// must cover every n that is queried.
struct Weights {
  double p = 2.0;
  std::vector<double> values;  // explicit t_1, t_2, ... when nonempty
  double at(std::uint64_t n) const;
};

struct SymNormSpec {
  enum class Kind { Lp, Linf, Orlicz, Marcinkiewicz };
  Kind kind = Kind::Lp;
  double p = 2.0;
  OrliczFn m = OrliczFn::power(2.0);
  Weights weights;
  Rho rho;

  static SymNormSpec lp(double p);
  static SymNormSpec linf();
  static SymNormSpec orlicz(OrliczFn m);
  static SymNormSpec weak(double p, Rho rho = {});
  /// "lp:<p>", "linf", "orlicz:<M>", "weak:<p>" (rho = l1), "marc:<p>:l1|linf|lp:<q>".
  static SymNormSpec parse(std::string_view text);
  std::string to_string() const;
};

double rho_norm(const Vec& prefix_of_rearranged, const Rho& rho);

/// sup_n t_n rho(a*_1..a*_n), n up to the support size: past the support the
/// prefix norm is constant while t_n decreases.
double marcinkiewicz_norm(const Vec& v, const Weights& t, const Rho& rho);

/// Exact form for rho in {l1, linf} with caller-supplied weights t_1..t_len.
template <class Scalar>
Scalar marcinkiewicz_norm_exact(const SeqVec<Scalar>& v, const std::vector<Scalar>& t, Rho::Kind rho) {
  if (rho == Rho::Kind::Lp) throw std::invalid_argument("exact mode supports l1 and l-infinity prefixes only");
  const SeqVec<Scalar> a = rearrange(v);
  if (static_cast<std::size_t>(a.size()) > t.size()) throw std::invalid_argument("not enough weights for the support");
  Scalar best(0), prefix(0);
  for (Eigen::Index n = 0; n < a.size(); ++n) {
    prefix = rho == Rho::Kind::L1 ? prefix + a(n) : a(0);
    best = std::max(best, t[static_cast<std::size_t>(n)] * prefix);
  }
  return best;
}

double norm(const Vec& v, const SymNormSpec& spec);

/// ||sum_{k<=n} e_k||.
double fundamental(const SymNormSpec& spec, std::uint64_t n);
/// ||sum_{k<=n} e'_k|| = n / fundamental(n) for 1-symmetric bases.
double dual_fundamental(const SymNormSpec& spec, std::uint64_t n);

/// Dual of the Luxemburg norm: inf_{k>0} (1 + sum M*(k|y_i|)) / k.
double orlicz_dual_norm(const Vec& y, const OrliczFn& m);
/// Dual norm for Lp / Linf / Orlicz specs.
double dual_norm(const Vec& y, const SymNormSpec& spec);

struct DeltaOfEps {
  std::uint64_t k0 = 0;
  double delta = 0;
};

/// delta = xi / (4 k0), k0 the least n with ||sum_{k<=n} e'_k|| > 1/eps.
/// Throws std::domain_error if no such n exists up to `horizon` (l1-like space).
DeltaOfEps delta_of_eps(const SymNormSpec& spec, double xi, double eps, std::uint64_t horizon = std::uint64_t{1} << 30);

/// Thrown when some delta_n cannot be found; `index` is that n.
struct DeltaSearchFailed : std::runtime_error {
  DeltaSearchFailed(const std::string& what, unsigned index) : std::runtime_error(what), index(index) {}
  unsigned index;
};

/// Strictly decreasing delta_1 < 1, ..., delta_count with M(eta t) < M(t)/2^n on
/// (0, delta_n], each verified on a 1000-point log grid. Candidates are
/// e^{-j/2}, j = 1, 2, ...
std::vector<double> delta_sequence(const OrliczFn& m, double eta, unsigned count);
/// The grid test behind delta_sequence.
bool verify_delta(const OrliczFn& m, double eta, unsigned n, double delta, int points = 1000);

struct ConditionOne {
  bool limit_zero = false;
  double bound = 0;       // min ratio seen when bounded below
  double last_ratio = 0;  // at t = 2^{-40}
  bool monotone = false;  // ratios nonincreasing in j
  std::vector<double> ratios;
};

/// Ratios M(eta t)/M(t) at t = 2^{-j}, j = 1..40, in log space.
ConditionOne condition_one_estimator(const OrliczFn& m, double eta);

/// Finitely valued map on A: constant on half-open bins (b_{k-1}, b_k] whose
/// boundaries avoid A, with the bin holding 0 sent to 0.
struct StepMap {
  std::vector<double> boundaries;  // b_{-l-1} < b_{-l} < ... < b_l
  std::vector<double> values;      // value on (b_{i-1}, b_i], i >= 1
  double operator()(double a) const;
  /// Number of distinct values h takes on `a`.
  std::size_t distinct_values(const std::vector<double>& a) const;
};

StepMap discretize(const std::vector<double>& a, double eps);

}  // namespace cbsets
