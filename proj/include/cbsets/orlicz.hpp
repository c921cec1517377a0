#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cbsets {

/// Orlicz function M : [0, inf) -> [0, inf), normalized so M(1) = 1.
///
///  - Power(p):   M(t) = t^p, p >= 1.
///  - LogSquare:  M(t) = c * exp(-ln^2(1/t)) for t <= 1/e, continued by its
///                tangent line (slope 2c) beyond; c = 1/(2 - 1/e). The log part
///                is convex exactly on (0, 1/e], and M(eta t)/M(t) -> 0 as t -> 0
///                for every eta < 1.
///  - Custom:     piecewise linear through (0,0) and the given knots, extended
///                by the last slope; knot slopes must be nondecreasing.
class OrliczFn {
 public:
  enum class Kind { Power, LogSquare, Custom };

  static OrliczFn power(double p);
  static OrliczFn log_square();
  static OrliczFn custom(std::vector<std::pair<double, double>> knots);
  /// "pow:<p>", "logsq", "custom:t1:v1,t2:v2,...".
  static OrliczFn parse(std::string_view text);

  Kind kind() const { return kind_; }
  double exponent() const { return p_; }

  double operator()(double t) const;
  /// ln M(t); -inf at t = 0. Accurate where M(t) itself underflows.
  double log_eval(double t) const;
  /// ln M(e^{log_t}); usable when t itself underflows a double.
  double log_eval_at_log(double log_t) const;
  /// M'(t) (right derivative for Custom).
  double derivative(double t) const;
  /// Least t with M(t) >= y.
  double inverse(double y) const;
  /// lim M(t)/t as t -> inf; +inf for superlinear growth.
  double asymptotic_slope() const;
  /// Convex conjugate M*(s) = sup_t (s t - M(t)), s >= 0; +inf where unbounded.
  double conjugate(double s) const;

  /// M(0)=0, M(1)=1, nondecreasing, convex on [0,1] at `points` grid points.
  bool check_shape(int points = 10000) const;

  std::string to_string() const;

 private:
  Kind kind_ = Kind::Power;
  double p_ = 2.0;
  std::vector<std::pair<double, double>> knots_;  // Custom; starts at (0,0)
};

/// Scale factor of LogSquare: c = 1/(2 - 1/e).
double log_square_scale();

}  // namespace cbsets
