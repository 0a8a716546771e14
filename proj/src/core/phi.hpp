#ifndef MUSIELAK_CORE_PHI_HPP
#define MUSIELAK_CORE_PHI_HPP

#include "core/fields.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace musielak {

enum class PhiFamily {
  power_variable,  // t^p(x)
  double_phase,    // t^p + a(x) t^q
  power_log,       // t^p(x) * log(e + t)
  exp_power,       // exp(t^p(x)) - 1
  orlicz_custom,   // user-supplied x-independent convex evaluator
};

std::string to_string(PhiFamily family);

/// M(x,t): convex nondecreasing in t, M(x,0) = 0, measurable in x.
/// Evaluation is pure; instances are immutable after construction and safe
/// to share across threads.
class PhiFunction {
public:
  using CustomEval = std::function<double(double)>;

  static PhiFunction power_variable(ExponentField p, std::string name = "power_variable");
  static PhiFunction double_phase(double p_base, double q, WeightField a, std::string name = "double_phase");
  static PhiFunction power_log(ExponentField p, std::string name = "power_log");
  static PhiFunction exp_power(ExponentField p, std::string name = "exp_power");
  static PhiFunction orlicz_custom(CustomEval eval, std::string name = "orlicz_custom");

  PhiFamily family() const noexcept { return family_; }
  const std::string& name() const noexcept { return name_; }
  bool x_independent() const noexcept;

  /// M(x,t). Throws range_error on overflow and invalid_argument for t < 0.
  double evaluate(std::span<const double> x, double t) const;
  /// Same value, but +infinity instead of a range error. Solvers use this to
  /// treat overflow as "above any threshold".
  double evaluate_or_inf(std::span<const double> x, double t) const;

  const ExponentField* exponent_field() const noexcept { return p_ ? &*p_ : nullptr; }
  const WeightField* weight_field() const noexcept { return a_ ? &*a_ : nullptr; }
  double p_base() const noexcept { return p_base_; }
  double q() const noexcept { return q_; }

private:
  PhiFunction() = default;

  PhiFamily family_ = PhiFamily::orlicz_custom;
  std::string name_;
  std::optional<ExponentField> p_;
  std::optional<WeightField> a_;
  double p_base_ = 0.0, q_ = 0.0;
  CustomEval custom_;

  friend class PreparedPhi;
};

/// M with its x-dependent coefficients frozen on a fixed node set, so the
/// per-node evaluation in quadrature/norm loops is a straight formula.
class PreparedPhi {
public:
  /// coords: node coordinates flattened as [i*dim + axis].
  PreparedPhi(const PhiFunction& phi, std::span<const double> coords, int dim);

  std::size_t size() const noexcept { return count_; }

  double eval_or_inf(std::size_t i, double t) const noexcept;
  bool x_independent() const noexcept { return params_.empty(); }

private:
  const PhiFunction* phi_;
  PhiFamily family_;
  double p_base_ = 0.0, q_ = 0.0;
  std::vector<double> params_;  // p(x_i), or interleaved per family
  std::vector<double> weights_; // a(x_i) for double_phase
  std::size_t count_ = 0;
};

struct PhiValidationOptions {
  double t_min = 1e-6;
  double t_max = 1e6;
  int t_count = 61;          // log-spaced evaluation grid
  int convexity_points = 45; // all pairs of a log subgrid -> ~990 midpoint checks
  double tolerance = 1e-12;  // relative slack on monotonicity/convexity
  double limit_small_cap = 1e-3;
  double limit_large_floor = 1e3;
};

struct PhiValidationIssue {
  std::string property;  // zero_at_zero | positive | monotone | midpoint_convex | limit_zero | limit_infinity
  std::vector<double> x;
  double s = 0.0, t = 0.0;  // witness arguments (s unused for single-point properties)
  double lhs = 0.0, rhs = 0.0;
};

struct PhiValidationReport {
  bool pass = true;
  std::vector<std::string> checked;
  std::optional<PhiValidationIssue> first_violation;
};

/// Samples the defining properties of a Phi-function: M(x,0)=0, positivity,
/// monotonicity, midpoint convexity, and the two limit ratios at the grid
/// extremes. Violations are report content, not errors.
PhiValidationReport validate_phi(const PhiFunction& phi,
                                 std::span<const std::vector<double>> sample_points,
                                 const PhiValidationOptions& options = {});

}  // namespace musielak

#endif
