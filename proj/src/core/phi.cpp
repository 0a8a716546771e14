#include "core/phi.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <limits>

namespace musielak {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(e + t) evaluated as 1 + log1p(t/e) to keep precision near t = 0.
inline double log_e_plus(double t) { return 1.0 + std::log1p(t / std::numbers::e); }

}  // namespace

std::string to_string(PhiFamily family) {
  switch (family) {
    case PhiFamily::power_variable: return "power_variable";
    case PhiFamily::double_phase: return "double_phase";
    case PhiFamily::power_log: return "power_log";
    case PhiFamily::exp_power: return "exp_power";
    case PhiFamily::orlicz_custom: return "orlicz_custom";
  }
  return "unknown";
}

PhiFunction PhiFunction::power_variable(ExponentField p, std::string name) {
  PhiFunction phi;
  phi.family_ = PhiFamily::power_variable;
  phi.p_ = std::move(p);
  phi.name_ = std::move(name);
  return phi;
}

PhiFunction PhiFunction::double_phase(double p_base, double q, WeightField a, std::string name) {
  require(p_base > 1.0, ErrorCode::config_error, "double_phase base exponent must exceed 1");
  require(q > p_base, ErrorCode::config_error, "double_phase requires q > p");
  PhiFunction phi;
  phi.family_ = PhiFamily::double_phase;
  phi.p_base_ = p_base;
  phi.q_ = q;
  phi.a_ = std::move(a);
  phi.name_ = std::move(name);
  return phi;
}

PhiFunction PhiFunction::power_log(ExponentField p, std::string name) {
  PhiFunction phi;
  phi.family_ = PhiFamily::power_log;
  phi.p_ = std::move(p);
  phi.name_ = std::move(name);
  return phi;
}

PhiFunction PhiFunction::exp_power(ExponentField p, std::string name) {
  PhiFunction phi;
  phi.family_ = PhiFamily::exp_power;
  phi.p_ = std::move(p);
  phi.name_ = std::move(name);
  return phi;
}

PhiFunction PhiFunction::orlicz_custom(CustomEval eval, std::string name) {
  require(static_cast<bool>(eval), ErrorCode::invalid_argument, "custom evaluator must be set");
  PhiFunction phi;
  phi.family_ = PhiFamily::orlicz_custom;
  phi.custom_ = std::move(eval);
  phi.name_ = std::move(name);
  return phi;
}

bool PhiFunction::x_independent() const noexcept {
  switch (family_) {
    case PhiFamily::orlicz_custom: return true;
    case PhiFamily::double_phase: return a_->field().is_constant();
    default: return p_->is_constant();
  }
}

double PhiFunction::evaluate_or_inf(std::span<const double> x, double t) const {
  require(t >= 0.0, ErrorCode::invalid_argument, "Phi-function argument t must be nonnegative");
  if (t == 0.0) return 0.0;
  switch (family_) {
    case PhiFamily::power_variable:
      return std::pow(t, (*p_)(x));
    case PhiFamily::double_phase:
      return std::pow(t, p_base_) + (*a_)(x)*std::pow(t, q_);
    case PhiFamily::power_log:
      return std::pow(t, (*p_)(x)) * log_e_plus(t);
    case PhiFamily::exp_power: {
      double e = std::pow(t, (*p_)(x));
      return e > 709.0 ? kInf : std::expm1(e);
    }
    case PhiFamily::orlicz_custom: {
      double v = custom_(t);
      require(v >= 0.0 || std::isnan(v), ErrorCode::invalid_argument,
              "custom evaluator returned a negative value");
      return v;
    }
  }
  raise(ErrorCode::internal_error, "unknown Phi family");
}

double PhiFunction::evaluate(std::span<const double> x, double t) const {
  double v = evaluate_or_inf(x, t);
  require(std::isfinite(v), ErrorCode::range_error,
          name_ + ": M(x,t) overflows at t = " + std::to_string(t));
  return v;
}

PreparedPhi::PreparedPhi(const PhiFunction& phi, std::span<const double> coords, int dim)
    : phi_(&phi), family_(phi.family()), p_base_(phi.p_base_), q_(phi.q_) {
  require(dim >= 1, ErrorCode::invalid_argument, "dimension must be positive");
  require(coords.size() % static_cast<std::size_t>(dim) == 0, ErrorCode::invalid_argument,
          "coordinate array length must be a multiple of dim");
  count_ = coords.size() / static_cast<std::size_t>(dim);
  switch (family_) {
    case PhiFamily::power_variable:
    case PhiFamily::power_log:
    case PhiFamily::exp_power:
      params_.resize(count_);
      for (std::size_t i = 0; i < count_; ++i)
        params_[i] = (*phi.p_)(coords.subspan(i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)));
      break;
    case PhiFamily::double_phase:
      weights_.resize(count_);
      for (std::size_t i = 0; i < count_; ++i)
        weights_[i] = (*phi.a_)(coords.subspan(i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)));
      break;
    case PhiFamily::orlicz_custom:
      break;
  }
}

double PreparedPhi::eval_or_inf(std::size_t i, double t) const noexcept {
  if (t == 0.0) return 0.0;
  switch (family_) {
    case PhiFamily::power_variable:
      return std::pow(t, params_[i]);
    case PhiFamily::double_phase:
      return std::pow(t, p_base_) + weights_[i] * std::pow(t, q_);
    case PhiFamily::power_log:
      return std::pow(t, params_[i]) * log_e_plus(t);
    case PhiFamily::exp_power: {
      double e = std::pow(t, params_[i]);
      return e > 709.0 ? kInf : std::expm1(e);
    }
    case PhiFamily::orlicz_custom:
      return phi_->custom_(t);
  }
  return kInf;
}

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    g[static_cast<std::size_t>(i)] =
        i == count - 1 ? hi : std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return g;
}

}  // namespace

PhiValidationReport validate_phi(const PhiFunction& phi,
                                 std::span<const std::vector<double>> sample_points,
                                 const PhiValidationOptions& options) {
  require(options.t_min <= 1e-6 && options.t_max >= 1e6, ErrorCode::invalid_argument,
          "validation t-grid must span at least [1e-6, 1e6]");
  require(!sample_points.empty(), ErrorCode::invalid_argument, "validation needs at least one sample point");

  PhiValidationReport report;
  report.checked = {"zero_at_zero", "positive", "monotone", "midpoint_convex", "limit_zero", "limit_infinity"};
  auto fail = [&](PhiValidationIssue issue) {
    if (report.pass) {
      report.pass = false;
      report.first_violation = std::move(issue);
    }
  };

  const auto t_grid = log_grid(options.t_min, options.t_max, options.t_count);
  const auto convex_grid = log_grid(options.t_min, options.t_max, options.convexity_points);

  for (const auto& x : sample_points) {
    if (!report.pass) break;
    // M(x,0) = 0
    if (double v0 = phi.evaluate_or_inf(x, 0.0); v0 != 0.0) {
      fail({"zero_at_zero", x, 0.0, 0.0, v0, 0.0});
      break;
    }
    // positivity and monotonicity along the grid
    double prev = 0.0, prev_t = 0.0;
    for (double t : t_grid) {
      double v = phi.evaluate_or_inf(x, t);
      if (!(v > 0.0)) {
        fail({"positive", x, 0.0, t, v, 0.0});
        break;
      }
      double slack = options.tolerance * std::max({1.0, std::abs(prev), std::isfinite(v) ? std::abs(v) : 0.0});
      if (v < prev - slack) {
        fail({"monotone", x, prev_t, t, prev, v});
        break;
      }
      prev = v;
      prev_t = t;
    }
    if (!report.pass) break;
    // midpoint convexity on all pairs of the subgrid
    for (std::size_t i = 0; i + 1 < convex_grid.size() && report.pass; ++i) {
      for (std::size_t j = i + 1; j < convex_grid.size(); ++j) {
        const double s = convex_grid[i], t = convex_grid[j];
        const double vs = phi.evaluate_or_inf(x, s), vt = phi.evaluate_or_inf(x, t);
        const double vm = phi.evaluate_or_inf(x, 0.5 * (s + t));
        if (!std::isfinite(vt) || !std::isfinite(vm)) continue;  // overflow region: convexity not decidable here
        const double bound = 0.5 * (vs + vt) + options.tolerance * std::max(1.0, vt);
        if (vm > bound) {
          fail({"midpoint_convex", x, s, t, vm, 0.5 * (vs + vt)});
          break;
        }
      }
    }
    if (!report.pass) break;
    // limit ratios at the grid extremes
    const double r_small = phi.evaluate_or_inf(x, options.t_min) / options.t_min;
    if (!(r_small < options.limit_small_cap)) {
      fail({"limit_zero", x, 0.0, options.t_min, r_small, options.limit_small_cap});
      break;
    }
    const double r_large = phi.evaluate_or_inf(x, options.t_max) / options.t_max;  // +inf passes
    if (!(r_large > options.limit_large_floor)) {
      fail({"limit_infinity", x, 0.0, options.t_max, r_large, options.limit_large_floor});
      break;
    }
  }
  return report;
}

}  // namespace musielak
