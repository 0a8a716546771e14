#include "core/fields.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace musielak {

ScalarField ScalarField::constant(double value) {
  require(std::isfinite(value), ErrorCode::invalid_argument, "field constant must be finite");
  ScalarField f;
  f.kind_ = Kind::constant;
  f.value_ = value;
  f.lower_ = f.upper_ = value;
  f.desc_ = "constant";
  return f;
}

ScalarField ScalarField::closed_form(Fn fn, double lower, double upper, std::string description) {
  require(static_cast<bool>(fn), ErrorCode::invalid_argument, "field callable must be set");
  require(lower <= upper, ErrorCode::invalid_argument, "field bounds must satisfy lower <= upper");
  ScalarField f;
  f.kind_ = Kind::closed_form;
  f.fn_ = std::move(fn);
  f.lower_ = lower;
  f.upper_ = upper;
  f.desc_ = std::move(description);
  return f;
}

ScalarField ScalarField::grid_samples(std::vector<double> box_lo, std::vector<double> box_hi,
                                      std::vector<int> nodes, std::vector<double> values) {
  const std::size_t dim = box_lo.size();
  require(dim >= 1, ErrorCode::invalid_argument, "grid field needs at least one axis");
  require(box_hi.size() == dim && nodes.size() == dim, ErrorCode::invalid_argument,
          "grid field box/node arrays must share the dimension");
  std::size_t total = 1;
  for (std::size_t a = 0; a < dim; ++a) {
    require(nodes[a] >= 2, ErrorCode::invalid_argument, "grid field needs >= 2 nodes per axis");
    require(box_hi[a] > box_lo[a], ErrorCode::invalid_argument, "grid field box must have positive extent");
    total *= static_cast<std::size_t>(nodes[a]);
  }
  require(values.size() == total, ErrorCode::invalid_argument, "grid field value count mismatch");
  ScalarField f;
  f.kind_ = Kind::grid_samples;
  f.box_lo_ = std::move(box_lo);
  f.box_hi_ = std::move(box_hi);
  f.grid_nodes_ = std::move(nodes);
  f.grid_values_ = std::move(values);
  auto [lo_it, hi_it] = std::minmax_element(f.grid_values_.begin(), f.grid_values_.end());
  f.lower_ = *lo_it;
  f.upper_ = *hi_it;
  f.desc_ = "grid_samples";
  return f;
}

ScalarField ScalarField::affine(double intercept, std::vector<double> slopes,
                                std::span<const double> box_lo, std::span<const double> box_hi) {
  require(slopes.size() == box_lo.size() && slopes.size() == box_hi.size(), ErrorCode::invalid_argument,
          "affine field slope/box dimension mismatch");
  double lo = intercept, hi = intercept;
  for (std::size_t a = 0; a < slopes.size(); ++a) {
    double v1 = slopes[a] * box_lo[a], v2 = slopes[a] * box_hi[a];
    lo += std::min(v1, v2);
    hi += std::max(v1, v2);
  }
  auto fn = [intercept, s = std::move(slopes)](std::span<const double> x) {
    double v = intercept;
    for (std::size_t a = 0; a < s.size(); ++a) v += s[a] * x[a];
    return v;
  };
  return closed_form(std::move(fn), lo, hi, "affine");
}

ScalarField ScalarField::sinusoid(double base, double amplitude, double frequency, int axis, double phase) {
  require(axis >= 0, ErrorCode::invalid_argument, "sinusoid axis must be nonnegative");
  auto fn = [=](std::span<const double> x) {
    return base + amplitude * std::sin(2.0 * std::numbers::pi * frequency * x[static_cast<std::size_t>(axis)] + phase);
  };
  return closed_form(std::move(fn), base - std::abs(amplitude), base + std::abs(amplitude), "sinusoid");
}

ScalarField ScalarField::step(int axis, double threshold, double low, double high) {
  require(axis >= 0, ErrorCode::invalid_argument, "step axis must be nonnegative");
  auto fn = [=](std::span<const double> x) {
    return x[static_cast<std::size_t>(axis)] < threshold ? low : high;
  };
  return closed_form(std::move(fn), std::min(low, high), std::max(low, high), "step");
}

double ScalarField::operator()(std::span<const double> x) const {
  double v;
  switch (kind_) {
    case Kind::constant:
      return value_;
    case Kind::closed_form:
      v = fn_(x);
      break;
    case Kind::grid_samples:
      v = interpolate(x);
      break;
    default:
      raise(ErrorCode::internal_error, "unknown field kind");
  }
  // Declared bounds are a contract; a violation means the field spec lied.
  constexpr double slack = 1e-9;
  double scale = std::max({1.0, std::abs(lower_), std::abs(upper_)});
  require(v >= lower_ - slack * scale && v <= upper_ + slack * scale, ErrorCode::domain_error,
          "field value " + std::to_string(v) + " escapes declared bounds [" + std::to_string(lower_) + ", " +
              std::to_string(upper_) + "]");
  return std::clamp(v, lower_, upper_);
}

double ScalarField::interpolate(std::span<const double> x) const {
  const std::size_t dim = box_lo_.size();
  require(x.size() == dim, ErrorCode::domain_error, "field point dimension mismatch");
  std::vector<std::size_t> base(dim);
  std::vector<double> frac(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    const double extent = box_hi_[a] - box_lo_[a];
    const double tol = 1e-12 * extent;
    require(x[a] >= box_lo_[a] - tol && x[a] <= box_hi_[a] + tol, ErrorCode::domain_error,
            "point outside grid field domain on axis " + std::to_string(a));
    const int n = grid_nodes_[a];
    const double h = extent / static_cast<double>(n - 1);
    double t = (std::clamp(x[a], box_lo_[a], box_hi_[a]) - box_lo_[a]) / h;
    auto i = static_cast<std::size_t>(std::min<double>(std::floor(t), static_cast<double>(n - 2)));
    base[a] = i;
    frac[a] = t - static_cast<double>(i);
  }
  // Accumulate over the 2^dim cell corners.
  double result = 0.0;
  const std::size_t corners = std::size_t{1} << dim;
  for (std::size_t corner = 0; corner < corners; ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dim; ++a) {
      const bool high = (corner >> a) & 1u;
      w *= high ? frac[a] : 1.0 - frac[a];
      flat = flat * static_cast<std::size_t>(grid_nodes_[a]) + base[a] + (high ? 1 : 0);
    }
    result += w * grid_values_[flat];
  }
  return result;
}

ExponentField::ExponentField(ScalarField field) : field_(std::move(field)) {
  require(field_.lower() > 1.0, ErrorCode::config_error, "exponent lower bound must exceed 1");
  require(std::isfinite(field_.upper()), ErrorCode::config_error, "exponent upper bound must be finite");
}

double ExponentField::operator()(std::span<const double> x) const { return field_(x); }

WeightField::WeightField(ScalarField field) : field_(std::move(field)) {
  require(field_.lower() >= 0.0, ErrorCode::config_error, "weight field must be nonnegative");
}

double WeightField::operator()(std::span<const double> x) const { return field_(x); }

}  // namespace musielak
