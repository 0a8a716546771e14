#ifndef MUSIELAK_CORE_FIELDS_HPP
#define MUSIELAK_CORE_FIELDS_HPP

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace musielak {

/// A scalar coefficient field x -> f(x) over a box, with declared bounds.
/// Three representations: constant, closed-form callable, and nodal samples
/// on a uniform grid with multilinear interpolation between nodes.
class ScalarField {
public:
  using Fn = std::function<double(std::span<const double>)>;

  static ScalarField constant(double value);
  static ScalarField closed_form(Fn fn, double lower, double upper, std::string description = "closed_form");
  static ScalarField grid_samples(std::vector<double> box_lo, std::vector<double> box_hi,
                                  std::vector<int> nodes, std::vector<double> values);

  // Common closed forms. Bounds are computed exactly over the given box.
  static ScalarField affine(double intercept, std::vector<double> slopes,
                            std::span<const double> box_lo, std::span<const double> box_hi);
  // base + amplitude * sin(2*pi*frequency*x[axis] + phase)
  static ScalarField sinusoid(double base, double amplitude, double frequency, int axis, double phase = 0.0);
  // low for x[axis] < threshold, high otherwise
  static ScalarField step(int axis, double threshold, double low, double high);

  double operator()(std::span<const double> x) const;
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  bool is_constant() const noexcept { return kind_ == Kind::constant; }
  const std::string& description() const noexcept { return desc_; }

private:
  enum class Kind { constant, closed_form, grid_samples };

  ScalarField() = default;
  double interpolate(std::span<const double> x) const;

  Kind kind_ = Kind::constant;
  double value_ = 0.0;
  Fn fn_;
  // grid_samples payload
  std::vector<double> box_lo_, box_hi_, grid_values_;
  std::vector<int> grid_nodes_;
  double lower_ = 0.0, upper_ = 0.0;
  std::string desc_ = "constant";
};

/// Variable exponent p(.) with 1 < p^- <= p(x) <= p^+ < infinity.
class ExponentField {
public:
  explicit ExponentField(ScalarField field);
  static ExponentField constant(double p) { return ExponentField(ScalarField::constant(p)); }

  double operator()(std::span<const double> x) const;
  double p_minus() const noexcept { return field_.lower(); }
  double p_plus() const noexcept { return field_.upper(); }
  bool is_constant() const noexcept { return field_.is_constant(); }
  const ScalarField& field() const noexcept { return field_; }

private:
  ScalarField field_;
};

/// Nonnegative weight a(.) (double-phase modulating coefficient).
class WeightField {
public:
  explicit WeightField(ScalarField field);
  static WeightField constant(double a) { return WeightField(ScalarField::constant(a)); }

  double operator()(std::span<const double> x) const;
  double a_minus() const noexcept { return field_.lower(); }
  double a_plus() const noexcept { return field_.upper(); }
  const ScalarField& field() const noexcept { return field_; }

private:
  ScalarField field_;
};

}  // namespace musielak

#endif
