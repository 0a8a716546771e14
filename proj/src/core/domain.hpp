#ifndef MUSIELAK_CORE_DOMAIN_HPP
#define MUSIELAK_CORE_DOMAIN_HPP

#include "core/multiindex.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace musielak {

/// Axis-aligned bounded box with a uniform node lattice per axis.
/// Immutable; shared by grid functions via shared_ptr.
class Domain {
public:
  Domain(std::vector<double> lower, std::vector<double> upper, std::vector<int> nodes);

  static std::shared_ptr<const Domain> create(std::vector<double> lower, std::vector<double> upper,
                                              std::vector<int> nodes);

  int dim() const noexcept { return static_cast<int>(lo_.size()); }
  double lower(int axis) const { return lo_[static_cast<std::size_t>(axis)]; }
  double upper(int axis) const { return hi_[static_cast<std::size_t>(axis)]; }
  int nodes(int axis) const { return n_[static_cast<std::size_t>(axis)]; }
  double spacing(int axis) const { return h_[static_cast<std::size_t>(axis)]; }
  std::size_t num_nodes() const noexcept { return total_; }

  double coord(int axis, int i) const;
  void coords_of(std::span<const int> idx, std::span<double> out) const;
  std::size_t flat_index(std::span<const int> idx) const;
  void unflatten(std::size_t flat, std::span<int> idx) const;

  /// Euclidean diameter of the box (the diagonal).
  double diameter() const;
  double cell_volume() const;

  bool same_grid(const Domain& other) const;

private:
  std::vector<double> lo_, hi_, h_;
  std::vector<int> n_;
  std::size_t total_ = 1;
};

/// Inclusive node-index box outside of which a grid function vanishes.
struct SupportBox {
  std::vector<int> lo, hi;
  bool strictly_interior = false;

  static SupportBox full(const Domain& dom);
  std::size_t node_count() const;
  SupportBox grown(const Domain& dom, std::span<const int> cells) const;
  bool touches_boundary(const Domain& dom) const;
};

/// x -> D^alpha u(x); alpha = 0 gives the value itself.
using AnalyticEval = std::function<double(std::span<const double>, const MultiIndex&)>;

/// Nodal samples of a function on a Domain, with an optional analytic
/// evaluator for exact derivatives and a support descriptor.
class GridFunction {
public:
  static GridFunction nodal(std::shared_ptr<const Domain> dom, std::vector<double> values, SupportBox support);
  static GridFunction from_analytic(std::shared_ptr<const Domain> dom, AnalyticEval eval, int derivative_order,
                                    SupportBox support);

  const Domain& domain() const noexcept { return *dom_; }
  const std::shared_ptr<const Domain>& domain_ptr() const noexcept { return dom_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double value(std::size_t flat) const { return values_[flat]; }
  const SupportBox& support() const noexcept { return support_; }

  bool has_analytic(int order) const noexcept { return analytic_ && order <= analytic_order_; }
  double analytic_value(std::span<const double> x, const MultiIndex& alpha) const { return analytic_(x, alpha); }
  const AnalyticEval& analytic_eval() const noexcept { return analytic_; }
  int analytic_order() const noexcept { return analytic_order_; }

  double max_abs() const;
  double boundary_max_abs() const;

private:
  GridFunction() = default;

  std::shared_ptr<const Domain> dom_;
  std::vector<double> values_;
  SupportBox support_;
  AnalyticEval analytic_;
  int analytic_order_ = -1;
};

enum class BumpKind { smooth_exp, poly };

/// Tensor-product bump u(x) = prod_a b((x_a - c_a)/w_a) with unit peak.
/// smooth_exp: b(s) = exp(1 - 1/(1-s^2)); poly: b(s) = (1-s^2)^k. Analytic
/// partial derivatives to order 2 are attached. The box {|x_a - c_a| < w_a}
/// must be strictly inside the domain.
GridFunction make_bump(std::shared_ptr<const Domain> dom, std::vector<double> center, std::vector<double> widths,
                       BumpKind kind, int poly_k = 4);

/// prod_a sin(pi (x_a - lo_a)/(hi_a - lo_a)): vanishes on the boundary.
GridFunction make_product_sine(std::shared_ptr<const Domain> dom);
GridFunction make_constant(std::shared_ptr<const Domain> dom, double value);
GridFunction make_coordinate(std::shared_ptr<const Domain> dom, int axis);

/// D^alpha u. Uses the attached analytic evaluator when it covers |alpha|;
/// otherwise second-order finite differences (central in the interior,
/// one-sided at the domain edges), limited to |alpha| <= 2.
GridFunction derivative(const GridFunction& u, const MultiIndex& alpha);

/// Scalar multiple s*u (nodal values and analytic evaluator both scaled).
GridFunction scale(const GridFunction& u, double s);

/// u - v on a shared grid.
GridFunction subtract(const GridFunction& u, const GridFunction& v);

/// Discrete mollification of the translate u(. - shift) with the normalized
/// radial smooth kernel of support radius epsilon. The shifted-and-fattened
/// support must stay inside the domain box.
GridFunction mollify(const GridFunction& u, double epsilon, std::span<const double> shift);

/// Multilinear interpolation of nodal values at an arbitrary point;
/// zero outside the domain box.
double interpolate(const GridFunction& u, std::span<const double> x);

/// Visits every node of the index box in lexicographic order.
template <class Fn>
void for_each_in_box(const Domain& dom, const SupportBox& box, Fn&& fn) {
  const int dim = dom.dim();
  std::vector<int> idx(box.lo.begin(), box.lo.end());
  for (;;) {
    fn(dom.flat_index(idx), std::span<const int>(idx));
    int a = dim - 1;
    for (; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] <= box.hi[static_cast<std::size_t>(a)]) break;
      idx[static_cast<std::size_t>(a)] = box.lo[static_cast<std::size_t>(a)];
    }
    if (a < 0) return;
  }
}

/// CSV rows "x1,...,xN,value" over all nodes in lexicographic order.
void export_csv(const GridFunction& u, std::ostream& out);

}  // namespace musielak

#endif
