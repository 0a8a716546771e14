#include "core/domain.hpp"

#include "core/errors.hpp"
#include "core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace musielak {

Domain::Domain(std::vector<double> lower, std::vector<double> upper, std::vector<int> nodes)
    : lo_(std::move(lower)), hi_(std::move(upper)), n_(std::move(nodes)) {
  const std::size_t dim = lo_.size();
  require(dim >= 1, ErrorCode::invalid_argument, "domain needs at least one axis");
  require(hi_.size() == dim && n_.size() == dim, ErrorCode::invalid_argument,
          "domain bounds/node arrays must share the dimension");
  h_.resize(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    require(std::isfinite(lo_[a]) && std::isfinite(hi_[a]) && hi_[a] > lo_[a], ErrorCode::invalid_argument,
            "domain must be bounded with positive extent per axis");
    require(n_[a] >= 2, ErrorCode::invalid_argument, "domain needs >= 2 nodes per axis");
    h_[a] = (hi_[a] - lo_[a]) / static_cast<double>(n_[a] - 1);
    total_ *= static_cast<std::size_t>(n_[a]);
  }
}

std::shared_ptr<const Domain> Domain::create(std::vector<double> lower, std::vector<double> upper,
                                             std::vector<int> nodes) {
  return std::make_shared<const Domain>(std::move(lower), std::move(upper), std::move(nodes));
}

double Domain::coord(int axis, int i) const {
  const auto a = static_cast<std::size_t>(axis);
  // Pin the last node to the upper bound exactly.
  if (i == n_[a] - 1) return hi_[a];
  return lo_[a] + static_cast<double>(i) * h_[a];
}

void Domain::coords_of(std::span<const int> idx, std::span<double> out) const {
  for (int a = 0; a < dim(); ++a) out[static_cast<std::size_t>(a)] = coord(a, idx[static_cast<std::size_t>(a)]);
}

std::size_t Domain::flat_index(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < lo_.size(); ++a) flat = flat * static_cast<std::size_t>(n_[a]) + static_cast<std::size_t>(idx[a]);
  return flat;
}

void Domain::unflatten(std::size_t flat, std::span<int> idx) const {
  for (std::size_t a = lo_.size(); a-- > 0;) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(n_[a]));
    flat /= static_cast<std::size_t>(n_[a]);
  }
}

double Domain::diameter() const {
  double sum = 0.0;
  for (std::size_t a = 0; a < lo_.size(); ++a) {
    const double e = hi_[a] - lo_[a];
    sum += e * e;
  }
  return std::sqrt(sum);
}

double Domain::cell_volume() const {
  double v = 1.0;
  for (double h : h_) v *= h;
  return v;
}

bool Domain::same_grid(const Domain& other) const {
  return lo_ == other.lo_ && hi_ == other.hi_ && n_ == other.n_;
}

SupportBox SupportBox::full(const Domain& dom) {
  SupportBox box;
  box.lo.assign(static_cast<std::size_t>(dom.dim()), 0);
  box.hi.resize(static_cast<std::size_t>(dom.dim()));
  for (int a = 0; a < dom.dim(); ++a) box.hi[static_cast<std::size_t>(a)] = dom.nodes(a) - 1;
  box.strictly_interior = false;
  return box;
}

std::size_t SupportBox::node_count() const {
  std::size_t total = 1;
  for (std::size_t a = 0; a < lo.size(); ++a) total *= static_cast<std::size_t>(hi[a] - lo[a] + 1);
  return total;
}

SupportBox SupportBox::grown(const Domain& dom, std::span<const int> cells) const {
  SupportBox box = *this;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    box.lo[a] = std::max(0, lo[a] - cells[a]);
    box.hi[a] = std::min(dom.nodes(static_cast<int>(a)) - 1, hi[a] + cells[a]);
  }
  box.strictly_interior = strictly_interior && !box.touches_boundary(dom);
  return box;
}

bool SupportBox::touches_boundary(const Domain& dom) const {
  for (std::size_t a = 0; a < lo.size(); ++a)
    if (lo[a] <= 0 || hi[a] >= dom.nodes(static_cast<int>(a)) - 1) return true;
  return false;
}

GridFunction GridFunction::nodal(std::shared_ptr<const Domain> dom, std::vector<double> values, SupportBox support) {
  require(static_cast<bool>(dom), ErrorCode::invalid_argument, "grid function needs a domain");
  require(values.size() == dom->num_nodes(), ErrorCode::invalid_argument, "nodal value count mismatch");
  GridFunction u;
  u.dom_ = std::move(dom);
  u.values_ = std::move(values);
  u.support_ = std::move(support);
  return u;
}

GridFunction GridFunction::from_analytic(std::shared_ptr<const Domain> dom, AnalyticEval eval, int derivative_order,
                                         SupportBox support) {
  require(static_cast<bool>(dom), ErrorCode::invalid_argument, "grid function needs a domain");
  require(static_cast<bool>(eval), ErrorCode::invalid_argument, "analytic evaluator must be set");
  GridFunction u;
  u.dom_ = std::move(dom);
  u.values_.assign(u.dom_->num_nodes(), 0.0);
  u.support_ = std::move(support);
  u.analytic_ = std::move(eval);
  u.analytic_order_ = derivative_order;
  const MultiIndex zero = MultiIndex::zero(u.dom_->dim());
  std::vector<double> x(static_cast<std::size_t>(u.dom_->dim()));
  for_each_in_box(*u.dom_, u.support_, [&](std::size_t flat, std::span<const int> idx) {
    u.dom_->coords_of(idx, x);
    u.values_[flat] = u.analytic_(x, zero);
  });
  return u;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::boundary_max_abs() const {
  const int dim = dom_->dim();
  std::vector<int> idx(static_cast<std::size_t>(dim));
  double m = 0.0;
  for (std::size_t flat = 0; flat < values_.size(); ++flat) {
    dom_->unflatten(flat, idx);
    bool on_boundary = false;
    for (int a = 0; a < dim; ++a)
      if (idx[static_cast<std::size_t>(a)] == 0 || idx[static_cast<std::size_t>(a)] == dom_->nodes(a) - 1) {
        on_boundary = true;
        break;
      }
    if (on_boundary) m = std::max(m, std::abs(values_[flat]));
  }
  return m;
}

namespace {

// 1D bump profile b(s) and its first two derivatives.
double bump_profile(BumpKind kind, int k, double s, int order) {
  const double s2 = s * s;
  if (kind == BumpKind::smooth_exp) {
    // Below this margin the value underflows and 1/den^2 can overflow.
    if (s2 >= 1.0 - 1e-8) return 0.0;
    const double den = 1.0 - s2;
    const double b = std::exp(1.0 - 1.0 / den);
    if (order == 0) return b;
    const double gp = -2.0 * s / (den * den);
    if (order == 1) return b * gp;
    const double gpp = -2.0 / (den * den) - 8.0 * s2 / (den * den * den);
    return b * (gpp + gp * gp);
  }
  if (s2 >= 1.0) return 0.0;
  const double den = 1.0 - s2;
  const double kk = static_cast<double>(k);
  if (order == 0) return std::pow(den, kk);
  if (order == 1) return -2.0 * kk * s * std::pow(den, kk - 1.0);
  return -2.0 * kk * std::pow(den, kk - 1.0) + 4.0 * kk * (kk - 1.0) * s2 * std::pow(den, kk - 2.0);
}

}  // namespace

GridFunction make_bump(std::shared_ptr<const Domain> dom, std::vector<double> center, std::vector<double> widths,
                       BumpKind kind, int poly_k) {
  const int dim = dom->dim();
  require(static_cast<int>(center.size()) == dim && static_cast<int>(widths.size()) == dim,
          ErrorCode::invalid_argument, "bump center/width dimension mismatch");
  if (kind == BumpKind::poly)
    require(poly_k >= 1, ErrorCode::invalid_argument, "poly bump exponent must be >= 1");
  SupportBox box;
  box.lo.resize(static_cast<std::size_t>(dim));
  box.hi.resize(static_cast<std::size_t>(dim));
  box.strictly_interior = true;
  for (int a = 0; a < dim; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    require(widths[ai] > 0.0, ErrorCode::invalid_argument, "bump widths must be positive");
    require(center[ai] - widths[ai] > dom->lower(a) && center[ai] + widths[ai] < dom->upper(a),
            ErrorCode::geometry_error, "bump support escapes the domain on axis " + std::to_string(a));
    const double h = dom->spacing(a);
    box.lo[ai] = std::max(0, static_cast<int>(std::ceil((center[ai] - widths[ai] - dom->lower(a)) / h)));
    box.hi[ai] = std::min(dom->nodes(a) - 1, static_cast<int>(std::floor((center[ai] + widths[ai] - dom->lower(a)) / h)));
  }
  auto eval = [dim, kind, poly_k, c = std::move(center), w = std::move(widths)](std::span<const double> x,
                                                                                const MultiIndex& alpha) {
    require(alpha.order() <= 2, ErrorCode::unsupported_order,
            "bump analytic derivatives are attached up to order 2");
    double prod = 1.0;
    for (int a = 0; a < dim; ++a) {
      const auto ai = static_cast<std::size_t>(a);
      const double s = (x[ai] - c[ai]) / w[ai];
      double f = bump_profile(kind, poly_k, s, alpha[a]);
      for (int d = 0; d < alpha[a]; ++d) f /= w[ai];
      prod *= f;
      if (prod == 0.0) return 0.0;
    }
    return prod;
  };
  return GridFunction::from_analytic(std::move(dom), std::move(eval), 2, std::move(box));
}

GridFunction make_product_sine(std::shared_ptr<const Domain> dom) {
  const int dim = dom->dim();
  std::vector<double> lo(static_cast<std::size_t>(dim)), len(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    lo[static_cast<std::size_t>(a)] = dom->lower(a);
    len[static_cast<std::size_t>(a)] = dom->upper(a) - dom->lower(a);
  }
  auto eval = [dim, lo = std::move(lo), len = std::move(len)](std::span<const double> x, const MultiIndex& alpha) {
    double prod = 1.0;
    for (int a = 0; a < dim; ++a) {
      const auto ai = static_cast<std::size_t>(a);
      const double freq = std::numbers::pi / len[ai];
      const double arg = freq * (x[ai] - lo[ai]);
      // d^k/dx^k sin = freq^k sin(arg + k pi/2)
      double f = std::sin(arg + 0.5 * std::numbers::pi * alpha[a]);
      for (int d = 0; d < alpha[a]; ++d) f *= freq;
      prod *= f;
    }
    return prod;
  };
  SupportBox box = SupportBox::full(*dom);
  return GridFunction::from_analytic(std::move(dom), std::move(eval), 4, std::move(box));
}

GridFunction make_constant(std::shared_ptr<const Domain> dom, double value) {
  auto eval = [value](std::span<const double>, const MultiIndex& alpha) {
    return alpha.order() == 0 ? value : 0.0;
  };
  SupportBox box = SupportBox::full(*dom);
  return GridFunction::from_analytic(std::move(dom), std::move(eval), 99, std::move(box));
}

GridFunction make_coordinate(std::shared_ptr<const Domain> dom, int axis) {
  require(axis >= 0 && axis < dom->dim(), ErrorCode::invalid_argument, "axis out of range");
  auto eval = [axis](std::span<const double> x, const MultiIndex& alpha) {
    if (alpha.order() == 0) return x[static_cast<std::size_t>(axis)];
    if (alpha.order() == 1 && alpha[axis] == 1) return 1.0;
    return 0.0;
  };
  SupportBox box = SupportBox::full(*dom);
  return GridFunction::from_analytic(std::move(dom), std::move(eval), 99, std::move(box));
}

namespace {

// In-place axis derivative: order 1 or 2, second-order stencils throughout
// (central interior, one-sided at the two domain edges).
void apply_axis_derivative(const Domain& dom, std::vector<double>& values, int axis, int order) {
  const int n = dom.nodes(axis);
  require(n >= 4, ErrorCode::unsupported_order, "finite differences need >= 4 nodes per axis");
  const double h = dom.spacing(axis);
  // Stride of the axis in the flattened (row-major) layout.
  std::size_t stride = 1;
  for (int a = dom.dim() - 1; a > axis; --a) stride *= static_cast<std::size_t>(dom.nodes(a));
  const std::size_t block = stride * static_cast<std::size_t>(n);
  std::vector<double> line(static_cast<std::size_t>(n));
  for (std::size_t base = 0; base < dom.num_nodes(); base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      double* p = values.data() + base + off;
      for (int i = 0; i < n; ++i) line[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i) * stride];
      if (order == 1) {
        const double inv2h = 1.0 / (2.0 * h);
        p[0] = (-3.0 * line[0] + 4.0 * line[1] - line[2]) * inv2h;
        for (int i = 1; i < n - 1; ++i)
          p[static_cast<std::size_t>(i) * stride] =
              (line[static_cast<std::size_t>(i + 1)] - line[static_cast<std::size_t>(i - 1)]) * inv2h;
        p[static_cast<std::size_t>(n - 1) * stride] =
            (3.0 * line[static_cast<std::size_t>(n - 1)] - 4.0 * line[static_cast<std::size_t>(n - 2)] +
             line[static_cast<std::size_t>(n - 3)]) *
            inv2h;
      } else {
        const double invh2 = 1.0 / (h * h);
        p[0] = (2.0 * line[0] - 5.0 * line[1] + 4.0 * line[2] - line[3]) * invh2;
        for (int i = 1; i < n - 1; ++i)
          p[static_cast<std::size_t>(i) * stride] = (line[static_cast<std::size_t>(i - 1)] -
                                                     2.0 * line[static_cast<std::size_t>(i)] +
                                                     line[static_cast<std::size_t>(i + 1)]) *
                                                    invh2;
        p[static_cast<std::size_t>(n - 1) * stride] =
            (2.0 * line[static_cast<std::size_t>(n - 1)] - 5.0 * line[static_cast<std::size_t>(n - 2)] +
             4.0 * line[static_cast<std::size_t>(n - 3)] - line[static_cast<std::size_t>(n - 4)]) *
            invh2;
      }
    }
  }
}

}  // namespace

GridFunction derivative(const GridFunction& u, const MultiIndex& alpha) {
  const Domain& dom = u.domain();
  require(alpha.dim() == dom.dim(), ErrorCode::invalid_argument, "multi-index dimension mismatch");
  const int order = alpha.order();
  if (order == 0) return u;

  if (u.has_analytic(order)) {
    auto eval = [f = u.analytic_eval(), alpha](std::span<const double> x, const MultiIndex& beta) {
      return f(x, alpha + beta);
    };
    return GridFunction::from_analytic(u.domain_ptr(), std::move(eval), u.analytic_order() - order, u.support());
  }

  require(order <= 2, ErrorCode::unsupported_order,
          "finite-difference derivatives are limited to |alpha| <= 2 (got " + alpha.to_string() + ")");
  std::vector<double> values = u.values();
  std::vector<int> grow(static_cast<std::size_t>(dom.dim()), 0);
  for (int a = 0; a < dom.dim(); ++a) {
    if (alpha[a] == 0) continue;
    apply_axis_derivative(dom, values, a, alpha[a]);
    grow[static_cast<std::size_t>(a)] = 1;
  }
  return GridFunction::nodal(u.domain_ptr(), std::move(values), u.support().grown(dom, grow));
}

GridFunction scale(const GridFunction& u, double s) {
  if (u.has_analytic(0)) {
    auto eval = [f = u.analytic_eval(), s](std::span<const double> x, const MultiIndex& beta) {
      return s * f(x, beta);
    };
    return GridFunction::from_analytic(u.domain_ptr(), std::move(eval), u.analytic_order(), u.support());
  }
  std::vector<double> values = u.values();
  for (double& v : values) v *= s;
  return GridFunction::nodal(u.domain_ptr(), std::move(values), u.support());
}

GridFunction subtract(const GridFunction& u, const GridFunction& v) {
  require(u.domain().same_grid(v.domain()), ErrorCode::domain_error, "grid functions live on different grids");
  std::vector<double> values(u.values());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= v.value(i);
  SupportBox box;
  const auto dim = static_cast<std::size_t>(u.domain().dim());
  box.lo.resize(dim);
  box.hi.resize(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    box.lo[a] = std::min(u.support().lo[a], v.support().lo[a]);
    box.hi[a] = std::max(u.support().hi[a], v.support().hi[a]);
  }
  box.strictly_interior = u.support().strictly_interior && v.support().strictly_interior;
  return GridFunction::nodal(u.domain_ptr(), std::move(values), std::move(box));
}

double interpolate(const GridFunction& u, std::span<const double> x) {
  const Domain& dom = u.domain();
  const int dim = dom.dim();
  std::vector<std::size_t> base(static_cast<std::size_t>(dim));
  std::vector<double> frac(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    if (x[ai] < dom.lower(a) || x[ai] > dom.upper(a)) return 0.0;
    const double t = (x[ai] - dom.lower(a)) / dom.spacing(a);
    auto i = static_cast<std::size_t>(std::min<double>(std::floor(t), static_cast<double>(dom.nodes(a) - 2)));
    base[ai] = i;
    frac[ai] = t - static_cast<double>(i);
  }
  double result = 0.0;
  const std::size_t corners = std::size_t{1} << dim;
  for (std::size_t corner = 0; corner < corners; ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a) {
      const auto ai = static_cast<std::size_t>(a);
      const bool high = (corner >> ai) & 1u;
      w *= high ? frac[ai] : 1.0 - frac[ai];
      flat = flat * static_cast<std::size_t>(dom.nodes(a)) + base[ai] + (high ? 1 : 0);
    }
    result += w * u.value(flat);
  }
  return result;
}

GridFunction mollify(const GridFunction& u, double epsilon, std::span<const double> shift) {
  const Domain& dom = u.domain();
  const int dim = dom.dim();
  require(epsilon > 0.0, ErrorCode::invalid_argument, "mollification radius must be positive");
  require(static_cast<int>(shift.size()) == dim, ErrorCode::invalid_argument, "shift dimension mismatch");

  // Geometry: the translated-and-fattened support must stay inside the box.
  SupportBox out_box;
  out_box.lo.resize(static_cast<std::size_t>(dim));
  out_box.hi.resize(static_cast<std::size_t>(dim));
  bool strict = true;
  for (int a = 0; a < dim; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    const double s_lo = dom.coord(a, u.support().lo[ai]) + shift[ai] - epsilon;
    const double s_hi = dom.coord(a, u.support().hi[ai]) + shift[ai] + epsilon;
    const double tol = 1e-12 * (dom.upper(a) - dom.lower(a));
    require(s_lo >= dom.lower(a) - tol && s_hi <= dom.upper(a) + tol, ErrorCode::geometry_error,
            "mollified support escapes the domain on axis " + std::to_string(a));
    strict = strict && s_lo > dom.lower(a) && s_hi < dom.upper(a);
    const double h = dom.spacing(a);
    out_box.lo[ai] = std::max(0, static_cast<int>(std::floor((s_lo - dom.lower(a)) / h)));
    out_box.hi[ai] = std::min(dom.nodes(a) - 1, static_cast<int>(std::ceil((s_hi - dom.lower(a)) / h)));
  }
  out_box.strictly_interior = strict;

  // Kernel on lattice offsets inside the radius-epsilon ball, normalized so
  // the discrete quadrature sum is exactly 1.
  std::vector<int> kmax(static_cast<std::size_t>(dim));
  std::vector<int> kdims(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    kmax[static_cast<std::size_t>(a)] = static_cast<int>(std::floor(epsilon / dom.spacing(a)));
    kdims[static_cast<std::size_t>(a)] = 2 * kmax[static_cast<std::size_t>(a)] + 1;
  }
  std::vector<std::vector<int>> offsets;
  std::vector<double> kernel;
  {
    std::vector<int> k(static_cast<std::size_t>(dim));
    std::size_t total = 1;
    for (int d : kdims) total *= static_cast<std::size_t>(d);
    CompensatedSum wsum;
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      double r2 = 0.0;
      for (int a = dim - 1; a >= 0; --a) {
        const auto ai = static_cast<std::size_t>(a);
        k[ai] = static_cast<int>(rest % static_cast<std::size_t>(kdims[ai])) - kmax[ai];
        rest /= static_cast<std::size_t>(kdims[ai]);
        const double y = static_cast<double>(k[ai]) * dom.spacing(a);
        r2 += y * y;
      }
      const double rho = std::sqrt(r2) / epsilon;
      const double w = bump_profile(BumpKind::smooth_exp, 0, rho, 0);
      if (w > 0.0) {
        offsets.push_back(k);
        kernel.push_back(w);
        wsum.add(w);
      }
    }
    const double norm = wsum.value();
    if (norm > 0.0)
      for (double& w : kernel) w /= norm;
  }
  if (kernel.empty()) {  // radius below the grid spacing: identity kernel
    offsets.push_back(std::vector<int>(static_cast<std::size_t>(dim), 0));
    kernel.push_back(1.0);
  }

  // Lattice-aligned shifts avoid interpolation entirely.
  bool lattice_shift = true;
  std::vector<int> ishift(static_cast<std::size_t>(dim), 0);
  for (int a = 0; a < dim; ++a) {
    const double steps = shift[static_cast<std::size_t>(a)] / dom.spacing(a);
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) < 1e-9) {
      ishift[static_cast<std::size_t>(a)] = static_cast<int>(rounded);
    } else {
      lattice_shift = false;
      break;
    }
  }

  std::vector<double> result(dom.num_nodes(), 0.0);
  std::vector<int> src(static_cast<std::size_t>(dim));
  std::vector<double> point(static_cast<std::size_t>(dim));
  for_each_in_box(dom, out_box, [&](std::size_t flat, std::span<const int> idx) {
    CompensatedSum acc;
    for (std::size_t ki = 0; ki < kernel.size(); ++ki) {
      if (lattice_shift) {
        bool inside = true;
        for (int a = 0; a < dim && inside; ++a) {
          const auto ai = static_cast<std::size_t>(a);
          src[ai] = idx[ai] - offsets[ki][ai] - ishift[ai];
          inside = src[ai] >= 0 && src[ai] < dom.nodes(a);
        }
        if (inside) acc.add(kernel[ki] * u.value(dom.flat_index(src)));
      } else {
        for (int a = 0; a < dim; ++a) {
          const auto ai = static_cast<std::size_t>(a);
          point[ai] = dom.coord(a, idx[ai]) - static_cast<double>(offsets[ki][ai]) * dom.spacing(a) - shift[ai];
        }
        acc.add(kernel[ki] * interpolate(u, point));
      }
    }
    result[flat] = acc.value();
  });
  return GridFunction::nodal(u.domain_ptr(), std::move(result), std::move(out_box));
}

void export_csv(const GridFunction& u, std::ostream& out) {
  const Domain& dom = u.domain();
  const int dim = dom.dim();
  for (int a = 0; a < dim; ++a) out << "x" << (a + 1) << ",";
  out << "value\n";
  std::vector<int> idx(static_cast<std::size_t>(dim));
  out.precision(17);
  for (std::size_t flat = 0; flat < dom.num_nodes(); ++flat) {
    dom.unflatten(flat, idx);
    for (int a = 0; a < dim; ++a) out << dom.coord(a, idx[static_cast<std::size_t>(a)]) << ",";
    out << u.value(flat) << "\n";
  }
}

}  // namespace musielak
