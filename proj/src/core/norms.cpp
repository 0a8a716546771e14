#include "core/norms.hpp"

#include "core/errors.hpp"
#include "core/multiindex.hpp"
#include "core/quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace musielak {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double node_weight(const Domain& dom, std::span<const int> idx) {
  double w = dom.cell_volume();
  for (int a = 0; a < dom.dim(); ++a) {
    const int i = idx[static_cast<std::size_t>(a)];
    if (i == 0 || i == dom.nodes(a) - 1) w *= 0.5;
  }
  return w;
}

template <class Value>
QuadSample sample_impl(const GridFunction& u, const SupportBox& box, Value&& value_of) {
  const Domain& dom = u.domain();
  const int dim = dom.dim();
  QuadSample q;
  q.dim = dim;
  const std::size_t count = box.node_count();
  q.weight.reserve(count);
  q.value.reserve(count);
  q.coords.reserve(count * static_cast<std::size_t>(dim));
  for_each_in_box(dom, box, [&](std::size_t flat, std::span<const int> idx) {
    q.weight.push_back(node_weight(dom, idx));
    const double v = std::abs(value_of(flat));
    q.value.push_back(v);
    if (v > q.max_value) q.max_value = v;
    for (int a = 0; a < dim; ++a) q.coords.push_back(dom.coord(a, idx[static_cast<std::size_t>(a)]));
  });
  return q;
}

}  // namespace

QuadSample sample_abs(const GridFunction& u) {
  return sample_impl(u, u.support(), [&](std::size_t flat) { return u.value(flat); });
}

QuadSample sample_abs_difference(const GridFunction& u, const GridFunction& v) {
  require(u.domain().same_grid(v.domain()), ErrorCode::domain_error, "grid functions live on different grids");
  SupportBox box;
  const auto dim = static_cast<std::size_t>(u.domain().dim());
  box.lo.resize(dim);
  box.hi.resize(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    box.lo[a] = std::min(u.support().lo[a], v.support().lo[a]);
    box.hi[a] = std::max(u.support().hi[a], v.support().hi[a]);
  }
  return sample_impl(u, box, [&](std::size_t flat) { return u.value(flat) - v.value(flat); });
}

QuadSample sample_abs_product(const GridFunction& u, const GridFunction& v) {
  require(u.domain().same_grid(v.domain()), ErrorCode::domain_error, "grid functions live on different grids");
  SupportBox box;
  const auto dim = static_cast<std::size_t>(u.domain().dim());
  box.lo.resize(dim);
  box.hi.resize(dim);
  for (std::size_t a = 0; a < dim; ++a) {
    box.lo[a] = std::max(u.support().lo[a], v.support().lo[a]);
    box.hi[a] = std::min(u.support().hi[a], v.support().hi[a]);
    if (box.hi[a] < box.lo[a]) box.hi[a] = box.lo[a];  // disjoint supports: degenerate box, product is 0
  }
  return sample_impl(u, box, [&](std::size_t flat) { return u.value(flat) * v.value(flat); });
}

double modular_sampled_or_inf(const PreparedPhi& phi, const QuadSample& q, double scale) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < q.value.size(); ++i) {
    const double m = phi.eval_or_inf(i, scale * q.value[i]);
    if (!std::isfinite(m)) return kInf;
    acc.add(q.weight[i] * m);
  }
  return acc.value();
}

double modular_sampled(const PreparedPhi& phi, const QuadSample& q, double scale) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < q.value.size(); ++i) {
    const double m = phi.eval_or_inf(i, scale * q.value[i]);
    if (!std::isfinite(m)) {
      std::ostringstream os;
      os << "modular overflow at node (";
      for (int a = 0; a < q.dim; ++a) {
        if (a) os << ", ";
        os << q.coords[i * static_cast<std::size_t>(q.dim) + static_cast<std::size_t>(a)];
      }
      os << "), t = " << scale * q.value[i];
      raise(ErrorCode::range_error, os.str());
    }
    acc.add(q.weight[i] * m);
  }
  return acc.value();
}

double modular(const PhiFunction& phi, const GridFunction& u) { return modular_scaled(phi, u, 1.0); }

double modular_scaled(const PhiFunction& phi, const GridFunction& u, double c) {
  require(c >= 0.0, ErrorCode::invalid_argument, "modular scale must be nonnegative");
  const QuadSample q = sample_abs(u);
  const PreparedPhi prep(phi, q.coords, q.dim);
  return modular_sampled(prep, q, c);
}

double modular_gap(const PhiFunction& phi, const GridFunction& u, const GridFunction& v, double lambda) {
  require(lambda > 0.0, ErrorCode::invalid_argument, "lambda must be positive");
  const QuadSample q = sample_abs_difference(u, v);
  const PreparedPhi prep(phi, q.coords, q.dim);
  return modular_sampled(prep, q, 1.0 / lambda);
}

NormResult luxemburg_solve(const std::function<double(double)>& rho, double scale_hint,
                           const LuxemburgOptions& options) {
  require(options.tol > 0.0, ErrorCode::invalid_argument, "norm tolerance must be positive");
  NormResult result;
  if (scale_hint == 0.0) return result;  // zero function

  int iters = 0;
  auto eval = [&](double lambda) {
    ++iters;
    return rho(lambda);
  };
  auto out_of_budget = [&]() {
    if (iters >= options.max_iterations)
      raise(ErrorCode::no_convergence,
            "Luxemburg solve did not converge within " + std::to_string(options.max_iterations) + " evaluations");
  };

  double lo, hi;
  if (options.warm_lo > 0.0 && options.warm_hi > options.warm_lo) {
    lo = options.warm_lo;
    hi = options.warm_hi;
  } else {
    lo = hi = scale_hint;
  }
  // Establish rho(lo) > 1 >= rho(hi).
  double rho_hi = eval(hi);
  while (rho_hi > 1.0) {
    lo = hi;
    hi *= 2.0;
    out_of_budget();
    rho_hi = eval(hi);
  }
  double rho_lo = lo == hi ? rho_hi : eval(lo);
  while (rho_lo <= 1.0) {
    hi = lo;
    lo *= 0.5;
    require(lo > 1e-300, ErrorCode::no_convergence, "Luxemburg bracket collapsed toward zero");
    out_of_budget();
    rho_lo = eval(lo);
  }

  while (hi - lo > options.tol * std::max(1.0, 0.5 * (hi + lo))) {
    out_of_budget();
    const double mid = 0.5 * (lo + hi);
    if (eval(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }

  result.bracket_lo = lo;
  result.bracket_hi = hi;
  result.value = 0.5 * (lo + hi);
  result.modular_at_value = rho(result.value);
  if (!(result.modular_at_value <= 1.0 + 10.0 * options.tol)) {
    // The midpoint sits on the >1 side of a steep modular; the upper bracket
    // end is certified <= 1.
    result.value = hi;
    result.modular_at_value = rho(hi);
  }
  result.iterations = iters;
  return result;
}

NormResult luxemburg_sampled(const PreparedPhi& phi, const QuadSample& q, double extra_scale,
                             const LuxemburgOptions& options) {
  auto rho = [&](double lambda) { return modular_sampled_or_inf(phi, q, extra_scale / lambda); };
  return luxemburg_solve(rho, extra_scale * q.max_value, options);
}

NormResult luxemburg_norm(const PhiFunction& phi, const GridFunction& u, double tol) {
  const QuadSample q = sample_abs(u);
  const PreparedPhi prep(phi, q.coords, q.dim);
  LuxemburgOptions options;
  options.tol = tol;
  return luxemburg_sampled(prep, q, 1.0, options);
}

NormResult sobolev_norm(const PhiFunction& phi, const GridFunction& u, int m, double tol) {
  require(m >= 0, ErrorCode::invalid_argument, "Sobolev order must be nonnegative");
  const auto alphas = multiindices_up_to(u.domain().dim(), m);
  std::vector<QuadSample> samples;
  std::vector<PreparedPhi> prepared;
  samples.reserve(alphas.size());
  prepared.reserve(alphas.size());
  double hint = 0.0;
  for (const auto& alpha : alphas) {
    const GridFunction d = derivative(u, alpha);
    samples.push_back(sample_abs(d));
    prepared.emplace_back(phi, samples.back().coords, samples.back().dim);
    hint = std::max(hint, samples.back().max_value);
  }
  auto rho = [&](double lambda) {
    CompensatedSum acc;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const double r = modular_sampled_or_inf(prepared[k], samples[k], 1.0 / lambda);
      if (!std::isfinite(r)) return kInf;
      acc.add(r);
    }
    return acc.value();
  };
  LuxemburgOptions options;
  options.tol = tol;
  return luxemburg_solve(rho, hint, options);
}

}  // namespace musielak
