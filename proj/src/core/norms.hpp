#ifndef MUSIELAK_CORE_NORMS_HPP
#define MUSIELAK_CORE_NORMS_HPP

#include "core/domain.hpp"
#include "core/phi.hpp"

#include <functional>

namespace musielak {

struct NormResult {
  double value = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double modular_at_value = 0.0;
  int iterations = 0;
};

/// Flattened quadrature view of |u| over its support box: trapezoidal
/// weights, absolute nodal values, and node coordinates, in the fixed
/// lexicographic order.
struct QuadSample {
  int dim = 0;
  std::vector<double> weight;
  std::vector<double> value;
  std::vector<double> coords;  // [i*dim + axis]
  double max_value = 0.0;
};

QuadSample sample_abs(const GridFunction& u);
QuadSample sample_abs_difference(const GridFunction& u, const GridFunction& v);
QuadSample sample_abs_product(const GridFunction& u, const GridFunction& v);

/// Trapezoidal quadrature of x -> M(x, scale*|u(x)|). The _or_inf variant
/// returns +infinity when any node overflows; the plain variant raises a
/// range error naming the node.
double modular_sampled_or_inf(const PreparedPhi& phi, const QuadSample& q, double scale);
double modular_sampled(const PreparedPhi& phi, const QuadSample& q, double scale);

double modular(const PhiFunction& phi, const GridFunction& u);
double modular_scaled(const PhiFunction& phi, const GridFunction& u, double c);

/// rho_M((u - v)/lambda): the modular-convergence gap of Definition-style
/// sequences.
double modular_gap(const PhiFunction& phi, const GridFunction& u, const GridFunction& v, double lambda);

struct LuxemburgOptions {
  double tol = 1e-10;      // relative bracket width at termination
  int max_iterations = 200;
  double warm_lo = 0.0;    // optional bracket hint (both > 0 to enable)
  double warm_hi = 0.0;
};

/// Solves inf{lambda > 0 : rho(lambda) <= 1} for a nonincreasing rho by
/// geometric bracketing plus bisection. rho may return +infinity (treated
/// as "above 1"). scale_hint ~ sup|u| seeds the bracket; zero means the
/// zero function and short-circuits to norm 0.
NormResult luxemburg_solve(const std::function<double(double)>& rho, double scale_hint,
                           const LuxemburgOptions& options);

NormResult luxemburg_sampled(const PreparedPhi& phi, const QuadSample& q, double extra_scale,
                             const LuxemburgOptions& options);

NormResult luxemburg_norm(const PhiFunction& phi, const GridFunction& u, double tol = 1e-10);

/// inf{lambda : sum_{|alpha| <= m} rho_M(D^alpha u / lambda) <= 1}.
NormResult sobolev_norm(const PhiFunction& phi, const GridFunction& u, int m, double tol = 1e-10);

}  // namespace musielak

#endif
