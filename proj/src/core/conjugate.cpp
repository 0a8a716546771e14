#include "core/conjugate.hpp"

#include "core/errors.hpp"
#include "core/quadrature.hpp"

#include <cmath>
#include <limits>

namespace musielak {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

// Golden-section maximization of a concave f on [a, b]; relative width tol.
// Returns the midpoint of the final bracket.
double golden_max(const std::function<double(double)>& f, double a, double b, double tol, int max_iter = 500) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  int iter = 0;
  while (b - a > tol * std::max(1.0, std::abs(b)) && iter++ < max_iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    g[static_cast<std::size_t>(i)] =
        i == count - 1 ? hi : std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return g;
}

}  // namespace

ConjugateResult conjugate(const PhiFunction& phi, std::span<const double> x, double s, double tol) {
  require(s >= 0.0, ErrorCode::invalid_argument, "conjugate argument s must be nonnegative");
  require(tol > 0.0, ErrorCode::invalid_argument, "conjugate tolerance must be positive");
  ConjugateResult result;
  if (s == 0.0) return result;  // sup_t { -M(x,t) } = 0 at t* = 0

  auto objective = [&](double t) {
    const double m = phi.evaluate_or_inf(x, t);
    return std::isfinite(m) ? s * t - m : -kInf;
  };

  // Expand until the objective decreases across a doubling; concavity then
  // confines the maximizer to [0, hi].
  double b = 1.0, fb = objective(1.0);
  for (;;) {
    const double b2 = 2.0 * b;
    const double f2 = objective(b2);
    if (f2 < fb) break;
    b = b2;
    fb = f2;
    require(b < 1e120, ErrorCode::range_error,
            "conjugate objective keeps increasing; M fails the superlinear growth of a Phi-function");
  }
  const double hi = 2.0 * b;

  const double t_star = golden_max(objective, 0.0, hi, tol);
  const double value = objective(t_star);
  if (value > 0.0) {
    result.value = value;
    result.argmax = t_star;
  }  // else: the sup is attained at t = 0 with value 0
  result.bracket_width = tol * std::max(1.0, hi);
  return result;
}

YoungReport young_check(const PhiFunction& phi, std::span<const YoungTriple> triples, double tol) {
  YoungReport report;
  report.count = triples.size();
  report.worst_margin = kInf;
  for (const auto& triple : triples) {
    require(triple.u >= 0.0 && triple.v >= 0.0, ErrorCode::invalid_argument,
            "Young check needs nonnegative u, v");
    const double lhs = triple.u * triple.v;
    const double rhs = phi.evaluate(triple.x, triple.u) + conjugate(phi, triple.x, triple.v, tol).value;
    const double margin = (rhs - lhs) / std::max(1.0, lhs);
    if (margin < report.worst_margin) {
      report.worst_margin = margin;
      report.worst = triple;
      report.worst_lhs = lhs;
      report.worst_rhs = rhs;
    }
  }
  if (triples.empty()) report.worst_margin = 0.0;
  report.pass = report.worst_margin >= -tol;
  return report;
}

HolderReport holder_check(const PhiFunction& phi, const GridFunction& u, const GridFunction& v, double tol,
                          double solver_tol) {
  HolderReport report;
  {
    const QuadSample prod = sample_abs_product(u, v);
    CompensatedSum acc;
    for (std::size_t i = 0; i < prod.value.size(); ++i) acc.add(prod.weight[i] * prod.value[i]);
    report.lhs = acc.value();
  }
  report.norm_u = luxemburg_norm(phi, u, solver_tol).value;

  const QuadSample qv = sample_abs(v);
  const auto dim = static_cast<std::size_t>(qv.dim);
  auto rho_conjugate = [&](double lambda) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < qv.value.size(); ++i) {
      const std::span<const double> xi(qv.coords.data() + i * dim, dim);
      acc.add(qv.weight[i] * conjugate(phi, xi, qv.value[i] / lambda, solver_tol).value);
    }
    return acc.value();
  };
  LuxemburgOptions options;
  options.tol = solver_tol;
  report.norm_v_conjugate = luxemburg_solve(rho_conjugate, qv.max_value, options).value;

  report.rhs = 2.0 * report.norm_u * report.norm_v_conjugate;
  report.margin = (report.rhs - report.lhs) / std::max(1.0, report.rhs);
  report.pass = report.lhs <= report.rhs * (1.0 + tol) + tol;
  return report;
}

BiconjugateAudit biconjugate_audit(const PhiFunction& phi, std::span<const double> x, double t, double tol,
                                   int audit_probes) {
  BiconjugateAudit audit;
  audit.target = phi.evaluate(x, t);

  auto g = [&](double s) { return t * s - conjugate(phi, x, s, tol).value; };

  const auto probes = log_grid(1e-6, 1e6, audit_probes);
  double best = g(0.0);
  std::size_t best_idx = 0;
  bool best_is_probe = false;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double gi = g(probes[i]);
    if (gi > best) {
      best = gi;
      best_idx = i;
      best_is_probe = true;
    }
  }
  // The probe grid alone leaves a gap ~ (grid step)^2 at the concave peak;
  // refine around the best probe to make the two-sided bracket attainable.
  double lo = 0.0, hi = probes.front();
  if (best_is_probe) {
    lo = best_idx > 0 ? probes[best_idx - 1] : 0.0;
    hi = best_idx + 1 < probes.size() ? probes[best_idx + 1] : probes.back() * 2.0;
  }
  const double s_ref = golden_max(g, lo, hi, tol);
  best = std::max(best, g(s_ref));

  audit.supremum = best;
  const double scale = std::max(1.0, std::abs(audit.target));
  audit.pass = best <= audit.target + 10.0 * tol * scale && best >= audit.target - 1e3 * tol * scale;
  return audit;
}

}  // namespace musielak
