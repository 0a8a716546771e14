#include "core/poincare.hpp"

#include "core/errors.hpp"
#include "core/multiindex.hpp"
#include "core/parallel.hpp"
#include "core/quadrature.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace musielak {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_boundary_vanishing(const GridFunction& u) {
  if (u.support().strictly_interior) return;
  const double scale = u.max_abs();
  require(u.boundary_max_abs() <= 1e-9 * std::max(1e-300, scale), ErrorCode::geometry_error,
          "Poincare verification needs a compactly supported (boundary-vanishing) test function");
}

double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs == 0.0 ? 0.0 : kInf;
}

Verdict inequality_verdict(double lhs, double rhs, double tol) {
  return lhs <= rhs * (1.0 + tol) ? Verdict::pass : Verdict::fail;
}

}  // namespace

double poincare_constant(const Domain& dom, int m) {
  require(m >= 1, ErrorCode::invalid_argument, "Poincare order m must be >= 1");
  const double two_d = 2.0 * dom.diameter();
  return two_d * std::pow(std::max(1.0, two_d), static_cast<double>(m - 1));
}

double poincare_norm_constant(const Domain& dom, int m) {
  return poincare_constant(dom, m) * (1.0 + static_cast<double>(count_multiindices_of_order(dom.dim(), m)));
}

PoincareReport verify_modular_poincare(const PhiFunction& phi, const GridFunction& u, int m,
                                       std::optional<double> c, double tol) {
  require(m >= 1, ErrorCode::invalid_argument, "Poincare order m must be >= 1");
  require_boundary_vanishing(u);
  PoincareReport report;
  report.m = m;
  report.tol = tol;
  report.c_used = c.value_or(poincare_constant(u.domain(), m));
  require(report.c_used > 0.0, ErrorCode::invalid_argument, "constant c must be positive");

  CompensatedSum lhs, rhs;
  for (const auto& alpha : multiindices_up_to(u.domain().dim(), m - 1))
    lhs.add(modular(phi, derivative(u, alpha)));
  for (const auto& alpha : multiindices_of_order(u.domain().dim(), m))
    rhs.add(modular_scaled(phi, derivative(u, alpha), report.c_used));

  report.lhs_modular = lhs.value();
  report.rhs_modular = rhs.value();
  report.ratio = safe_ratio(report.lhs_modular, report.rhs_modular);
  report.modular_verdict = inequality_verdict(report.lhs_modular, report.rhs_modular, tol);
  return report;
}

PoincareReport verify_norm_poincare(const PhiFunction& phi, const GridFunction& u, int m, double tol,
                                    double solver_tol) {
  require(m >= 1, ErrorCode::invalid_argument, "Poincare order m must be >= 1");
  require_boundary_vanishing(u);
  PoincareReport report;
  report.m = m;
  report.tol = tol;
  report.c_used = poincare_constant(u.domain(), m);
  report.has_norm_side = true;
  report.C_m_omega = poincare_norm_constant(u.domain(), m);

  CompensatedSum lhs, rhs;
  for (const auto& alpha : multiindices_up_to(u.domain().dim(), m - 1))
    lhs.add(luxemburg_norm(phi, derivative(u, alpha), solver_tol).value);
  for (const auto& alpha : multiindices_of_order(u.domain().dim(), m))
    rhs.add(luxemburg_norm(phi, derivative(u, alpha), solver_tol).value);

  report.lhs_norm_sum = lhs.value();
  report.rhs_norm_sum = rhs.value();
  report.norm_verdict = inequality_verdict(report.lhs_norm_sum, report.C_m_omega * report.rhs_norm_sum, tol);
  return report;
}

GridFunction BumpSpec::build(std::shared_ptr<const Domain> dom) const {
  const int dim = dom->dim();
  std::vector<double> center(static_cast<std::size_t>(dim)), widths(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    const double extent = dom->upper(a) - dom->lower(a);
    const double cf = center_fractions.size() == 1 ? center_fractions[0] : center_fractions.at(ai);
    const double wf = width_fractions.size() == 1 ? width_fractions[0] : width_fractions.at(ai);
    center[ai] = dom->lower(a) + cf * extent;
    widths[ai] = wf * extent;
  }
  return make_bump(std::move(dom), std::move(center), std::move(widths), kind, poly_k);
}

std::vector<BumpSpec> default_test_functions() {
  return {
      {"se_center", BumpKind::smooth_exp, 4, {0.50}, {0.30}},
      {"se_left", BumpKind::smooth_exp, 4, {0.32}, {0.22}},
      {"se_right", BumpKind::smooth_exp, 4, {0.68}, {0.22}},
      {"se_narrow", BumpKind::smooth_exp, 4, {0.50}, {0.10}},
      {"se_wide", BumpKind::smooth_exp, 4, {0.50}, {0.45}},
      {"p4_center", BumpKind::poly, 4, {0.50}, {0.35}},
      {"p4_off", BumpKind::poly, 4, {0.40}, {0.28}},
  };
}

std::vector<double> default_scalings() {
  std::vector<double> s;
  for (int k = -5; k <= 5; ++k) s.push_back(std::ldexp(1.0, k));
  return s;
}

SearchReport counterexample_search(const PhiFunction& phi, std::shared_ptr<const Domain> dom,
                                   std::span<const BumpSpec> bumps, std::span<const double> scalings, double c) {
  require(c > 0.0, ErrorCode::invalid_argument, "constant c must be positive");
  SearchReport report;
  report.c_used = c;
  const int dim = dom->dim();
  for (const auto& spec : bumps) {
    const GridFunction u = spec.build(dom);
    const QuadSample qu = sample_abs(u);
    const PreparedPhi prep(phi, qu.coords, qu.dim);
    std::vector<QuadSample> grads;
    for (int a = 0; a < dim; ++a) grads.push_back(sample_abs(derivative(u, MultiIndex::unit(dim, a))));
    std::vector<RatioCurvePoint> curve;
    curve.reserve(scalings.size());
    for (double s : scalings) {
      RatioCurvePoint point;
      point.scaling = s;
      point.lhs = modular_sampled(prep, qu, s);
      CompensatedSum rhs;
      for (int a = 0; a < dim; ++a) {
        // Gradient samples share the bump's support box, so the prepared
        // coefficients apply to them as well.
        rhs.add(modular_sampled(prep, grads[static_cast<std::size_t>(a)], c * s));
      }
      point.rhs = rhs.value();
      point.ratio = safe_ratio(point.lhs, point.rhs);
      if (point.ratio > report.sup_ratio) {
        report.sup_ratio = point.ratio;
        report.argmax_id = spec.id;
        report.argmax_scaling = s;
      }
      curve.push_back(point);
    }
    report.curves.emplace_back(spec.id, std::move(curve));
  }
  return report;
}

SweepReport sweep(std::span<const PhiFunction* const> phis, std::shared_ptr<const Domain> dom,
                  std::span<const BumpSpec> bumps, std::span<const double> scalings, const SweepOptions& options) {
  SweepReport report;
  report.m = options.m;
  report.c_used = options.c.value_or(poincare_constant(*dom, options.m));
  report.C_m_omega = poincare_norm_constant(*dom, options.m);
  report.modular_tol = options.modular_tol;
  report.norm_tol = options.norm_tol;
  report.with_norms = options.with_norms;

  const auto t_start = std::chrono::steady_clock::now();
  const std::size_t n_jobs = phis.size() * bumps.size();
  const std::size_t n_scalings = scalings.size();
  report.cells.resize(n_jobs * n_scalings);

  const int dim = dom->dim();
  const auto alphas_below = multiindices_up_to(dim, options.m - 1);
  const auto alphas_at = multiindices_of_order(dim, options.m);

  parallel_for(n_jobs, options.threads, [&](std::size_t job) {
    const PhiFunction& phi = *phis[job / bumps.size()];
    const BumpSpec& spec = bumps[job % bumps.size()];
    SweepCell* cells = report.cells.data() + job * n_scalings;
    for (std::size_t si = 0; si < n_scalings; ++si) {
      cells[si].phi_name = phi.name();
      cells[si].bump_id = spec.id;
      cells[si].scaling = scalings[si];
      cells[si].has_norm_side = options.with_norms;
    }
    try {
      const GridFunction u = spec.build(dom);
      std::vector<QuadSample> below, at;
      for (const auto& alpha : alphas_below) below.push_back(sample_abs(derivative(u, alpha)));
      for (const auto& alpha : alphas_at) at.push_back(sample_abs(derivative(u, alpha)));
      // All derivatives of an analytic bump share its support box, so one
      // prepared coefficient table serves every sample.
      const PreparedPhi prep(phi, below.front().coords, dim);
      std::vector<double> warm_below(below.size(), 0.0), warm_at(at.size(), 0.0);
      double warm_scaling = 0.0;
      for (std::size_t si = 0; si < n_scalings; ++si) {
        SweepCell& cell = cells[si];
        const double s = scalings[si];
        const auto c_start = std::chrono::steady_clock::now();
        try {
          CompensatedSum lhs, rhs;
          for (const auto& q : below) lhs.add(modular_sampled(prep, q, s));
          for (const auto& q : at) rhs.add(modular_sampled(prep, q, report.c_used * s));
          cell.lhs_modular = lhs.value();
          cell.rhs_modular = rhs.value();
          cell.ratio = safe_ratio(cell.lhs_modular, cell.rhs_modular);
          cell.modular_verdict = inequality_verdict(cell.lhs_modular, cell.rhs_modular, options.modular_tol);

          if (options.with_norms) {
            auto solve = [&](const QuadSample& q, double& warm) {
              LuxemburgOptions lux;
              lux.tol = options.solver_tol;
              if (warm > 0.0 && warm_scaling > 0.0) {
                const double predicted = warm * (s / warm_scaling);
                lux.warm_lo = predicted * (1.0 - 2e-3);
                lux.warm_hi = predicted * (1.0 + 2e-3);
              }
              const double value = luxemburg_sampled(prep, q, s, lux).value;
              warm = value;
              return value;
            };
            CompensatedSum lhs_norm, rhs_norm;
            for (std::size_t k = 0; k < below.size(); ++k) lhs_norm.add(solve(below[k], warm_below[k]));
            for (std::size_t k = 0; k < at.size(); ++k) rhs_norm.add(solve(at[k], warm_at[k]));
            warm_scaling = s;
            cell.lhs_norm_sum = lhs_norm.value();
            cell.rhs_norm_sum = rhs_norm.value();
            cell.norm_ratio = safe_ratio(cell.lhs_norm_sum, report.C_m_omega * cell.rhs_norm_sum);
            cell.norm_verdict =
                inequality_verdict(cell.lhs_norm_sum, report.C_m_omega * cell.rhs_norm_sum, options.norm_tol);
          }
        } catch (const std::exception& e) {
          cell.error = e.what();
          warm_scaling = 0.0;  // drop warm starts after a failed cell
        }
        cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - c_start).count();
      }
    } catch (const std::exception& e) {
      for (std::size_t si = 0; si < n_scalings; ++si)
        if (cells[si].error.empty()) cells[si].error = e.what();
    }
  });

  for (const auto& cell : report.cells) {
    if (!cell.error.empty()) {
      ++report.errors;
      continue;
    }
    if (cell.modular_verdict == Verdict::pass) ++report.modular_pass;
    report.worst_ratio = std::max(report.worst_ratio, cell.ratio);
    if (cell.has_norm_side) {
      if (cell.norm_verdict == Verdict::pass) ++report.norm_pass;
      report.worst_norm_ratio = std::max(report.worst_norm_ratio, cell.norm_ratio);
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

}  // namespace musielak
