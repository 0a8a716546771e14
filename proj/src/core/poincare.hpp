#ifndef MUSIELAK_CORE_POINCARE_HPP
#define MUSIELAK_CORE_POINCARE_HPP

#include "core/conditions.hpp"
#include "core/domain.hpp"
#include "core/norms.hpp"
#include "core/phi.hpp"

#include <optional>
#include <string>
#include <vector>

namespace musielak {

struct PoincareReport {
  std::string test_id;
  int m = 1;
  double tol = 0.0;
  // modular side
  double c_used = 0.0;
  double lhs_modular = 0.0;
  double rhs_modular = 0.0;
  double ratio = 0.0;
  Verdict modular_verdict = Verdict::inconclusive;
  // norm side
  bool has_norm_side = false;
  double lhs_norm_sum = 0.0;
  double rhs_norm_sum = 0.0;
  double C_m_omega = 0.0;
  Verdict norm_verdict = Verdict::inconclusive;
};

/// c_{m,Omega}: 2d for m = 1 (d the box diameter), chained to
/// 2d * max(1, 2d)^(m-1) for higher orders.
double poincare_constant(const Domain& dom, int m);

/// C(m,Omega) = c_{m,Omega} * (1 + #{|beta| = m}).
double poincare_norm_constant(const Domain& dom, int m);

/// sum_{|alpha|<m} int M(x,|D^a u|) <= sum_{|alpha|=m} int M(x, c|D^a u|),
/// verified by quadrature; c defaults to poincare_constant.
PoincareReport verify_modular_poincare(const PhiFunction& phi, const GridFunction& u, int m,
                                       std::optional<double> c = std::nullopt, double tol = 1e-8);

/// sum_{|alpha|<m} ||D^a u|| <= C(m,Omega) sum_{|alpha|=m} ||D^a u||.
PoincareReport verify_norm_poincare(const PhiFunction& phi, const GridFunction& u, int m, double tol = 1e-6,
                                    double solver_tol = 1e-10);

struct BumpSpec {
  std::string id;
  BumpKind kind = BumpKind::smooth_exp;
  int poly_k = 4;
  std::vector<double> center_fractions;  // relative to each axis extent
  std::vector<double> width_fractions;

  GridFunction build(std::shared_ptr<const Domain> dom) const;
};

/// The stock family: five smooth_exp bumps (centered, two off-center,
/// narrow, wide) plus two poly_4 bumps.
std::vector<BumpSpec> default_test_functions();
/// 2^-5 .. 2^5.
std::vector<double> default_scalings();

struct RatioCurvePoint {
  double scaling = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct SearchReport {
  double c_used = 0.0;
  double sup_ratio = 0.0;
  std::string argmax_id;
  double argmax_scaling = 0.0;
  std::vector<std::pair<std::string, std::vector<RatioCurvePoint>>> curves;
};

/// First-order modular ratio over scaled/translated bumps. Evidence only:
/// no theorem verdict is attached.
SearchReport counterexample_search(const PhiFunction& phi, std::shared_ptr<const Domain> dom,
                                   std::span<const BumpSpec> bumps, std::span<const double> scalings, double c);

struct SweepCell {
  std::string phi_name;
  std::string bump_id;
  double scaling = 1.0;
  double lhs_modular = 0.0, rhs_modular = 0.0, ratio = 0.0;
  Verdict modular_verdict = Verdict::inconclusive;
  bool has_norm_side = false;
  double lhs_norm_sum = 0.0, rhs_norm_sum = 0.0, norm_ratio = 0.0;
  Verdict norm_verdict = Verdict::inconclusive;
  std::string error;  // nonempty when the cell aborted (overflow etc.)
  double seconds = 0.0;
};

struct SweepReport {
  int m = 1;
  double c_used = 0.0;
  double C_m_omega = 0.0;
  double modular_tol = 0.0, norm_tol = 0.0;
  bool with_norms = true;
  std::vector<SweepCell> cells;
  std::size_t modular_pass = 0, norm_pass = 0, errors = 0;
  double worst_ratio = 0.0;       // max LHS/RHS over cells (modular side)
  double worst_norm_ratio = 0.0;  // max LHS/(C*RHS) over cells
  double seconds = 0.0;
};

struct SweepOptions {
  int m = 1;
  std::optional<double> c;
  double modular_tol = 1e-8;
  double norm_tol = 1e-6;
  double solver_tol = 1e-8;
  bool with_norms = true;
  int threads = 0;
};

/// Cross product of Phi-functions x bumps x scalings; cells are independent
/// jobs with per-cell error capture. Within a job the scalings run in
/// ascending order and warm-start the norm brackets.
SweepReport sweep(std::span<const PhiFunction* const> phis, std::shared_ptr<const Domain> dom,
                  std::span<const BumpSpec> bumps, std::span<const double> scalings, const SweepOptions& options);

}  // namespace musielak

#endif
