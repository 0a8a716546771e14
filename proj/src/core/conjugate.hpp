#ifndef MUSIELAK_CORE_CONJUGATE_HPP
#define MUSIELAK_CORE_CONJUGATE_HPP

#include "core/domain.hpp"
#include "core/norms.hpp"
#include "core/phi.hpp"

#include <span>
#include <vector>

namespace musielak {

struct ConjugateResult {
  double value = 0.0;     // M*(x,s)
  double argmax = 0.0;    // maximizer t*
  double bracket_width = 0.0;
};

/// M*(x,s) = sup_{t >= 0} { s t - M(x,t) }, by bracket expansion plus
/// golden-section search on the concave objective. The numeric value is a
/// lower bound on the true supremum (within the search tolerance).
ConjugateResult conjugate(const PhiFunction& phi, std::span<const double> x, double s, double tol = 1e-10);

struct YoungTriple {
  std::vector<double> x;
  double u = 0.0, v = 0.0;
};

struct YoungReport {
  bool pass = true;
  std::size_t count = 0;
  double worst_margin = 0.0;  // min of (rhs - lhs)/max(1, lhs); negative = violation
  YoungTriple worst;
  double worst_lhs = 0.0, worst_rhs = 0.0;
};

/// Checks u v <= M(x,u) + M*(x,v) with one-sided relative slack tol
/// (the numeric M* under-estimates the sup, so slack only ever excuses
/// solver error, never a genuine violation).
YoungReport young_check(const PhiFunction& phi, std::span<const YoungTriple> triples, double tol = 1e-9);

struct HolderReport {
  bool pass = true;
  double lhs = 0.0;             // integral of |u v|
  double norm_u = 0.0;          // ||u||_M
  double norm_v_conjugate = 0.0;  // ||v||_{M*}
  double rhs = 0.0;             // 2 ||u||_M ||v||_{M*}
  double margin = 0.0;          // (rhs - lhs)/max(1, rhs)
};

/// integral |u v| <= 2 ||u||_M ||v||_{M*}; the conjugate norm evaluates
/// M* pointwise through the numeric conjugation.
HolderReport holder_check(const PhiFunction& phi, const GridFunction& u, const GridFunction& v,
                          double tol = 1e-6, double solver_tol = 1e-10);

struct BiconjugateAudit {
  double supremum = 0.0;  // sup_s { t s - M*(x,s) } over the audit grid (refined)
  double target = 0.0;    // M(x,t)
  bool pass = false;
};

/// Approximate Fenchel-Moreau check at one (x,t): the biconjugate must
/// bracket M(x,t) within [ -1e3*tol, +10*tol ] relative slack.
BiconjugateAudit biconjugate_audit(const PhiFunction& phi, std::span<const double> x, double t, double tol = 1e-10,
                                   int audit_probes = 256);

}  // namespace musielak

#endif
