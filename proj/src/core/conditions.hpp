#ifndef MUSIELAK_CORE_CONDITIONS_HPP
#define MUSIELAK_CORE_CONDITIONS_HPP

#include "core/domain.hpp"
#include "core/phi.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>

namespace musielak {

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict verdict);

/// Verdict of a sampled structural-condition check. A fail always carries a
/// witness whose re-evaluation reproduces the violation; pass is only ever
/// "pass at the reported sampling resolution", never a proof.
struct ConditionReport {
  std::string condition;
  Verdict verdict = Verdict::inconclusive;
  nlohmann::json witness;     // violating points/values, or the pass certificate
  nlohmann::json resolution;  // sampling parameters the verdict was computed at
};

/// Comparison function phi(tau, s) of the spatial-domination condition;
/// both partial maps must be nondecreasing.
using Varphi = std::function<double(double, double)>;

Varphi varphi_constant_one();
/// max{ s^{sigma(tau)}, s^{-sigma(tau)} } with sigma(tau) = C0 / (-log tau):
/// the comparison function recovering log-Hoelder regularity.
Varphi varphi_log_holder(double C0);

struct M1Options {
  int lattice_per_axis = 9;
  int delta_count = 9;   // pair separations 2^-1 .. 2^-delta_count
  int s_count = 64;
  double s_min = 1e-4, s_max = 1e4;
  int eps_pow_min = 3, eps_pow_max = 20;  // growth ladder 2^-3 .. 2^-20
  double cap = 1e8;                       // fixed bound on the ladder values
  double rel_tol = 1e-9;
  unsigned seed = 0;      // nonzero adds lattice jitter
};

/// Domination M(x,s) <= varphi(|x-y|,s) M(y,s) on sampled pairs plus the
/// growth cap on varphi(eps, c eps^-N) along a decreasing epsilon ladder.
ConditionReport check_m1(const PhiFunction& phi, const Domain& dom, const Varphi& varphi, double c,
                         const M1Options& options = {});

struct LogHolderOptions {
  int lattice_per_axis = 17;
  int delta_count = 9;
  double rel_tol = 1e-12;
  unsigned seed = 0;
};

/// |p(x) - p(y)| <= -C0 / log|x-y| on sampled pairs with |x-y| <= 1/2.
ConditionReport check_log_holder(const ExponentField& p, const Domain& dom, double C0,
                                 const LogHolderOptions& options = {});

struct YOptions {
  int x_resolution = 257;
  int t_count = 64;
  double t_min = 1e-4, t_max = 1e4;
  int sweep_per_axis = 5;  // lattice on the remaining coordinates
  double rel_tol = 1e-12;
  bool refine_t0 = true;
  unsigned seed = 0;
};

/// Directional monotonicity of x_i -> M(x,t) on the segment [a,b]:
/// one uniform direction for every t ((Y-infinity)) or one uniform direction
/// per side of a threshold t0 ((Y-zero); t0 searched and refined when not
/// supplied). Constant partial maps are compatible with either direction.
ConditionReport check_y(const PhiFunction& phi, const Domain& dom, int axis, double seg_a, double seg_b,
                        std::optional<double> t0 = std::nullopt, const YOptions& options = {});

/// Trapezoidal integral of M(x,c) over the sub-box K; pass iff every nodal
/// value and the total are finite, inconclusive on overflow.
ConditionReport check_local_integrability(const PhiFunction& phi, const Domain& dom, double c,
                                          std::span<const double> k_lo, std::span<const double> k_hi,
                                          int nodes_per_axis = 129);

}  // namespace musielak

#endif
