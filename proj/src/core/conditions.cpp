#include "core/conditions.hpp"

#include "core/errors.hpp"
#include "core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace musielak {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    g[static_cast<std::size_t>(i)] =
        i == count - 1 ? hi : std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return g;
}

// Lattice over the closed domain box, optionally jittered off the regular
// grid (interior points only keep their jitter inside the box).
std::vector<std::vector<double>> domain_lattice(const Domain& dom, int per_axis, unsigned seed) {
  const int dim = dom.dim();
  std::vector<std::vector<double>> points;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-0.45, 0.45);
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(per_axis);
  points.reserve(total);
  for (;;) {
    std::vector<double> x(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a) {
      const auto ai = static_cast<std::size_t>(a);
      const double step = (dom.upper(a) - dom.lower(a)) / static_cast<double>(per_axis - 1);
      double v = dom.lower(a) + step * static_cast<double>(idx[ai]);
      if (seed != 0 && idx[ai] > 0 && idx[ai] < per_axis - 1) v += unit(rng) * step;
      x[ai] = std::min(v, dom.upper(a));
    }
    points.push_back(std::move(x));
    int a = dim - 1;
    for (; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < per_axis) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
  return points;
}

nlohmann::json point_json(std::span<const double> x) { return nlohmann::json(std::vector<double>(x.begin(), x.end())); }

}  // namespace

std::string to_string(Verdict verdict) { return verdict_name(verdict); }

Varphi varphi_constant_one() {
  return [](double, double) { return 1.0; };
}

Varphi varphi_log_holder(double C0) {
  require(C0 > 0.0, ErrorCode::invalid_argument, "log-Hoelder constant must be positive");
  return [C0](double tau, double s) {
    if (s <= 0.0) return 1.0;  // s^sigma and s^-sigma both tend to 1 as sigma handles s=0 edge
    if (tau <= 0.0) return kInf;
    if (tau >= 1.0) tau = 0.5;  // varphi is defined on tau <= 1/2
    const double sigma = C0 / (-std::log(tau));
    const double ls = std::log(s);
    return std::exp(std::abs(sigma * ls));
  };
}

ConditionReport check_m1(const PhiFunction& phi, const Domain& dom, const Varphi& varphi, double c,
                         const M1Options& options) {
  require(static_cast<bool>(varphi), ErrorCode::invalid_argument, "comparison function must be set");
  require(c > 0.0, ErrorCode::invalid_argument, "ladder constant c must be positive");

  // Precondition spot-check: both partial maps of varphi nondecreasing.
  {
    const auto taus = log_grid(1e-3, 0.5, 8);
    const auto ss = log_grid(options.s_min, options.s_max, 8);
    for (double s : ss) {
      double prev = -kInf;
      for (double tau : taus) {
        const double v = varphi(tau, s);
        require(v >= prev * (1.0 - 1e-9) - 1e-12, ErrorCode::invalid_argument,
                "varphi(.,s) must be nondecreasing");
        prev = v;
      }
    }
    for (double tau : taus) {
      double prev = -kInf;
      for (double s : ss) {
        const double v = varphi(tau, s);
        require(v >= prev * (1.0 - 1e-9) - 1e-12, ErrorCode::invalid_argument,
                "varphi(tau,.) must be nondecreasing");
        prev = v;
      }
    }
  }

  ConditionReport report;
  report.condition = "M1";
  report.resolution = {{"lattice_per_axis", options.lattice_per_axis},
                       {"delta_count", options.delta_count},
                       {"s_count", options.s_count},
                       {"s_range", {options.s_min, options.s_max}},
                       {"eps_ladder", {options.eps_pow_min, options.eps_pow_max}},
                       {"cap", options.cap},
                       {"seed", options.seed}};

  const auto points = domain_lattice(dom, options.lattice_per_axis, options.seed);
  const auto s_grid = log_grid(options.s_min, options.s_max, options.s_count);
  std::size_t skipped = 0, pairs = 0;
  double worst_ratio = 0.0;
  nlohmann::json worst_witness;

  auto check_order = [&](std::span<const double> x, std::span<const double> y, double tau, double s) {
    const double mx = phi.evaluate_or_inf(x, s);
    const double my = phi.evaluate_or_inf(y, s);
    if (!std::isfinite(mx) || !std::isfinite(my)) {
      ++skipped;
      return;
    }
    const double bound = varphi(tau, s) * my;
    if (mx > bound * (1.0 + options.rel_tol)) {
      const double ratio = bound > 0.0 ? mx / bound : kInf;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_witness = {{"x", point_json(x)}, {"y", point_json(y)},      {"s", s},
                         {"M_x", mx},          {"M_y", my},               {"varphi", varphi(tau, s)},
                         {"tau", tau},         {"excess_ratio", ratio}};
      }
    }
  };

  for (const auto& x : points) {
    for (int a = 0; a < dom.dim(); ++a) {
      for (int k = 1; k <= options.delta_count; ++k) {
        const double delta = std::ldexp(1.0, -k);  // 2^-k <= 1/2
        std::vector<double> y(x);
        y[static_cast<std::size_t>(a)] += delta;
        if (y[static_cast<std::size_t>(a)] > dom.upper(a)) continue;
        ++pairs;
        for (double s : s_grid) {
          check_order(x, y, delta, s);
          check_order(y, x, delta, s);
        }
      }
    }
  }

  if (!worst_witness.is_null()) {
    report.verdict = Verdict::fail;
    report.witness = {{"kind", "domination_violated"}, {"pair", worst_witness}};
    report.resolution["pairs"] = pairs;
    report.resolution["skipped_overflow_samples"] = skipped;
    return report;
  }

  // Growth ladder varphi(eps, c eps^-N) for eps = 2^-k.
  std::vector<double> ladder;
  nlohmann::json ladder_json = nlohmann::json::array();
  for (int k = options.eps_pow_min; k <= options.eps_pow_max; ++k) {
    const double eps = std::ldexp(1.0, -k);
    const double v = varphi(eps, c * std::pow(eps, -static_cast<double>(dom.dim())));
    ladder.push_back(v);
    ladder_json.push_back({{"eps", eps}, {"value", v}});
    if (!std::isfinite(v) || v > options.cap) {
      report.verdict = Verdict::fail;
      report.witness = {{"kind", "ladder_unbounded"}, {"eps", eps}, {"value", v}, {"cap", options.cap}};
      report.resolution["pairs"] = pairs;
      report.resolution["skipped_overflow_samples"] = skipped;
      return report;
    }
  }
  bool growing_tail = false;
  if (ladder.size() >= 3) {
    const std::size_t k = ladder.size();
    const double d1 = ladder[k - 2] - ladder[k - 3];
    const double d2 = ladder[k - 1] - ladder[k - 2];
    const double scale = std::max({1.0, std::abs(ladder[k - 1])});
    const bool increasing = d1 > 1e-12 * scale && d2 > 1e-12 * scale;
    const bool decaying = d2 < 0.9 * d1;
    growing_tail = increasing && !decaying;
  }

  report.resolution["pairs"] = pairs;
  report.resolution["skipped_overflow_samples"] = skipped;
  if (growing_tail) {
    report.verdict = Verdict::inconclusive;
    report.witness = {{"kind", "ladder_still_growing"}, {"ladder", ladder_json}};
  } else {
    report.verdict = Verdict::pass;
    report.witness = {{"kind", "certificate"},
                      {"ladder_max", *std::max_element(ladder.begin(), ladder.end())},
                      {"ladder", ladder_json}};
  }
  return report;
}

ConditionReport check_log_holder(const ExponentField& p, const Domain& dom, double C0,
                                 const LogHolderOptions& options) {
  require(C0 > 0.0, ErrorCode::invalid_argument, "log-Hoelder constant must be positive");
  ConditionReport report;
  report.condition = "log_holder";
  report.resolution = {{"lattice_per_axis", options.lattice_per_axis},
                       {"delta_count", options.delta_count},
                       {"C0", C0},
                       {"seed", options.seed}};

  const auto points = domain_lattice(dom, options.lattice_per_axis, options.seed);
  std::size_t pairs = 0;
  double worst_excess = -kInf;  // lhs - rhs, maximal over pairs
  nlohmann::json worst_pair;

  for (const auto& x : points) {
    for (int a = 0; a < dom.dim(); ++a) {
      for (int k = 1; k <= options.delta_count; ++k) {
        const double delta = std::ldexp(1.0, -k);
        std::vector<double> y(x);
        y[static_cast<std::size_t>(a)] += delta;
        if (y[static_cast<std::size_t>(a)] > dom.upper(a)) continue;
        ++pairs;
        const double lhs = std::abs(p(x) - p(y));
        const double rhs = C0 / (-std::log(delta));
        const double excess = lhs - rhs;
        if (excess > worst_excess) {
          worst_excess = excess;
          worst_pair = {{"x", point_json(x)}, {"y", point_json(y)}, {"distance", delta},
                        {"lhs", lhs},         {"rhs", rhs}};
        }
      }
    }
  }
  report.resolution["pairs"] = pairs;
  if (worst_excess > options.rel_tol) {
    report.verdict = Verdict::fail;
    report.witness = {{"kind", "modulus_violated"}, {"pair", worst_pair}};
  } else {
    report.verdict = Verdict::pass;
    report.witness = {{"kind", "certificate"}, {"worst_pair", worst_pair}};
  }
  return report;
}

namespace {

struct DirectionEvidence {
  bool can_nondecreasing = true;
  bool can_nonincreasing = true;
  // Pair violating "nondecreasing" (a down-step) and vice versa.
  nlohmann::json down_step, up_step;
};

// Classifies x_axis -> M(x,t) over the sweep lattice at one t.
DirectionEvidence classify_direction(const PhiFunction& phi, const Domain& dom, int axis, double seg_a, double seg_b,
                                     double t, const YOptions& options,
                                     const std::vector<std::vector<double>>& sweeps) {
  DirectionEvidence ev;
  const int n = options.x_resolution;
  std::vector<double> x(static_cast<std::size_t>(dom.dim()));
  for (const auto& sweep : sweeps) {
    int si = 0;
    for (int a = 0; a < dom.dim(); ++a)
      if (a != axis) x[static_cast<std::size_t>(a)] = sweep[static_cast<std::size_t>(si++)];
    double prev = 0.0;
    double prev_xi = 0.0;
    for (int i = 0; i < n; ++i) {
      const double xi = seg_a + (seg_b - seg_a) * static_cast<double>(i) / static_cast<double>(n - 1);
      x[static_cast<std::size_t>(axis)] = xi;
      const double f = phi.evaluate_or_inf(x, t);
      if (i > 0) {
        const double tol = options.rel_tol * std::max({std::abs(prev), std::isfinite(f) ? std::abs(f) : 0.0, 1e-300});
        if (f < prev - tol && ev.can_nondecreasing) {
          ev.can_nondecreasing = false;
          ev.down_step = {{"sweep", sweep}, {"x_i_from", prev_xi}, {"x_i_to", xi}, {"from", prev}, {"to", f}};
        }
        if (f > prev + tol && ev.can_nonincreasing) {
          ev.can_nonincreasing = false;
          ev.up_step = {{"sweep", sweep}, {"x_i_from", prev_xi}, {"x_i_to", xi}, {"from", prev}, {"to", f}};
        }
        if (!ev.can_nondecreasing && !ev.can_nonincreasing) return ev;
      }
      prev = f;
      prev_xi = xi;
    }
  }
  return ev;
}

std::vector<std::vector<double>> sweep_lattice(const Domain& dom, int axis, int per_axis) {
  std::vector<std::vector<double>> sweeps;
  const int others = dom.dim() - 1;
  if (others == 0) {
    sweeps.emplace_back();
    return sweeps;
  }
  std::vector<int> idx(static_cast<std::size_t>(others), 0);
  for (;;) {
    std::vector<double> point(static_cast<std::size_t>(others));
    int si = 0;
    for (int a = 0; a < dom.dim(); ++a) {
      if (a == axis) continue;
      const auto sii = static_cast<std::size_t>(si);
      point[sii] = dom.lower(a) +
                   (dom.upper(a) - dom.lower(a)) * static_cast<double>(idx[sii]) / static_cast<double>(per_axis - 1);
      ++si;
    }
    sweeps.push_back(std::move(point));
    int a = others - 1;
    for (; a >= 0; --a) {
      if (++idx[static_cast<std::size_t>(a)] < per_axis) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
    if (a < 0) break;
  }
  return sweeps;
}

}  // namespace

ConditionReport check_y(const PhiFunction& phi, const Domain& dom, int axis, double seg_a, double seg_b,
                        std::optional<double> t0, const YOptions& options) {
  require(axis >= 0 && axis < dom.dim(), ErrorCode::invalid_argument, "axis out of range");
  require(seg_a < seg_b, ErrorCode::invalid_argument, "segment must have positive length");
  require(seg_a >= dom.lower(axis) - 1e-12 && seg_b <= dom.upper(axis) + 1e-12, ErrorCode::invalid_argument,
          "segment must lie within the domain's axis extent");
  require(options.x_resolution >= 3, ErrorCode::invalid_argument, "x_resolution must be >= 3");

  ConditionReport report;
  report.condition = "Y";
  report.resolution = {{"axis", axis},
                       {"segment", {seg_a, seg_b}},
                       {"x_resolution", options.x_resolution},
                       {"t_count", options.t_count},
                       {"t_range", {options.t_min, options.t_max}},
                       {"sweep_per_axis", options.sweep_per_axis}};

  const auto sweeps = sweep_lattice(dom, axis, options.sweep_per_axis);
  const auto t_grid = log_grid(options.t_min, options.t_max, options.t_count);
  std::vector<DirectionEvidence> evidence;
  evidence.reserve(t_grid.size());
  for (double t : t_grid)
    evidence.push_back(classify_direction(phi, dom, axis, seg_a, seg_b, t, options, sweeps));

  // Any t whose partial map is non-monotone kills both (Y0) and (Yinf).
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    const auto& ev = evidence[i];
    if (!ev.can_nondecreasing && !ev.can_nonincreasing) {
      report.verdict = Verdict::fail;
      report.witness = {{"kind", "nonmonotone_partial_map"},
                        {"t", t_grid[i]},
                        {"down_step", ev.down_step},
                        {"up_step", ev.up_step}};
      return report;
    }
  }

  const std::size_t T = t_grid.size();
  auto all_inc = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i)
      if (!evidence[i].can_nondecreasing) return false;
    return true;
  };
  auto all_dec = [&](std::size_t from, std::size_t to) {
    for (std::size_t i = from; i < to; ++i)
      if (!evidence[i].can_nonincreasing) return false;
    return true;
  };
  auto dir_label = [&](bool inc, bool dec) {
    if (inc && dec) return "constant";
    return inc ? "nondecreasing" : "nonincreasing";
  };

  // (Y-infinity): one uniform direction across the whole ladder.
  if (all_inc(0, T) || all_dec(0, T)) {
    report.verdict = Verdict::pass;
    report.witness = {{"kind", "certificate"},
                      {"mode", "Yinf"},
                      {"direction", dir_label(all_inc(0, T), all_dec(0, T))}};
    return report;
  }

  // (Y0): a split index with one uniform direction per side.
  auto split_valid = [&](std::size_t i) {
    return (all_inc(0, i) || all_dec(0, i)) && (all_inc(i, T) || all_dec(i, T));
  };
  std::optional<std::size_t> split;
  if (t0) {
    const std::size_t i = static_cast<std::size_t>(
        std::lower_bound(t_grid.begin(), t_grid.end(), *t0) - t_grid.begin());
    if (split_valid(i)) split = i;
  } else {
    for (std::size_t i = 1; i < T; ++i)
      if (split_valid(i)) {
        split = i;
        break;
      }
  }

  if (split) {
    const std::size_t i = *split;
    const bool below_inc = all_inc(0, i), below_dec = all_dec(0, i);
    const bool above_inc = all_inc(i, T), above_dec = all_dec(i, T);
    double reported_t0 = t0 ? *t0 : t_grid[i];
    if (!t0 && options.refine_t0 && i > 0) {
      // Locate the changeover between the below-side direction and the
      // above-side direction by bisection in log t.
      auto below_compatible = [&](double t) {
        const auto ev = classify_direction(phi, dom, axis, seg_a, seg_b, t, options, sweeps);
        return below_inc ? ev.can_nondecreasing : ev.can_nonincreasing;
      };
      double lo = t_grid[i - 1], hi = t_grid[i];
      for (int iter = 0; iter < 60 && hi - lo > 1e-6 * std::max(1.0, lo); ++iter) {
        const double mid = std::sqrt(lo * hi);
        if (below_compatible(mid))
          lo = mid;
        else
          hi = mid;
      }
      reported_t0 = 0.5 * (lo + hi);
    }
    report.verdict = Verdict::pass;
    report.witness = {{"kind", "certificate"},
                      {"mode", "Y0"},
                      {"t0", reported_t0},
                      {"direction_below", dir_label(below_inc, below_dec)},
                      {"direction_above", dir_label(above_inc, above_dec)}};
    return report;
  }

  // Directions flip more than once: exhibit a D1 / D2 / D1 pattern.
  report.verdict = Verdict::fail;
  nlohmann::json examples = nlohmann::json::array();
  {
    std::optional<std::size_t> i1, i2, i3;
    for (std::size_t i = 0; i < T; ++i) {
      const bool only_inc = evidence[i].can_nondecreasing && !evidence[i].can_nonincreasing;
      const bool only_dec = !evidence[i].can_nondecreasing && evidence[i].can_nonincreasing;
      if (!only_inc && !only_dec) continue;
      if (!i1) {
        i1 = i;
      } else if (!i2) {
        const bool first_inc = evidence[*i1].can_nondecreasing;
        if (only_inc != first_inc) i2 = i;
      } else if (!i3) {
        const bool second_inc = evidence[*i2].can_nondecreasing;
        if (only_inc != second_inc) {
          i3 = i;
          break;
        }
      }
    }
    for (auto idx : {i1, i2, i3})
      if (idx)
        examples.push_back({{"t", t_grid[*idx]},
                            {"direction", evidence[*idx].can_nondecreasing ? "nondecreasing" : "nonincreasing"},
                            {"counterexample_to_other_direction",
                             evidence[*idx].can_nondecreasing ? evidence[*idx].up_step : evidence[*idx].down_step}});
  }
  report.witness = {{"kind", "direction_conflict"}, {"t_examples", examples}};
  return report;
}

ConditionReport check_local_integrability(const PhiFunction& phi, const Domain& dom, double c,
                                          std::span<const double> k_lo, std::span<const double> k_hi,
                                          int nodes_per_axis) {
  const int dim = dom.dim();
  require(static_cast<int>(k_lo.size()) == dim && static_cast<int>(k_hi.size()) == dim,
          ErrorCode::invalid_argument, "sub-box dimension mismatch");
  require(c >= 0.0, ErrorCode::invalid_argument, "constant c must be nonnegative");
  require(nodes_per_axis >= 2, ErrorCode::invalid_argument, "need >= 2 nodes per axis");
  for (int a = 0; a < dim; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    require(k_lo[ai] < k_hi[ai], ErrorCode::invalid_argument, "sub-box must have positive extent");
    require(k_lo[ai] >= dom.lower(a) - 1e-12 && k_hi[ai] <= dom.upper(a) + 1e-12, ErrorCode::invalid_argument,
            "sub-box must lie inside the domain");
  }

  ConditionReport report;
  report.condition = "local_integrability";
  report.resolution = {{"nodes_per_axis", nodes_per_axis}, {"c", c}};

  const Domain k_box(std::vector<double>(k_lo.begin(), k_lo.end()), std::vector<double>(k_hi.begin(), k_hi.end()),
                     std::vector<int>(static_cast<std::size_t>(dim), nodes_per_axis));
  CompensatedSum acc;
  std::vector<int> idx(static_cast<std::size_t>(dim));
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (std::size_t flat = 0; flat < k_box.num_nodes(); ++flat) {
    k_box.unflatten(flat, idx);
    k_box.coords_of(idx, x);
    const double m = phi.evaluate_or_inf(x, c);
    if (!std::isfinite(m)) {
      report.verdict = Verdict::inconclusive;
      report.witness = {{"kind", "overflow"}, {"x", point_json(x)}, {"c", c}};
      return report;
    }
    double w = k_box.cell_volume();
    for (int a = 0; a < dim; ++a)
      if (idx[static_cast<std::size_t>(a)] == 0 || idx[static_cast<std::size_t>(a)] == nodes_per_axis - 1) w *= 0.5;
    acc.add(w * m);
  }
  const double integral = acc.value();
  if (!std::isfinite(integral)) {
    report.verdict = Verdict::inconclusive;
    report.witness = {{"kind", "overflow"}, {"integral", "non-finite"}};
  } else {
    report.verdict = Verdict::pass;
    report.witness = {{"kind", "certificate"}, {"integral", integral}};
  }
  return report;
}

}  // namespace musielak
