#include "musielak.h"

#include "core/config.hpp"
#include "core/conjugate.hpp"
#include "core/errors.hpp"
#include "core/norms.hpp"
#include "core/poincare.hpp"
#include "core/runner.hpp"
#include "core/serialize.hpp"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

using musielak::Error;
using musielak::ErrorCode;
using nlohmann::json;

struct mo_phi {
  musielak::PhiFunction impl;
};
struct mo_domain {
  std::shared_ptr<const musielak::Domain> impl;
};
struct mo_grid_function {
  musielak::GridFunction impl;
};

namespace {

thread_local std::string g_last_error;

mo_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return MO_ERR_INVALID_ARGUMENT;
    case ErrorCode::domain_error: return MO_ERR_DOMAIN;
    case ErrorCode::range_error: return MO_ERR_RANGE;
    case ErrorCode::geometry_error: return MO_ERR_GEOMETRY;
    case ErrorCode::unsupported_order: return MO_ERR_UNSUPPORTED_ORDER;
    case ErrorCode::no_convergence: return MO_ERR_NO_CONVERGENCE;
    case ErrorCode::config_error: return MO_ERR_CONFIG;
    case ErrorCode::io_error: return MO_ERR_IO;
    case ErrorCode::internal_error: return MO_ERR_INTERNAL;
  }
  return MO_ERR_INTERNAL;
}

template <class Fn>
mo_status wrap(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MO_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return MO_ERR_CONFIG;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MO_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MO_ERR_INTERNAL;
  }
}

void check(bool cond, const char* what) {
  if (!cond) musielak::raise(ErrorCode::invalid_argument, what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const json& j) { *out = dup_string(j.dump(2)); }

json parse_json(const char* text, const char* what) {
  check(text != nullptr, what);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) musielak::raise(ErrorCode::config_error, std::string(what) + ": malformed JSON");
  return j;
}

json parse_json_or(const char* text, json fallback) {
  if (text == nullptr) return fallback;
  return parse_json(text, "params");
}

std::span<const double> point(const double* x, int dim) {
  check(x != nullptr && dim >= 1, "point must be non-null with dim >= 1");
  return {x, static_cast<std::size_t>(dim)};
}

}  // namespace

extern "C" {

const char* mo_version(void) { return "1.0.0"; }

const char* mo_last_error_message(void) { return g_last_error.c_str(); }

void mo_string_free(char* s) { delete[] s; }

/* ---- Phi-functions -------------------------------------------------- */

mo_status mo_phi_create_json(const char* spec_json, const mo_domain* dom, mo_phi** out) {
  return wrap([&] {
    check(out != nullptr, "out must be non-null");
    const json spec = parse_json(spec_json, "phi spec");
    std::shared_ptr<const musielak::Domain> box =
        dom != nullptr ? dom->impl : musielak::Domain::create({0.0}, {1.0}, {9});
    *out = new mo_phi{musielak::parse_phi(spec, *box)};
  });
}

mo_status mo_phi_create_custom(double (*eval)(double, void*), void* ctx, mo_phi** out) {
  return wrap([&] {
    check(out != nullptr && eval != nullptr, "evaluator and out must be non-null");
    *out = new mo_phi{musielak::PhiFunction::orlicz_custom([eval, ctx](double t) { return eval(t, ctx); })};
  });
}

void mo_phi_free(mo_phi* phi) { delete phi; }

mo_status mo_phi_evaluate(const mo_phi* phi, const double* x, int dim, double t, double* out) {
  return wrap([&] {
    check(phi != nullptr && out != nullptr, "phi and out must be non-null");
    *out = phi->impl.evaluate(point(x, dim), t);
  });
}

mo_status mo_phi_validate(const mo_phi* phi, const double* sample_points, int n_points, int dim,
                          const char* options_json, char** report_json) {
  return wrap([&] {
    check(phi != nullptr && report_json != nullptr, "phi and report_json must be non-null");
    check(sample_points != nullptr && n_points >= 1 && dim >= 1, "sample points must be non-empty");
    std::vector<std::vector<double>> points;
    points.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i)
      points.emplace_back(sample_points + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim),
                          sample_points + static_cast<std::size_t>(i + 1) * static_cast<std::size_t>(dim));
    musielak::PhiValidationOptions options;
    const json j = parse_json_or(options_json, json::object());
    options.t_min = j.value("t_min", options.t_min);
    options.t_max = j.value("t_max", options.t_max);
    options.t_count = j.value("t_count", options.t_count);
    options.tolerance = j.value("tolerance", options.tolerance);
    emit(report_json, musielak::json_of(musielak::validate_phi(phi->impl, points, options)));
  });
}

/* ---- Domains and grid functions ------------------------------------- */

mo_status mo_domain_create(int dim, const double* lower, const double* upper, const int* nodes, mo_domain** out) {
  return wrap([&] {
    check(out != nullptr && lower != nullptr && upper != nullptr && nodes != nullptr && dim >= 1,
          "domain arrays and out must be non-null, dim >= 1");
    *out = new mo_domain{musielak::Domain::create(
        std::vector<double>(lower, lower + dim), std::vector<double>(upper, upper + dim),
        std::vector<int>(nodes, nodes + dim))};
  });
}

void mo_domain_free(mo_domain* dom) { delete dom; }

mo_status mo_domain_diameter(const mo_domain* dom, double* out) {
  return wrap([&] {
    check(dom != nullptr && out != nullptr, "dom and out must be non-null");
    *out = dom->impl->diameter();
  });
}

mo_status mo_domain_num_nodes(const mo_domain* dom, size_t* out) {
  return wrap([&] {
    check(dom != nullptr && out != nullptr, "dom and out must be non-null");
    *out = dom->impl->num_nodes();
  });
}

mo_status mo_grid_function_make_bump(const mo_domain* dom, const double* center, const double* widths,
                                     const char* kind, int poly_k, mo_grid_function** out) {
  return wrap([&] {
    check(dom != nullptr && out != nullptr && center != nullptr && widths != nullptr && kind != nullptr,
          "bump arguments must be non-null");
    const int dim = dom->impl->dim();
    musielak::BumpKind bump_kind;
    if (std::strcmp(kind, "smooth_exp") == 0)
      bump_kind = musielak::BumpKind::smooth_exp;
    else if (std::strcmp(kind, "poly") == 0)
      bump_kind = musielak::BumpKind::poly;
    else
      musielak::raise(ErrorCode::invalid_argument, "bump kind must be 'smooth_exp' or 'poly'");
    *out = new mo_grid_function{musielak::make_bump(dom->impl, std::vector<double>(center, center + dim),
                                                    std::vector<double>(widths, widths + dim), bump_kind, poly_k)};
  });
}

mo_status mo_grid_function_make_sine(const mo_domain* dom, mo_grid_function** out) {
  return wrap([&] {
    check(dom != nullptr && out != nullptr, "dom and out must be non-null");
    *out = new mo_grid_function{musielak::make_product_sine(dom->impl)};
  });
}

mo_status mo_grid_function_make_constant(const mo_domain* dom, double value, mo_grid_function** out) {
  return wrap([&] {
    check(dom != nullptr && out != nullptr, "dom and out must be non-null");
    *out = new mo_grid_function{musielak::make_constant(dom->impl, value)};
  });
}

mo_status mo_grid_function_from_values(const mo_domain* dom, const double* values, size_t count,
                                       mo_grid_function** out) {
  return wrap([&] {
    check(dom != nullptr && out != nullptr && values != nullptr, "dom, values, out must be non-null");
    check(count == dom->impl->num_nodes(), "value count must equal the node count");
    *out = new mo_grid_function{musielak::GridFunction::nodal(dom->impl, std::vector<double>(values, values + count),
                                                              musielak::SupportBox::full(*dom->impl))};
  });
}

void mo_grid_function_free(mo_grid_function* u) { delete u; }

mo_status mo_grid_function_values(const mo_grid_function* u, double* buffer, size_t capacity) {
  return wrap([&] {
    check(u != nullptr && buffer != nullptr, "u and buffer must be non-null");
    const auto& values = u->impl.values();
    check(capacity >= values.size(), "buffer too small");
    std::memcpy(buffer, values.data(), values.size() * sizeof(double));
  });
}

mo_status mo_grid_function_derivative(const mo_grid_function* u, const int* alpha, int dim,
                                      mo_grid_function** out) {
  return wrap([&] {
    check(u != nullptr && out != nullptr && alpha != nullptr, "u, alpha, out must be non-null");
    check(dim == u->impl.domain().dim(), "alpha dimension mismatch");
    *out = new mo_grid_function{
        musielak::derivative(u->impl, musielak::MultiIndex(std::vector<int>(alpha, alpha + dim)))};
  });
}

mo_status mo_grid_function_scale(const mo_grid_function* u, double s, mo_grid_function** out) {
  return wrap([&] {
    check(u != nullptr && out != nullptr, "u and out must be non-null");
    *out = new mo_grid_function{musielak::scale(u->impl, s)};
  });
}

mo_status mo_grid_function_mollify(const mo_grid_function* u, double epsilon, const double* shift,
                                   mo_grid_function** out) {
  return wrap([&] {
    check(u != nullptr && out != nullptr && shift != nullptr, "u, shift, out must be non-null");
    *out = new mo_grid_function{
        musielak::mollify(u->impl, epsilon, {shift, static_cast<std::size_t>(u->impl.domain().dim())})};
  });
}

mo_status mo_grid_function_export_csv(const mo_grid_function* u, const char* path) {
  return wrap([&] {
    check(u != nullptr && path != nullptr, "u and path must be non-null");
    std::ofstream os(path);
    if (!os.good()) musielak::raise(ErrorCode::io_error, std::string("cannot write ") + path);
    musielak::export_csv(u->impl, os);
    if (!os.good()) musielak::raise(ErrorCode::io_error, std::string("failed writing ") + path);
  });
}

/* ---- Modulars and norms ---------------------------------------------- */

mo_status mo_modular(const mo_phi* phi, const mo_grid_function* u, double c, double* out) {
  return wrap([&] {
    check(phi != nullptr && u != nullptr && out != nullptr, "phi, u, out must be non-null");
    *out = musielak::modular_scaled(phi->impl, u->impl, c);
  });
}

mo_status mo_modular_gap(const mo_phi* phi, const mo_grid_function* u, const mo_grid_function* v, double lambda,
                         double* out) {
  return wrap([&] {
    check(phi != nullptr && u != nullptr && v != nullptr && out != nullptr, "phi, u, v, out must be non-null");
    *out = musielak::modular_gap(phi->impl, u->impl, v->impl, lambda);
  });
}

namespace {

void copy_norm_result(const musielak::NormResult& r, mo_norm_result* out) {
  out->value = r.value;
  out->bracket_lo = r.bracket_lo;
  out->bracket_hi = r.bracket_hi;
  out->modular_at_value = r.modular_at_value;
  out->iterations = r.iterations;
}

}  // namespace

mo_status mo_luxemburg_norm(const mo_phi* phi, const mo_grid_function* u, double tol, mo_norm_result* out) {
  return wrap([&] {
    check(phi != nullptr && u != nullptr && out != nullptr, "phi, u, out must be non-null");
    copy_norm_result(musielak::luxemburg_norm(phi->impl, u->impl, tol), out);
  });
}

mo_status mo_sobolev_norm(const mo_phi* phi, const mo_grid_function* u, int m, double tol, mo_norm_result* out) {
  return wrap([&] {
    check(phi != nullptr && u != nullptr && out != nullptr, "phi, u, out must be non-null");
    copy_norm_result(musielak::sobolev_norm(phi->impl, u->impl, m, tol), out);
  });
}

/* ---- Young conjugation ----------------------------------------------- */

mo_status mo_conjugate(const mo_phi* phi, const double* x, int dim, double s, double tol,
                       mo_conjugate_result* out) {
  return wrap([&] {
    check(phi != nullptr && out != nullptr, "phi and out must be non-null");
    const auto r = musielak::conjugate(phi->impl, point(x, dim), s, tol);
    out->value = r.value;
    out->argmax = r.argmax;
    out->bracket_width = r.bracket_width;
  });
}

mo_status mo_young_check(const mo_phi* phi, const double* xs, const double* us, const double* vs, int n, int dim,
                         double tol, char** report_json) {
  return wrap([&] {
    check(phi != nullptr && report_json != nullptr, "phi and report_json must be non-null");
    check(xs != nullptr && us != nullptr && vs != nullptr && n >= 1 && dim >= 1, "triple arrays must be non-empty");
    std::vector<musielak::YoungTriple> triples(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto& triple = triples[static_cast<std::size_t>(i)];
      triple.x.assign(xs + static_cast<std::size_t>(i) * static_cast<std::size_t>(dim),
                      xs + static_cast<std::size_t>(i + 1) * static_cast<std::size_t>(dim));
      triple.u = us[i];
      triple.v = vs[i];
    }
    emit(report_json, musielak::json_of(musielak::young_check(phi->impl, triples, tol)));
  });
}

mo_status mo_holder_check(const mo_phi* phi, const mo_grid_function* u, const mo_grid_function* v, double tol,
                          char** report_json) {
  return wrap([&] {
    check(phi != nullptr && u != nullptr && v != nullptr && report_json != nullptr,
          "phi, u, v, report_json must be non-null");
    emit(report_json, musielak::json_of(musielak::holder_check(phi->impl, u->impl, v->impl, tol)));
  });
}

mo_status mo_biconjugate_audit(const mo_phi* phi, const double* x, int dim, double t, double tol,
                               char** report_json) {
  return wrap([&] {
    check(phi != nullptr && report_json != nullptr, "phi and report_json must be non-null");
    emit(report_json, musielak::json_of(musielak::biconjugate_audit(phi->impl, point(x, dim), t, tol)));
  });
}

/* ---- Structural conditions ------------------------------------------- */

mo_status mo_check_m1(const mo_phi* phi, const mo_domain* dom, const char* params_json, char** report_json) {
  return wrap([&] {
    check(phi != nullptr && dom != nullptr && report_json != nullptr, "phi, dom, report_json must be non-null");
    const json params = parse_json_or(params_json, json::object());
    musielak::Varphi varphi = params.contains("varphi")
                                  ? musielak::parse_varphi(params["varphi"])
                                  : (phi->impl.x_independent() ? musielak::varphi_constant_one()
                                                               : musielak::varphi_log_holder(1.0));
    musielak::M1Options options;
    options.seed = params.value("seed", 0u);
    emit(report_json,
         musielak::json_of(musielak::check_m1(phi->impl, *dom->impl, varphi, params.value("c", 1.0), options)));
  });
}

mo_status mo_check_m1_callback(const mo_phi* phi, const mo_domain* dom,
                               double (*varphi)(double, double, void*), void* ctx, double c, char** report_json) {
  return wrap([&] {
    check(phi != nullptr && dom != nullptr && varphi != nullptr && report_json != nullptr,
          "phi, dom, varphi, report_json must be non-null");
    auto fn = [varphi, ctx](double tau, double s) { return varphi(tau, s, ctx); };
    emit(report_json, musielak::json_of(musielak::check_m1(phi->impl, *dom->impl, fn, c)));
  });
}

mo_status mo_check_log_holder(const mo_phi* phi, const mo_domain* dom, double C0, char** report_json) {
  return wrap([&] {
    check(phi != nullptr && dom != nullptr && report_json != nullptr, "phi, dom, report_json must be non-null");
    const musielak::ExponentField* p = phi->impl.exponent_field();
    if (p == nullptr)
      musielak::raise(ErrorCode::invalid_argument, "phi family has no exponent field to check");
    emit(report_json, musielak::json_of(musielak::check_log_holder(*p, *dom->impl, C0)));
  });
}

mo_status mo_check_y(const mo_phi* phi, const mo_domain* dom, int axis, double segment_a, double segment_b,
                     const double* t0, const char* params_json, char** report_json) {
  return wrap([&] {
    check(phi != nullptr && dom != nullptr && report_json != nullptr, "phi, dom, report_json must be non-null");
    const json params = parse_json_or(params_json, json::object());
    musielak::YOptions options;
    options.x_resolution = params.value("x_resolution", options.x_resolution);
    options.t_count = params.value("t_count", options.t_count);
    options.sweep_per_axis = params.value("sweep_per_axis", options.sweep_per_axis);
    std::optional<double> threshold;
    if (t0 != nullptr) threshold = *t0;
    emit(report_json, musielak::json_of(musielak::check_y(phi->impl, *dom->impl, axis, segment_a, segment_b,
                                                          threshold, options)));
  });
}

mo_status mo_check_local_integrability(const mo_phi* phi, const mo_domain* dom, double c, const double* k_lo,
                                       const double* k_hi, int dim, char** report_json) {
  return wrap([&] {
    check(phi != nullptr && dom != nullptr && report_json != nullptr, "phi, dom, report_json must be non-null");
    check(k_lo != nullptr && k_hi != nullptr && dim == dom->impl->dim(), "sub-box arrays must match the domain");
    emit(report_json, musielak::json_of(musielak::check_local_integrability(
                          phi->impl, *dom->impl, c, {k_lo, static_cast<std::size_t>(dim)},
                          {k_hi, static_cast<std::size_t>(dim)})));
  });
}

/* ---- Poincare-type inequalities -------------------------------------- */

mo_status mo_poincare_constant(const mo_domain* dom, int m, double* out) {
  return wrap([&] {
    check(dom != nullptr && out != nullptr, "dom and out must be non-null");
    *out = musielak::poincare_constant(*dom->impl, m);
  });
}

mo_status mo_verify_modular_poincare(const mo_phi* phi, const mo_grid_function* u, int m, const double* c_override,
                                     double tol, char** report_json) {
  return wrap([&] {
    check(phi != nullptr && u != nullptr && report_json != nullptr, "phi, u, report_json must be non-null");
    std::optional<double> c;
    if (c_override != nullptr) c = *c_override;
    emit(report_json, musielak::json_of(musielak::verify_modular_poincare(phi->impl, u->impl, m, c, tol)));
  });
}

mo_status mo_verify_norm_poincare(const mo_phi* phi, const mo_grid_function* u, int m, double tol,
                                  char** report_json) {
  return wrap([&] {
    check(phi != nullptr && u != nullptr && report_json != nullptr, "phi, u, report_json must be non-null");
    emit(report_json, musielak::json_of(musielak::verify_norm_poincare(phi->impl, u->impl, m, tol)));
  });
}

namespace {

std::vector<musielak::BumpSpec> bumps_from_params(const json& params) {
  if (!params.contains("bumps") ||
      (params["bumps"].is_string() && params["bumps"].get<std::string>() == "default"))
    return musielak::default_test_functions();
  std::vector<musielak::BumpSpec> specs;
  for (const auto& b : params["bumps"]) {
    musielak::BumpSpec spec;
    spec.id = b.value("id", "bump" + std::to_string(specs.size()));
    spec.kind = b.value("kind", std::string("smooth_exp")) == "poly" ? musielak::BumpKind::poly
                                                                     : musielak::BumpKind::smooth_exp;
    spec.poly_k = b.value("k", 4);
    spec.center_fractions = b.at("center_fractions").get<std::vector<double>>();
    spec.width_fractions = b.at("width_fractions").get<std::vector<double>>();
    specs.push_back(std::move(spec));
  }
  return specs;
}

std::vector<double> scalings_from_params(const json& params) {
  if (!params.contains("scalings")) return musielak::default_scalings();
  std::vector<double> out;
  for (const auto& s : params["scalings"]) out.push_back(s.get<double>());
  return out;
}

}  // namespace

mo_status mo_counterexample_search(const mo_phi* phi, const mo_domain* dom, const char* params_json,
                                   char** report_json) {
  return wrap([&] {
    check(phi != nullptr && dom != nullptr && report_json != nullptr, "phi, dom, report_json must be non-null");
    const json params = parse_json_or(params_json, json::object());
    const auto bumps = bumps_from_params(params);
    const auto scalings = scalings_from_params(params);
    const double c = params.value("c", musielak::poincare_constant(*dom->impl, 1));
    emit(report_json,
         musielak::json_of(musielak::counterexample_search(phi->impl, dom->impl, bumps, scalings, c)));
  });
}

mo_status mo_sweep(const mo_phi* const* phis, int n_phis, const mo_domain* dom, const char* params_json,
                   char** report_json) {
  return wrap([&] {
    check(phis != nullptr && n_phis >= 0 && dom != nullptr && report_json != nullptr,
          "phis, dom, report_json must be non-null");
    const json params = parse_json_or(params_json, json::object());
    std::vector<const musielak::PhiFunction*> list;
    for (int i = 0; i < n_phis; ++i) {
      check(phis[i] != nullptr, "phi handles must be non-null");
      list.push_back(&phis[i]->impl);
    }
    musielak::SweepOptions options;
    options.m = params.value("m", 1);
    if (params.contains("c")) options.c = params["c"].get<double>();
    options.modular_tol = params.value("modular_tol", 1e-8);
    options.norm_tol = params.value("norm_tol", 1e-6);
    options.solver_tol = params.value("solver_tol", 1e-8);
    options.with_norms = params.value("norm", true);
    options.threads = params.value("threads", 0);
    const auto bumps = bumps_from_params(params);
    const auto scalings = scalings_from_params(params);
    emit(report_json,
         musielak::json_of(musielak::sweep(list, dom->impl, bumps, scalings, options), params.value("cells", true)));
  });
}

/* ---- Batch runner ----------------------------------------------------- */

mo_status mo_run_config(const char* config_json, const char* options_json, int* exit_code, char** summary_json) {
  return wrap([&] {
    check(exit_code != nullptr, "exit_code must be non-null");
    const json config = parse_json(config_json, "config");
    const json opts = parse_json_or(options_json, json::object());
    musielak::RunOptions options;
    options.out_dir = opts.value("out_dir", "");
    options.threads = opts.value("threads", 0);
    if (opts.contains("tolerance")) options.tolerance = opts["tolerance"].get<double>();
    if (opts.contains("seed")) options.seed = opts["seed"].get<unsigned>();
    options.stamp = opts.value("stamp", true);
    const auto outcome = musielak::run_config(config, options);
    *exit_code = outcome.exit_code;
    if (summary_json != nullptr) emit(summary_json, outcome.summary);
  });
}

mo_status mo_describe_config(const char* config_json, char** text) {
  return wrap([&] {
    check(text != nullptr, "text must be non-null");
    const json config = parse_json(config_json, "config");
    *text = dup_string(musielak::describe_config(config));
  });
}

}  // extern "C"
