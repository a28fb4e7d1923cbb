// Run configuration: metric selection, seeds, sample counts, sweep and
// torus parameters, and every tolerance used by the checks.  The JSON form
// mirrors the struct field-for-field; absent keys keep their defaults.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "biorth/metric.hpp"
#include "biorth/quotient.hpp"

namespace biorth {

inline std::string family_name(MetricFamily f) {
  switch (f) {
    case MetricFamily::product: return "product";
    case MetricFamily::cheeger: return "cheeger";
    case MetricFamily::deformed: return "deformed";
  }
  return "product";
}

inline MetricFamily family_from_name(const std::string& s) {
  if (s == "product") return MetricFamily::product;
  if (s == "cheeger") return MetricFamily::cheeger;
  if (s == "deformed") return MetricFamily::deformed;
  throw std::invalid_argument("unknown metric family: " + s);
}

// Flat key-value serialization of MetricSpec.
inline nlohmann::ordered_json metric_to_json(const MetricSpec& m) {
  nlohmann::ordered_json j;
  j["family"] = family_name(m.family);
  j["t"] = m.t;
  j["s"] = m.s;
  j["r_in"] = m.r_in;
  j["r_out"] = m.r_out;
  return j;
}

inline MetricSpec metric_from_json(const nlohmann::json& j) {
  const MetricFamily fam = family_from_name(j.value("family", std::string("deformed")));
  const double t = j.value("t", 1.0);
  const double s = j.value("s", 8e-4);
  const double r_in = j.value("r_in", kDefaultRin);
  const double r_out = j.value("r_out", kDefaultRout);
  switch (fam) {
    case MetricFamily::product: return MetricSpec::product();
    case MetricFamily::cheeger: return MetricSpec::cheeger(t);
    case MetricFamily::deformed: return MetricSpec::deformed(t, s, r_in, r_out);
  }
  return MetricSpec::product();
}

struct RunConfig {
  MetricSpec metric = MetricSpec::deformed(1.0, 8e-4);
  std::uint64_t seed = 20240817;

  // sampling
  int transversal_points = 64;
  int plane_samples = 4096;
  int pair_samples = 512;
  int optimizer_starts = 8;
  int refine_steps = 200;
  int random_points = 1000;
  int invariance_points = 100;
  int rotation_samples = 50;
  int flat_plane_checks = 20;
  int fd_planes = 50;
  int regular_points = 10;
  int diagonal_points = 10;
  int iso_frames = 10000;
  int iso_refine = 300;

  // theta sweep
  std::vector<double> thetas = {1.2, 0.8, 0.4};
  double theta_main = 0.8;
  double s_max = 0.2;
  int bisect_iters = 12;
  int bisect_transversal = 33;
  int bisect_pair_samples = 192;
  int bisect_starts = 4;
  int bisect_refine = 80;
  int full4d_spot_points = 24;

  // torus / Gauss-Bonnet
  int torus_grid_checks = 32;
  int torus_grid_integral = 192;

  // quotient bundle
  double quotient_s = 0.02;
  double quotient_r_in = kQuotientRin;
  double quotient_r_out = kQuotientRout;
  int quotient_sample_points = 25;
  int quotient_planes_per_point = 40;
  int quotient_flat_points = 10;
  int quotient_gauge_points = 20;

  // tolerances
  double tol_sample_min = 1e-8;
  double tol_family_match = 1e-3;
  double tol_second_min = 1e-4;
  double tol_normal_component = 5e-2;
  double tol_span_fix = 1e-10;
  double tol_kc_zero = 1e-8;
  double tol_kc_pos = 1e-8;
  double tol_kc_slope = 1e-7;
  double tol_fv_fd = 1e-5;
  double tol_fv_value = 1e-6;
  double tol_exponent = 0.2;
  double tol_hess = 1e-6;
  double tol_z2 = 1e-12;
  double tol_so3 = 1e-9;
  double tol_theta_g = 1e-9;
  double tol_margin = 1e-5;
  double tol_transversal_vs_full = 2e-3;
  double tol_gb_integral = 1e-3;
  double tol_gb_geodesic = 1e-6;
  double tol_gb_gauss = 1e-7;
  double tol_quotient_sec = 1e-8;
  double tol_gauge = 1e-8;
};

#define BIORTH_CFG_FIELDS(X)                                                              \
  X(seed) X(transversal_points) X(plane_samples) X(pair_samples) X(optimizer_starts)     \
  X(refine_steps) X(random_points) X(invariance_points) X(rotation_samples)              \
  X(flat_plane_checks) X(fd_planes) X(regular_points) X(diagonal_points) X(iso_frames)   \
  X(iso_refine) X(thetas) X(theta_main) X(s_max) X(bisect_iters) X(bisect_transversal)   \
  X(bisect_pair_samples) X(bisect_starts) X(bisect_refine) X(full4d_spot_points)         \
  X(torus_grid_checks) X(torus_grid_integral) X(quotient_s) X(quotient_r_in)             \
  X(quotient_r_out) X(quotient_sample_points) X(quotient_planes_per_point)               \
  X(quotient_flat_points) X(quotient_gauge_points) X(tol_sample_min)                     \
  X(tol_family_match) X(tol_second_min) X(tol_normal_component) X(tol_span_fix)          \
  X(tol_kc_zero) X(tol_kc_pos) X(tol_kc_slope) X(tol_fv_fd) X(tol_fv_value)              \
  X(tol_exponent) X(tol_hess) X(tol_z2) X(tol_so3) X(tol_theta_g) X(tol_margin)          \
  X(tol_transversal_vs_full) X(tol_gb_integral) X(tol_gb_geodesic) X(tol_gb_gauss)       \
  X(tol_quotient_sec) X(tol_gauge)

inline nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["metric"] = metric_to_json(c.metric);
#define BIORTH_PUT(f) j[#f] = c.f;
  BIORTH_CFG_FIELDS(BIORTH_PUT)
#undef BIORTH_PUT
  return j;
}

#define BIORTH_CFG_TOLERANCES(X)                                                          \
  X(tol_sample_min) X(tol_family_match) X(tol_second_min) X(tol_normal_component)        \
  X(tol_span_fix) X(tol_kc_zero) X(tol_kc_pos) X(tol_kc_slope) X(tol_fv_fd)              \
  X(tol_fv_value) X(tol_exponent) X(tol_hess) X(tol_z2) X(tol_so3) X(tol_theta_g)        \
  X(tol_margin) X(tol_transversal_vs_full) X(tol_gb_integral) X(tol_gb_geodesic)         \
  X(tol_gb_gauss) X(tol_quotient_sec) X(tol_gauge)

inline void validate_config(const RunConfig& c) {
#define BIORTH_CHECK_TOL(f) \
  if (!(c.f > 0.0)) throw std::invalid_argument("RunConfig: " #f " must be > 0");
  BIORTH_CFG_TOLERANCES(BIORTH_CHECK_TOL)
#undef BIORTH_CHECK_TOL
  for (const double th : c.thetas)
    if (!(th > 0.0)) throw std::invalid_argument("RunConfig: thetas must be positive");
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  if (j.contains("metric")) c.metric = metric_from_json(j.at("metric"));
#define BIORTH_GET(f) if (j.contains(#f)) j.at(#f).get_to(c.f);
  BIORTH_CFG_FIELDS(BIORTH_GET)
#undef BIORTH_GET
  validate_config(c);
  return c;
}

}  // namespace biorth
