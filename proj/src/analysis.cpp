#include "popper/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss.hpp>

namespace popper {

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
  case Scenario::SlitBPresent: return "slit-b-present";
  case Scenario::GhostSlit: return "ghost-slit";
  case Scenario::SourceDiffraction: return "source-diffraction";
  }
  return "unknown";
}

double transverse_velocity(double y, double t) {
  if (!(t > 0.0)) throw std::domain_error("transit time must be positive");
  return y / t;
}

double transverse_momentum(double mass, double v_y) {
  if (!(mass > 0.0)) throw std::domain_error("mass must be positive");
  return mass * v_y;
}

UncertaintyProduct uncertainty_product(double slit_width, double p_y, const PhysicalConstants& k) {
  if (!(slit_width > 0.0)) throw std::domain_error("slit width must be positive");
  const double action = slit_width * p_y;
  return {action, action / k.h};
}

double default_observed_y(Scenario s) noexcept {
  return s == Scenario::SlitBPresent ? 2.2e-3 : 0.9e-3;
}

KinematicsReport kinematics_report(Scenario scenario, const ApparatusConfig& cfg,
                                   std::optional<double> observed_y, const PhysicalConstants& k) {
  const double y = observed_y.value_or(default_observed_y(scenario));
  double path = 0.0;
  switch (scenario) {
  case Scenario::SlitBPresent: path = path_length(cfg.dist_slit_b_to_d2, y); break;
  case Scenario::GhostSlit: path = cfg.dist_slit_b_to_d2; break;
  case Scenario::SourceDiffraction: path = cfg.dist_source_to_slit_b_plane; break;
  }
  const auto photon = PhotonKinematics::of(cfg.photon_wavelength, k);

  KinematicsReport r{};
  r.scenario = scenario;
  r.y = y;
  r.path = path;
  r.transit_time = flight_time(path, k);
  r.v_y = transverse_velocity(y, r.transit_time);
  r.p_y = transverse_momentum(photon.dynamic_mass, r.v_y);
  r.delta_y = cfg.slit_b_width;
  const auto up = uncertainty_product(r.delta_y, r.p_y, k);
  r.product = up.action;
  r.ratio_to_h = up.ratio_to_h;
  r.apparent_violation = r.ratio_to_h < 1.0 - KinematicsReport::kViolationMargin;
  return r;
}

Retrodiction retrodict_pair(double d2_y, double origin_y, const ApparatusConfig& cfg,
                            RetrodictionPlane plane, const PhysicalConstants& k) {
  if (cfg.slit_b_present)
    throw std::invalid_argument("retrodiction needs slit B absent");
  if (cfg.lens_enabled)
    throw std::invalid_argument("closed-form retrodiction needs the lens disabled");
  const double lever = plane == RetrodictionPlane::Detector
                           ? cfg.dist_source_to_slit_b_plane + cfg.dist_slit_b_to_d2
                           : cfg.dist_source_to_slit_b_plane;
  const double p = momentum_of(cfg.photon_wavelength, k);
  Retrodiction r{};
  r.theta_b = (d2_y - origin_y) / lever;
  r.p_y_b = p * r.theta_b;
  r.theta_a = -r.theta_b;
  r.p_y_a = p * r.theta_a;
  r.y_a_at_slit = origin_y + r.theta_a * cfg.dist_source_to_slit_a;
  return r;
}

std::vector<double> smooth3(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = std::min(n - 1, i + 1);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += v[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

namespace {

std::vector<double> as_double(const std::vector<std::uint64_t>& counts) {
  return {counts.begin(), counts.end()};
}

} // namespace

double extract_first_minimum(const ScanHistogram& hist, const DiffractionGeometry& geom, Profile which) {
  hist.validate();
  const double y1 = first_minimum(geom);
  const double lo = 0.5 * y1;
  const double hi = 1.5 * y1;
  const auto smooth = smooth3(as_double(hist.counts(which)));

  std::vector<std::size_t> window;
  for (std::size_t i = 0; i < hist.size(); ++i)
    if (hist.positions[i] >= lo && hist.positions[i] <= hi) window.push_back(i);
  if (window.size() < 3)
    throw FeatureNotFound("scan does not cover the first-minimum search window");

  std::size_t best = window.front();
  for (std::size_t i : window)
    if (smooth[i] < smooth[best]) best = i;
  if (!(smooth[best] < smooth[window.front()]) || !(smooth[best] < smooth[window.back()]))
    throw FeatureNotFound("no interior minimum in the first-minimum search window");
  return hist.positions[best];
}

double profile_width(const ScanHistogram& hist, Profile which) {
  hist.validate();
  const auto& c = hist.counts(which);
  if (c.empty()) throw FeatureNotFound("empty histogram");
  const auto peak_it = std::max_element(c.begin(), c.end());
  if (*peak_it == 0) throw FeatureNotFound("all-zero profile");
  const auto peak = static_cast<std::size_t>(peak_it - c.begin());
  const double half = 0.5 * static_cast<double>(*peak_it);
  auto value = [&](std::size_t i) { return static_cast<double>(c[i]); };
  auto cross = [&](std::size_t inside, std::size_t outside) {
    const double t = (value(inside) - half) / (value(inside) - value(outside));
    return hist.positions[inside] + t * (hist.positions[outside] - hist.positions[inside]);
  };

  std::optional<double> left;
  for (std::size_t i = peak; i > 0; --i)
    if (value(i - 1) < half) {
      left = cross(i, i - 1);
      break;
    }
  std::optional<double> right;
  for (std::size_t i = peak; i + 1 < c.size(); ++i)
    if (value(i + 1) < half) {
      right = cross(i, i + 1);
      break;
    }
  if (!left || !right) throw FeatureNotFound("profile does not drop to half maximum inside the scan");
  return *right - *left;
}

double chi_square_p_value(double statistic, std::size_t dof) {
  if (dof == 0) throw std::invalid_argument("chi-square needs at least one degree of freedom");
  if (statistic <= 0.0) return 1.0;
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

ChiSquareResult goodness_of_fit(const ScanHistogram& hist, Profile which, const IntensityModel& model,
                                double aperture_half_width) {
  hist.validate();
  const auto& obs = hist.counts(which);
  const std::size_t n = obs.size();
  if (n < 2) throw InsufficientCounts("need at least two bins");

  std::vector<double> weight(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = hist.positions[i];
    if (aperture_half_width > 0.0) {
      const double a = aperture_half_width;
      weight[i] = boost::math::quadrature::gauss<double, 20>::integrate(model, y - a, y + a) / (2.0 * a);
    } else {
      weight[i] = model(y);
    }
  }
  const double total_weight = std::accumulate(weight.begin(), weight.end(), 0.0);
  const double total_obs = std::accumulate(obs.begin(), obs.end(), 0.0);
  if (!(total_weight > 0.0) || !(total_obs > 0.0))
    throw InsufficientCounts("model or histogram has no mass");

  std::vector<double> e_bins;
  std::vector<double> o_bins;
  double e_acc = 0.0;
  double o_acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e_acc += total_obs * weight[i] / total_weight;
    o_acc += static_cast<double>(obs[i]);
    if (e_acc >= 5.0) {
      e_bins.push_back(e_acc);
      o_bins.push_back(o_acc);
      e_acc = o_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (e_bins.empty()) {
      e_bins.push_back(e_acc);
      o_bins.push_back(o_acc);
    } else {
      e_bins.back() += e_acc;
      o_bins.back() += o_acc;
    }
  }
  if (e_bins.size() < 2 || e_bins.front() < 5.0)
    throw InsufficientCounts("fewer than two bins with an expectation of 5 or more");

  double chi2 = 0.0;
  for (std::size_t i = 0; i < e_bins.size(); ++i) {
    const double d = o_bins[i] - e_bins[i];
    chi2 += d * d / e_bins[i];
  }
  const std::size_t dof = e_bins.size() - 1;
  return {chi2, dof, chi_square_p_value(chi2, dof), e_bins.size()};
}

ChiSquareResult compare_profiles(const ScanHistogram& hist) {
  hist.validate();
  const auto& r = hist.coincidence;
  const auto& s = hist.singles;
  const double rt = std::accumulate(r.begin(), r.end(), 0.0);
  const double st = std::accumulate(s.begin(), s.end(), 0.0);
  if (!(rt > 0.0) || !(st > 0.0)) throw InsufficientCounts("a profile has no counts");
  const double fr = rt / (rt + st);
  const double fs = st / (rt + st);

  std::vector<double> rb;
  std::vector<double> sb;
  double ra = 0.0;
  double sa = 0.0;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    ra += static_cast<double>(r[i]);
    sa += static_cast<double>(s[i]);
    const double both = ra + sa;
    if (both * fr >= 5.0 && both * fs >= 5.0) {
      rb.push_back(ra);
      sb.push_back(sa);
      ra = sa = 0.0;
    }
  }
  if (ra + sa > 0.0) {
    if (rb.empty()) {
      rb.push_back(ra);
      sb.push_back(sa);
    } else {
      rb.back() += ra;
      sb.back() += sa;
    }
  }
  if (rb.size() < 2) throw InsufficientCounts("fewer than two populated bins");

  const double k1 = std::sqrt(st / rt);
  const double k2 = std::sqrt(rt / st);
  double chi2 = 0.0;
  for (std::size_t i = 0; i < rb.size(); ++i) {
    const double d = k1 * rb[i] - k2 * sb[i];
    chi2 += d * d / (rb[i] + sb[i]);
  }
  const std::size_t dof = rb.size() - 1;
  return {chi2, dof, chi_square_p_value(chi2, dof), rb.size()};
}

} // namespace popper
