#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "popper/apparatus.hpp"
#include "popper/diffraction.hpp"
#include "popper/histogram.hpp"
#include "popper/kinematics.hpp"

namespace popper {

/// A histogram feature (minimum, half-maximum crossing) is not present.
class FeatureNotFound : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Too few counts for a chi-square test to mean anything.
class InsufficientCounts : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Retrodictive kinematics

/// Ways of reading a transverse displacement as the signature of a
/// diffraction event.
enum class Scenario {
  SlitBPresent,      ///< real slit B, 2.2 mm minimum, 500 mm lever arm
  GhostSlit,         ///< inner curve read as diffraction at the empty slit-B plane
  SourceDiffraction, ///< inner curve read as diffraction at the source, 1245 mm
};

std::string_view to_string(Scenario s) noexcept;

/// Position-momentum product and its ratio to h.
struct UncertaintyProduct {
  double action;
  double ratio_to_h;
};

double transverse_velocity(double y, double t);
double transverse_momentum(double mass, double v_y);
UncertaintyProduct uncertainty_product(double slit_width, double p_y,
                                       const PhysicalConstants& k = kReferenceConstants);

struct KinematicsReport {
  Scenario scenario;
  double y;            ///< displacement read off the detection profile
  double path;         ///< flight path from the diffracting plane to D2
  double transit_time;
  double v_y;
  double p_y;
  double delta_y;      ///< slit width taken as the position uncertainty
  double product;      ///< delta_y * p_y
  double ratio_to_h;
  bool apparent_violation; ///< ratio_to_h < 1 - kViolationMargin

  static constexpr double kViolationMargin = 0.05;
};

/// Observed displacement used when none is supplied: 2.2 mm for the
/// slit-B-present curve, 0.9 mm for the inner curve.
double default_observed_y(Scenario s) noexcept;

/// Chains flight time -> v_y -> P_y -> product. The slit-B-present path is
/// the oblique sqrt(D^2 + y^2); the other two use the axial distance.
KinematicsReport kinematics_report(Scenario scenario, const ApparatusConfig& cfg,
                                   std::optional<double> observed_y = std::nullopt,
                                   const PhysicalConstants& k = kReferenceConstants);

/// Where the measured D2 height is taken to lie for the inversion.
enum class RetrodictionPlane {
  Detector, ///< d2_y is the D2 reading; lever arm source -> D2
  SlitB,    ///< d2_y is referred to the slit-B plane; lever arm source -> slit B
};

struct Retrodiction {
  double theta_b;
  double p_y_b;
  double theta_a;
  double p_y_a;       ///< photon A transverse momentum on entering slit A
  double y_a_at_slit; ///< photon A height at the slit-A plane
};

/// Inverts the jitter-free straight-line geometry (slit B absent, lens
/// disabled) from a D2 reading and an assumed emission point. Pass
/// origin_y = 0 when the emission point is unknown; the result then carries
/// a systematic of up to half the source diameter in position.
/// Throws std::invalid_argument when slit B is present or the lens is on.
Retrodiction retrodict_pair(double d2_y, double origin_y, const ApparatusConfig& cfg,
                            RetrodictionPlane plane = RetrodictionPlane::Detector,
                            const PhysicalConstants& k = kReferenceConstants);

// ---------------------------------------------------------------------------
// Histogram features

/// Centred 3-bin moving average; the two end bins average over the bins
/// that exist.
std::vector<double> smooth3(const std::vector<double>& v);

/// Position of the smoothed minimum in [0.5, 1.5] x lambda D / s. Throws
/// FeatureNotFound when fewer than three bins fall in the window or the
/// minimum is not strictly below both window ends.
double extract_first_minimum(const ScanHistogram& hist, const DiffractionGeometry& geom,
                             Profile which = Profile::Coincidence);

/// Full width at half maximum, interpolating linearly at the crossings.
/// Throws FeatureNotFound for an all-zero profile or one that does not fall
/// below half maximum on both sides inside the scan.
double profile_width(const ScanHistogram& hist, Profile which);

struct ChiSquareResult {
  double statistic;
  std::size_t dof;
  double p_value;
  std::size_t bins_used; ///< after merging
};

using IntensityModel = std::function<double(double)>;

/// Pearson chi-square of a profile against `model`, normalised to the
/// observed total. Each bin's expectation is the model averaged over
/// [y - aperture, y + aperture] (point value for aperture 0). Adjacent bins
/// are merged left to right until every expectation is at least 5.
/// Throws InsufficientCounts if fewer than two bins survive.
ChiSquareResult goodness_of_fit(const ScanHistogram& hist, Profile which, const IntensityModel& model,
                                double aperture_half_width = 0.0);

/// Two-sample chi-square homogeneity test between the singles and
/// coincidence shapes, with unequal totals. Adjacent bins are merged until
/// both samples expect at least 5 counts in each.
ChiSquareResult compare_profiles(const ScanHistogram& hist);

/// Upper tail of the chi-square distribution.
double chi_square_p_value(double statistic, std::size_t dof);

} // namespace popper
