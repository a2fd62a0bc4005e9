#pragma once

namespace popper {

/// Reference values of Planck's constant and the speed of light.
///
/// The default set is the older 7-digit pair (h = 6.626176e-34 J s,
/// c = 2.997925e8 m/s). Regression values printed by `popper reproduce-paper`
/// are only reproduced digit-for-digit with this set.
struct PhysicalConstants {
  double h; ///< J s
  double c; ///< m/s

  static constexpr PhysicalConstants reference() { return {6.626176e-34, 2.997925e8}; }
  /// CODATA 2018 exact values.
  static constexpr PhysicalConstants codata2018() { return {6.62607015e-34, 299792458.0}; }
};

inline constexpr PhysicalConstants kReferenceConstants = PhysicalConstants::reference();

// All four throw std::domain_error outside their domain.
double energy_of(double wavelength, const PhysicalConstants& k = kReferenceConstants);
double momentum_of(double wavelength, const PhysicalConstants& k = kReferenceConstants);
double dynamic_mass_of(double momentum, const PhysicalConstants& k = kReferenceConstants);
double flight_time(double path_length, const PhysicalConstants& k = kReferenceConstants);

/// E, P and M = P/c of a photon of the given wavelength.
struct PhotonKinematics {
  double wavelength;
  double energy;
  double momentum;
  double dynamic_mass;

  static PhotonKinematics of(double wavelength, const PhysicalConstants& k = kReferenceConstants);
};

} // namespace popper
