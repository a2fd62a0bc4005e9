#include "popper/kinematics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace popper {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::domain_error(std::string(what) + " must be positive and finite");
}

void require_non_negative(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value))
    throw std::domain_error(std::string(what) + " must be non-negative and finite");
}

} // namespace

double energy_of(double wavelength, const PhysicalConstants& k) {
  require_positive(wavelength, "wavelength");
  return k.h * k.c / wavelength;
}

double momentum_of(double wavelength, const PhysicalConstants& k) {
  require_positive(wavelength, "wavelength");
  return k.h / wavelength;
}

double dynamic_mass_of(double momentum, const PhysicalConstants& k) {
  require_non_negative(momentum, "momentum");
  return momentum / k.c;
}

double flight_time(double path_length, const PhysicalConstants& k) {
  require_non_negative(path_length, "path length");
  return path_length / k.c;
}

PhotonKinematics PhotonKinematics::of(double wavelength, const PhysicalConstants& k) {
  const double p = momentum_of(wavelength, k);
  return {wavelength, energy_of(wavelength, k), p, dynamic_mass_of(p, k)};
}

} // namespace popper
