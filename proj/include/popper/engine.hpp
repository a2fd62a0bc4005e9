#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "popper/apparatus.hpp"
#include "popper/diffraction.hpp"
#include "popper/histogram.hpp"
#include "popper/rng.hpp"

namespace popper {

/// Realist state of one photon at an axial plane of the unfolded setup.
struct PhotonState {
  double y = 0.0;      ///< transverse position, m
  double theta = 0.0;  ///< transverse angle, rad; P_y = momentum_of(lambda) * theta
  double axial = 0.0;  ///< distance travelled from the source, m
  bool alive = true;   ///< false once absorbed by a slit screen

  static constexpr double kParaxialLimit = 0.1;
};

/// One down-converted pair, from emission to detection.
struct PairEvent {
  double origin_y = 0.0; ///< shared emission point
  double theta_1 = 0.0;  ///< arm A emission angle
  double theta_2 = 0.0;  ///< arm B emission angle, -theta_1 + jitter
  PhotonState arm_a;
  PhotonState arm_b;
  bool passed_slit_a = false;
  bool d1_click = false;
  std::optional<double> d2_hit_y; ///< arrival height at the D2 plane, if photon B got there
  bool d2_click = false;

  [[nodiscard]] bool coincidence() const noexcept { return d1_click && d2_click; }
};

/// What a slit does to the angle of a photon that passes it.
enum class SlitInteraction {
  /// Outgoing angle is the diffraction draw alone; the incoming direction is
  /// forgotten. Every passing photon leaves with the single-slit pattern.
  Redirect,
  /// Outgoing angle is incoming angle plus the diffraction draw.
  AddKick,
};

std::string_view to_string(SlitInteraction m) noexcept;
/// Accepts "redirect" and "add-kick"; throws std::invalid_argument otherwise.
SlitInteraction parse_slit_interaction(std::string_view text);

template <class S>
concept UniformSource = requires(S s) {
  { s.uniform() } -> std::convertible_to<double>;
};

/// Emission: origin uniform across the source diameter, theta_1 uniform in
/// +-beam_half_divergence, theta_2 = -theta_1 + jitter with jitter uniform
/// in +-momentum_jitter. Draws only from the Source channel.
PairEvent sample_pair(const TrialRng& rng, const ApparatusConfig& cfg);

/// Free paraxial flight. Throws std::logic_error for an absorbed photon or a
/// negative distance.
PhotonState propagate(const PhotonState& photon, double distance);

/// Passage through a slit screen. An absent slit leaves the photon alone; a
/// photon outside the aperture is absorbed; otherwise its angle is set by a
/// draw from the single-slit pattern as `mode` says. Position is unchanged.
/// Exactly one uniform is consumed from `source` whenever the slit is present
/// and the photon alive.
template <UniformSource Source>
PhotonState transit_slit(const PhotonState& photon, const SlitElement& slit,
                         const DiffractionSampler& sampler, Source& source,
                         SlitInteraction mode = SlitInteraction::Redirect);

/// Hit iff the photon is alive and within the detector radius of the centre.
bool detect_d2(const PhotonState& photon, double detector_center_y, const ApparatusConfig& cfg);

/// A configuration with its diffraction samplers built once. Immutable and
/// shareable across threads.
class Experiment {
public:
  explicit Experiment(ApparatusConfig cfg, SlitInteraction mode = SlitInteraction::Redirect);

  [[nodiscard]] const ApparatusConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] SlitInteraction slit_interaction() const noexcept { return mode_; }
  [[nodiscard]] const DiffractionSampler& slit_a_sampler() const noexcept { return sampler_a_; }
  [[nodiscard]] const DiffractionSampler& slit_b_sampler() const noexcept { return sampler_b_; }

  /// Arm A alone: emission state -> (lens) -> slit A. Never reads slit-B state.
  template <UniformSource Source>
  [[nodiscard]] PhotonState transport_arm_a(const PhotonState& emitted, Source& source) const;

  /// Arm B alone: emission state -> slit-B plane -> D2 plane.
  template <UniformSource Source>
  [[nodiscard]] PhotonState transport_arm_b(const PhotonState& emitted, Source& source) const;

  /// Transports both photons of an emitted pair and fills in the outcome.
  /// Each arm only ever touches its own photon and its own source.
  template <UniformSource SourceA, UniformSource SourceB>
  [[nodiscard]] PairEvent resolve(PairEvent pair, SourceA& arm_a, SourceB& arm_b,
                                  double detector_center_y) const;

  [[nodiscard]] PairEvent run_trial(const TrialRng& rng, double detector_center_y) const;

private:
  ApparatusConfig cfg_;
  SlitInteraction mode_;
  DiffractionSampler sampler_a_;
  DiffractionSampler sampler_b_;
};

PairEvent run_trial(const TrialRng& rng, const ApparatusConfig& cfg, double detector_center_y,
                    SlitInteraction mode = SlitInteraction::Redirect);

struct ScanOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  SlitInteraction slit_interaction = SlitInteraction::Redirect;
};

/// Scans D2 over `positions`. Trial i at position p uses
/// TrialRng{master_seed, p * trials_per_position + i}, so the result does not
/// depend on the worker count. Throws std::invalid_argument for unordered
/// positions.
ScanHistogram run_scan(const ApparatusConfig& cfg, std::span<const double> positions,
                       std::uint64_t trials_per_position, std::uint64_t master_seed,
                       ScanOptions options = {});

// -- implementation ---------------------------------------------------------

namespace detail {
void check_at_plane(const PhotonState& photon, const SlitElement& slit);
}

template <UniformSource Source>
PhotonState transit_slit(const PhotonState& photon, const SlitElement& slit,
                         const DiffractionSampler& sampler, Source& source, SlitInteraction mode) {
  if (!slit.present || !photon.alive) return photon;
  detail::check_at_plane(photon, slit);
  const double u = source.uniform();
  PhotonState out = photon;
  if (std::abs(photon.y) > 0.5 * slit.width) {
    out.alive = false;
    return out;
  }
  const double kick = sampler.sample_angle(u);
  out.theta = mode == SlitInteraction::AddKick ? out.theta + kick : kick;
  return out;
}

template <UniformSource Source>
PhotonState Experiment::transport_arm_a(const PhotonState& emitted, Source& source) const {
  PhotonState p = emitted;
  if (cfg_.lens_enabled) {
    const ThinLens lens = cfg_.lens();
    p = propagate(p, lens.axial_position);
    p.theta = apply_thin_lens(lens, p.y, p.theta);
    p = propagate(p, cfg_.lens_to_slit_a);
  } else {
    p = propagate(p, cfg_.dist_source_to_slit_a);
  }
  return transit_slit(p, cfg_.slit_a(), sampler_a_, source, mode_);
}

template <UniformSource Source>
PhotonState Experiment::transport_arm_b(const PhotonState& emitted, Source& source) const {
  PhotonState p = propagate(emitted, cfg_.dist_source_to_slit_b_plane);
  p = transit_slit(p, cfg_.slit_b(), sampler_b_, source, mode_);
  if (p.alive) p = propagate(p, cfg_.dist_slit_b_to_d2);
  return p;
}

template <UniformSource SourceA, UniformSource SourceB>
PairEvent Experiment::resolve(PairEvent pair, SourceA& arm_a, SourceB& arm_b,
                              double detector_center_y) const {
  pair.arm_a = transport_arm_a(pair.arm_a, arm_a);
  pair.passed_slit_a = pair.arm_a.alive;
  // Collection lens behind slit A sends every transmitted photon into D1.
  pair.d1_click = pair.passed_slit_a;

  pair.arm_b = transport_arm_b(pair.arm_b, arm_b);
  pair.d2_hit_y.reset();
  if (pair.arm_b.alive) pair.d2_hit_y = pair.arm_b.y;
  pair.d2_click = detect_d2(pair.arm_b, detector_center_y, cfg_);
  return pair;
}

} // namespace popper
