#include "popper/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace popper {

namespace {

// Angular kicks do not depend on the reference distance; 1 m keeps the
// slit-A sampler's offsets numerically equal to angles.
constexpr double kSlitAReferenceDistance = 1.0;

} // namespace

std::string_view to_string(SlitInteraction m) noexcept {
  return m == SlitInteraction::Redirect ? "redirect" : "add-kick";
}

SlitInteraction parse_slit_interaction(std::string_view text) {
  if (text == "redirect") return SlitInteraction::Redirect;
  if (text == "add-kick") return SlitInteraction::AddKick;
  throw std::invalid_argument("slit interaction must be `redirect` or `add-kick`");
}

void detail::check_at_plane(const PhotonState& photon, const SlitElement& slit) {
  if (std::abs(photon.axial - slit.axial_position) > 1e-9)
    throw std::logic_error("photon is not at the slit plane");
}

PairEvent sample_pair(const TrialRng& rng, const ApparatusConfig& cfg) {
  RandomStream s = rng.stream(Channel::Source);
  PairEvent ev;
  const double half_source = 0.5 * cfg.source_diameter;
  ev.origin_y = s.uniform(-half_source, half_source);
  ev.theta_1 = s.uniform(-cfg.beam_half_divergence, cfg.beam_half_divergence);
  const double jitter = s.uniform(-cfg.momentum_jitter, cfg.momentum_jitter);
  ev.theta_2 = -ev.theta_1 + jitter;
  ev.arm_a = PhotonState{ev.origin_y, ev.theta_1, 0.0, true};
  ev.arm_b = PhotonState{ev.origin_y, ev.theta_2, 0.0, true};
  return ev;
}

PhotonState propagate(const PhotonState& photon, double distance) {
  if (!photon.alive) throw std::logic_error("cannot propagate an absorbed photon");
  if (distance < 0.0) throw std::logic_error("propagation distance must be non-negative");
  if (!(std::abs(photon.theta) < PhotonState::kParaxialLimit))
    throw std::logic_error("photon angle outside the paraxial range");
  PhotonState out = photon;
  out.y += photon.theta * distance;
  out.axial += distance;
  return out;
}

bool detect_d2(const PhotonState& photon, double detector_center_y, const ApparatusConfig& cfg) {
  return photon.alive && std::abs(photon.y - detector_center_y) <= 0.5 * cfg.detector_diameter;
}

Experiment::Experiment(ApparatusConfig cfg, SlitInteraction mode)
    : cfg_(cfg),
      mode_(mode),
      sampler_a_(DiffractionGeometry{cfg.slit_a_width, cfg.photon_wavelength, kSlitAReferenceDistance}),
      sampler_b_(DiffractionGeometry{cfg.slit_b_width, cfg.photon_wavelength, cfg.dist_slit_b_to_d2}) {}

PairEvent Experiment::run_trial(const TrialRng& rng, double detector_center_y) const {
  RandomStream stream_a = rng.stream(Channel::ArmA);
  RandomStream stream_b = rng.stream(Channel::ArmB);
  return resolve(sample_pair(rng, cfg_), stream_a, stream_b, detector_center_y);
}

PairEvent run_trial(const TrialRng& rng, const ApparatusConfig& cfg, double detector_center_y,
                    SlitInteraction mode) {
  return Experiment(cfg, mode).run_trial(rng, detector_center_y);
}

ScanHistogram run_scan(const ApparatusConfig& cfg, std::span<const double> positions,
                       std::uint64_t trials_per_position, std::uint64_t master_seed,
                       ScanOptions options) {
  cfg.validate();
  for (std::size_t i = 1; i < positions.size(); ++i)
    if (!(positions[i] > positions[i - 1]))
      throw std::invalid_argument("scan positions must be strictly increasing");

  const std::size_t npos = positions.size();
  ScanHistogram hist;
  hist.positions.assign(positions.begin(), positions.end());
  hist.coincidence.assign(npos, 0);
  hist.singles.assign(npos, 0);
  hist.trials_per_position = trials_per_position;
  hist.seed = master_seed;

  const std::uint64_t total = static_cast<std::uint64_t>(npos) * trials_per_position;
  if (total == 0) return hist;

  const Experiment experiment(cfg, options.slit_interaction);
  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, total));

  struct Tally {
    std::vector<std::uint64_t> coincidence;
    std::vector<std::uint64_t> singles;
  };
  std::vector<Tally> tallies(workers, Tally{std::vector<std::uint64_t>(npos, 0), std::vector<std::uint64_t>(npos, 0)});

  auto work = [&](unsigned w) {
    const std::uint64_t begin = total * w / workers;
    const std::uint64_t end = total * (w + 1) / workers;
    Tally& t = tallies[w];
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const auto p = static_cast<std::size_t>(idx / trials_per_position);
      const PairEvent ev = experiment.run_trial(TrialRng{master_seed, idx}, positions[p]);
      t.singles[p] += ev.d2_click ? 1 : 0;
      t.coincidence[p] += ev.coincidence() ? 1 : 0;
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  for (const Tally& t : tallies) {
    for (std::size_t p = 0; p < npos; ++p) {
      hist.coincidence[p] += t.coincidence[p];
      hist.singles[p] += t.singles[p];
    }
  }
  return hist;
}

} // namespace popper
