#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "footwifi/random.hpp"
#include "footwifi/sync.hpp"
#include "footwifi/types.hpp"

namespace footwifi {

/// A past observation whose scan is close to the current one in RSS space.
struct ClosureMatch {
  std::size_t entry_index = 0;  // index into the observation list
  double d_rss = 0.0;           // dB
};

/// Noise corrections applied to one particle for one step.
struct StepNoise {
  double step = 0.0;     // added to the measured step length
  double heading = 0.0;  // added to the measured heading change
};

/// Advances one particle by a measured step plus its noise corrections:
/// heading += dtheta + noise.heading, then the position moves by
/// max(0, dl + noise.step) along the new heading.
void propagate_particle(Particle& particle, const StepMeasurement& step, StepNoise noise);

/// Inverse-RSS-distance weighted mean of the particle's own positions at the
/// matched entries. A match with d_rss == 0 short-circuits to that position.
/// Throws std::invalid_argument on an empty match list.
Position knn_estimate(const Particle& particle, std::span<const ClosureMatch> matches,
                      std::span<const ObservationEntry> observations);

/// Pointer positions u + m/N over the cumulative weights; returns the index
/// selected by each pointer. `offset` must lie in [0, 1/N).
std::vector<std::size_t> systematic_resample_indices(std::span<const double> weights,
                                                     double offset);

/// 1 / sum(w^2) for normalized weights.
double effective_sample_size(std::span<const double> weights);

/// Trajectory-history particle ensemble with RSS loop-closure re-weighting.
///
/// Every particle carries its full position history. The observation list is
/// shared and records, for each step, the scan (if any) and the cumulative
/// measured walking distance. step() is the normal entry point; the stages
/// are public so they can be exercised on their own.
class Ensemble {
 public:
  /// N particles at `start` with `heading`, weights 1/N, empty observation
  /// list. Throws std::invalid_argument on an invalid config.
  static Ensemble initialize(Position start, Heading heading, const FilterConfig& config);

  /// Rebuilds an ensemble from saved state. Throws std::invalid_argument if
  /// the particle count, trajectory lengths or observation list do not agree.
  /// Weights are renormalized.
  static Ensemble restore(std::vector<Particle> particles,
                          std::vector<ObservationEntry> observations, const FilterConfig& config);

  /// propagate -> update_weights -> maybe_resample. Returns the number of
  /// closure matches used.
  std::size_t step(const AlignedEpoch& epoch);

  /// Draws per-particle corrections from each slot's own random stream,
  /// moves every particle and appends an observation entry.
  void propagate(const AlignedEpoch& epoch);

  /// Past entries with a scan satisfying all of: d_rss < d_rss_thres,
  /// time gap > min_gap_time, walked gap > min_gap_dist.
  std::vector<ClosureMatch> find_similar_rss(const RssVector& current) const;

  /// Penalizes particles whose kNN fingerprint estimate is farther than
  /// d_pos_thres from their current position, then normalizes. No-op when
  /// `current` is absent or nothing similar was found. Returns the number of
  /// closure matches used.
  std::size_t update_weights(const std::optional<RssVector>& current);

  /// Systematic resampling of full trajectories when ESS < ess_fraction * N.
  /// Returns true if a resample happened.
  bool maybe_resample();

  /// Weighted mean of current positions, and the highest-weight particle
  /// (lowest index on ties).
  std::pair<Position, const Particle*> estimate() const;

  /// Multiplies weight i by factors[i] and renormalizes. All-zero (or
  /// non-finite) results reset to uniform and count a degeneracy event.
  void scale_weights(std::span<const double> factors);

  const std::vector<Particle>& particles() const { return particles_; }
  const std::vector<ObservationEntry>& observations() const { return observations_; }
  const FilterConfig& config() const { return config_; }
  std::size_t step_count() const { return step_count_; }
  std::size_t degeneracy_events() const { return degeneracy_events_; }
  std::size_t resample_count() const { return resample_count_; }
  std::vector<double> weights() const;

 private:
  explicit Ensemble(const FilterConfig& config) : config_(config), rng_(config.rng_seed) {}

  void normalize();

  FilterConfig config_;
  CounterRng rng_;
  std::vector<Particle> particles_;
  std::vector<ObservationEntry> observations_;
  std::size_t step_count_ = 0;
  std::size_t degeneracy_events_ = 0;
  std::size_t resample_count_ = 0;
};

}  // namespace footwifi
