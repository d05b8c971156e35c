#include "footwifi/particle_filter.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "footwifi/parallel.hpp"
#include "footwifi/rss.hpp"

namespace footwifi {

namespace {

// Stream reserved for ensemble-level draws (the resampling offset).
constexpr std::uint64_t kEnsembleStream = ~std::uint64_t{0};

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("FilterConfig: " + what);
}

}  // namespace

void FilterConfig::validate() const {
  require(n_particles > 0, "n_particles must be > 0");
  require(sigma_step >= 0.0 && std::isfinite(sigma_step), "sigma_step must be >= 0");
  require(sigma_heading >= 0.0 && std::isfinite(sigma_heading), "sigma_heading must be >= 0");
  require(d_rss_thres > 0.0, "d_rss_thres must be > 0");
  require(d_pos_thres > 0.0, "d_pos_thres must be > 0");
  require(min_gap_time >= 0.0, "min_gap_time must be >= 0");
  require(min_gap_dist >= 0.0, "min_gap_dist must be >= 0");
  require(penalty_factor > 0.0 && penalty_factor <= 1.0, "penalty_factor must be in (0, 1]");
  require(missing_fill_dbm <= kRssCeilDbm, "missing_fill_dbm must be <= 0");
  require(ess_fraction > 0.0 && ess_fraction <= 1.0, "ess_fraction must be in (0, 1]");
}

void propagate_particle(Particle& particle, const StepMeasurement& step, StepNoise noise) {
  particle.heading.theta += step.delta_theta + noise.heading;
  const double length = std::max(0.0, step.delta_l + noise.step);
  const Position prev = particle.trajectory.back();
  particle.trajectory.push_back(
      {prev.x + length * std::cos(particle.heading.theta),
       prev.y + length * std::sin(particle.heading.theta)});
}

Position knn_estimate(const Particle& particle, std::span<const ClosureMatch> matches,
                      std::span<const ObservationEntry> observations) {
  if (matches.empty()) throw std::invalid_argument("knn_estimate: no matches");
  for (const auto& m : matches) {
    if (m.d_rss == 0.0) return particle.trajectory.at(observations[m.entry_index].step_index);
  }
  double norm = 0.0;
  Position acc;
  for (const auto& m : matches) {
    const double w = 1.0 / m.d_rss;
    const Position p = particle.trajectory.at(observations[m.entry_index].step_index);
    acc.x += w * p.x;
    acc.y += w * p.y;
    norm += w;
  }
  return {acc.x / norm, acc.y / norm};
}

std::vector<std::size_t> systematic_resample_indices(std::span<const double> weights,
                                                     double offset) {
  const std::size_t n = weights.size();
  std::vector<std::size_t> out;
  out.reserve(n);
  if (n == 0) return out;

  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] > 0.0) last_positive = i;
  }
  const double step = 1.0 / static_cast<double>(n);
  std::size_t i = 0;
  double cumulative = weights[0];
  for (std::size_t m = 0; m < n; ++m) {
    const double pointer = offset + static_cast<double>(m) * step;
    // Half-open buckets [c_{i-1}, c_i) so zero-weight particles are never hit.
    while (pointer >= cumulative && i < last_positive) cumulative += weights[++i];
    out.push_back(i);
  }
  return out;
}

double effective_sample_size(std::span<const double> weights) {
  double sum_sq = 0.0;
  for (double w : weights) sum_sq += w * w;
  return sum_sq > 0.0 ? 1.0 / sum_sq : 0.0;
}

Ensemble Ensemble::initialize(Position start, Heading heading, const FilterConfig& config) {
  config.validate();
  Ensemble ens(config);
  const double w = 1.0 / static_cast<double>(config.n_particles);
  ens.particles_.assign(config.n_particles, Particle{{start}, heading, w});
  return ens;
}

Ensemble Ensemble::restore(std::vector<Particle> particles,
                           std::vector<ObservationEntry> observations,
                           const FilterConfig& config) {
  config.validate();
  if (particles.size() != config.n_particles) {
    throw std::invalid_argument("restore: particle count differs from n_particles");
  }
  const std::size_t len = observations.size() + 1;
  for (const auto& p : particles) {
    if (p.trajectory.size() != len) {
      throw std::invalid_argument("restore: trajectory length must be observations + 1");
    }
    if (!(p.weight >= 0.0)) throw std::invalid_argument("restore: negative weight");
  }
  for (std::size_t e = 0; e < observations.size(); ++e) {
    if (observations[e].step_index != e + 1) {
      throw std::invalid_argument("restore: observation step indices must be 1..k");
    }
    if (e > 0 && observations[e].walked_dist < observations[e - 1].walked_dist) {
      throw std::invalid_argument("restore: walked distance must be nondecreasing");
    }
  }
  Ensemble ens(config);
  ens.particles_ = std::move(particles);
  ens.observations_ = std::move(observations);
  ens.step_count_ = ens.observations_.size();
  ens.normalize();
  return ens;
}

std::size_t Ensemble::step(const AlignedEpoch& epoch) {
  propagate(epoch);
  const std::size_t matches = update_weights(epoch.rss);
  maybe_resample();
  return matches;
}

void Ensemble::propagate(const AlignedEpoch& epoch) {
  const std::uint64_t k = step_count_ + 1;
  const double sigma_step = config_.sigma_step;
  const double sigma_heading = config_.sigma_heading;
  parallel_for(particles_.size(), config_.threads, [&](std::size_t i) {
    StepNoise noise;
    if (sigma_step > 0.0) noise.step = sigma_step * rng_.normal(i, 2 * k);
    if (sigma_heading > 0.0) noise.heading = sigma_heading * rng_.normal(i, 2 * k + 1);
    propagate_particle(particles_[i], epoch.step, noise);
  });

  const double walked = (observations_.empty() ? 0.0 : observations_.back().walked_dist) +
                        epoch.step.delta_l;
  observations_.push_back(ObservationEntry{k, epoch.step.t, epoch.rss, walked});
  step_count_ = k;
}

std::vector<ClosureMatch> Ensemble::find_similar_rss(const RssVector& current) const {
  std::vector<ClosureMatch> matches;
  if (observations_.empty()) return matches;
  const double walked_now = observations_.back().walked_dist;
  for (std::size_t e = 0; e < observations_.size(); ++e) {
    const auto& entry = observations_[e];
    if (!entry.rss) continue;
    if (!(current.t - entry.rss->t > config_.min_gap_time)) continue;
    if (!(walked_now - entry.walked_dist > config_.min_gap_dist)) continue;
    if (current.empty() && entry.rss->empty()) continue;
    const double d = rss_distance(current, *entry.rss, config_.missing_fill_dbm);
    if (d < config_.d_rss_thres) matches.push_back({e, d});
  }
  return matches;
}

std::size_t Ensemble::update_weights(const std::optional<RssVector>& current) {
  if (!current) return 0;
  const auto matches = find_similar_rss(*current);
  if (matches.empty()) return 0;

  std::vector<double> factors(particles_.size(), 1.0);
  parallel_for(particles_.size(), config_.threads, [&](std::size_t i) {
    const Position fingerprint = knn_estimate(particles_[i], matches, observations_);
    if (distance(fingerprint, particles_[i].current()) > config_.d_pos_thres) {
      factors[i] = config_.penalty_factor;
    }
  });
  scale_weights(factors);
  return matches.size();
}

void Ensemble::scale_weights(std::span<const double> factors) {
  if (factors.size() != particles_.size()) {
    throw std::invalid_argument("scale_weights: factor count does not match particle count");
  }
  for (std::size_t i = 0; i < particles_.size(); ++i) particles_[i].weight *= factors[i];
  normalize();
}

void Ensemble::normalize() {
  double total = 0.0;
  for (const auto& p : particles_) total += p.weight;
  if (!(total > 0.0) || !std::isfinite(total)) {
    ++degeneracy_events_;
    std::clog << "footwifi: weight degeneracy at step " << step_count_
              << ", resetting to uniform\n";
    const double w = 1.0 / static_cast<double>(particles_.size());
    for (auto& p : particles_) p.weight = w;
    return;
  }
  for (auto& p : particles_) p.weight /= total;
}

bool Ensemble::maybe_resample() {
  const auto w = weights();
  const double n = static_cast<double>(particles_.size());
  if (!(effective_sample_size(w) < config_.ess_fraction * n)) return false;

  const double offset = (1.0 - rng_.uniform(kEnsembleStream, step_count_)) / n;
  const auto picks = systematic_resample_indices(w, offset);
  std::vector<Particle> next;
  next.reserve(particles_.size());
  for (std::size_t idx : picks) next.push_back(particles_[idx]);
  const double uniform = 1.0 / n;
  for (auto& p : next) p.weight = uniform;
  particles_ = std::move(next);
  ++resample_count_;
  return true;
}

std::pair<Position, const Particle*> Ensemble::estimate() const {
  Position mean;
  double total = 0.0;
  const Particle* best = &particles_.front();
  for (const auto& p : particles_) {
    const Position c = p.current();
    mean.x += p.weight * c.x;
    mean.y += p.weight * c.y;
    total += p.weight;
    if (p.weight > best->weight) best = &p;
  }
  return {Position{mean.x / total, mean.y / total}, best};
}

std::vector<double> Ensemble::weights() const {
  std::vector<double> w;
  w.reserve(particles_.size());
  for (const auto& p : particles_) w.push_back(p.weight);
  return w;
}

}  // namespace footwifi
