#include "footwifi/gp_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "footwifi/parallel.hpp"

namespace footwifi {

double mean_value(const GpMeanModel& model, Position p) {
  struct Visitor {
    Position p;
    double operator()(const ConstantMean& m) const { return m.c; }
    double operator()(const LinearMean& m) const { return m.k * distance(p, m.ap) + m.d; }
    double operator()(const LogDistanceMean& m) const { return m.s - m.q * distance(p, m.ap); }
  };
  return std::visit(Visitor{p}, model);
}

void GpHyperparams::validate() const {
  if (!(signal_variance > 0.0) || !(length_scale > 0.0) || !(noise_variance > 0.0) ||
      !(training_radius > 0.0)) {
    throw std::invalid_argument("GpHyperparams: all values must be > 0");
  }
}

std::vector<TrainingSample> sparse_select(std::span<const Position> trajectory,
                                          std::span<const ObservationEntry> entries,
                                          Position center, double radius, const ApId& ap) {
  std::vector<TrainingSample> out;
  for (const auto& e : entries) {
    if (!e.rss) continue;
    const auto rss = e.rss->get(ap);
    if (!rss) continue;
    const Position p = trajectory[e.step_index];
    if (distance(p, center) <= radius) out.push_back({p, *rss});
  }
  return out;
}

GpRegressor::GpRegressor(std::span<const Position> inputs, const GpHyperparams& hp)
    : inputs_(inputs.begin(), inputs.end()), hp_(hp) {
  const auto n = static_cast<Eigen::Index>(inputs_.size());
  if (n == 0) return;
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = hp_.signal_variance + hp_.noise_variance;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double k = kernel(inputs_[i], inputs_[j]);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  // LLT only reports failure on a non-positive pivot; a tiny positive one
  // (duplicate inputs, very small noise) is just as unusable, so the
  // condition estimate is checked too.
  const double eps = std::numeric_limits<double>::epsilon() * static_cast<double>(n);
  auto singular = [&] { return llt_.info() != Eigen::Success || !(llt_.rcond() >= eps); };
  llt_.compute(gram);
  if (singular()) {
    gram.diagonal().array() += 1e-8 * hp_.signal_variance;
    llt_.compute(gram);
    if (singular()) {
      throw std::runtime_error("gp: Gram matrix is numerically singular");
    }
  }
}

double GpRegressor::kernel(Position a, Position b) const {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return hp_.signal_variance *
         std::exp(-(dx * dx + dy * dy) / (2.0 * hp_.length_scale * hp_.length_scale));
}

GpPrediction GpRegressor::predict(std::span<const double> residuals, Position query) const {
  const double prior_var = hp_.signal_variance + hp_.noise_variance;
  const auto n = static_cast<Eigen::Index>(inputs_.size());
  if (n == 0) return {0.0, prior_var};
  if (static_cast<Eigen::Index>(residuals.size()) != n) {
    throw std::invalid_argument("gp: residual count does not match training inputs");
  }
  Eigen::VectorXd k_star(n);
  for (Eigen::Index i = 0; i < n; ++i) k_star(i) = kernel(inputs_[i], query);
  const Eigen::Map<const Eigen::VectorXd> y(residuals.data(), n);
  const Eigen::VectorXd alpha = llt_.solve(y);
  const Eigen::VectorXd v = llt_.matrixL().solve(k_star);
  const double var = prior_var - v.squaredNorm();
  return {k_star.dot(alpha), std::max(var, 0.0)};
}

GpPrediction gp_predict(std::span<const TrainingSample> train, Position query,
                        const GpHyperparams& hp, const GpMeanModel& mean) {
  std::vector<Position> inputs;
  std::vector<double> residuals;
  inputs.reserve(train.size());
  residuals.reserve(train.size());
  for (const auto& s : train) {
    inputs.push_back(s.position);
    residuals.push_back(s.rss_dbm - mean_value(mean, s.position));
  }
  const GpRegressor gp(inputs, hp);
  GpPrediction out = gp.predict(residuals, query);
  out.mean += mean_value(mean, query);
  return out;
}

double gaussian_likelihood(double observed, const GpPrediction& prediction) {
  const double var = prediction.variance;
  const double r = observed - prediction.mean;
  const double pdf = std::exp(-0.5 * r * r / var) / std::sqrt(2.0 * std::numbers::pi * var);
  return std::max(pdf, kLikelihoodFloor);
}

void gp_update_weights(Ensemble& ens, const RssVector& current, const GpHyperparams& hp,
                       const std::map<ApId, GpMeanModel>& means) {
  hp.validate();
  const auto& observations = ens.observations();
  // The newest entry is the epoch being weighted; it is not training data.
  const std::span<const ObservationEntry> history(
      observations.data(), observations.empty() ? 0 : observations.size() - 1);

  std::vector<std::pair<const ApId*, const GpMeanModel*>> aps;
  for (const auto& [ap, rss] : current.readings) {
    auto it = means.find(ap);
    if (it != means.end()) aps.emplace_back(&ap, &it->second);
  }
  if (aps.empty()) return;

  const auto& particles = ens.particles();
  std::vector<double> log_lik(particles.size(), 0.0);
  parallel_for(particles.size(), ens.config().threads, [&](std::size_t i) {
    const auto& traj = particles[i].trajectory;
    const Position center = traj.back();

    // Entries with a scan inside the training ball, shared by every AP.
    std::vector<const ObservationEntry*> nearby;
    for (const auto& e : history) {
      if (e.rss && distance(traj[e.step_index], center) <= hp.training_radius) {
        nearby.push_back(&e);
      }
    }

    // Cache one factorization per distinct input subset. When every nearby
    // scan heard the AP (the common case) all APs reuse the same one.
    std::vector<const ObservationEntry*> cached_subset;
    std::optional<GpRegressor> cached_gp;

    std::vector<const ObservationEntry*> subset;
    std::vector<Position> inputs;
    std::vector<double> residuals;
    double sum = 0.0;
    for (const auto& [ap, mean] : aps) {
      subset.clear();
      for (const auto* e : nearby) {
        if (e->rss->readings.contains(*ap)) subset.push_back(e);
      }
      if (!cached_gp || subset != cached_subset) {
        inputs.clear();
        for (const auto* e : subset) inputs.push_back(traj[e->step_index]);
        cached_gp.emplace(inputs, hp);
        cached_subset = subset;
      }
      residuals.clear();
      for (const auto* e : subset) {
        const Position p = traj[e->step_index];
        residuals.push_back(e->rss->readings.at(*ap) - mean_value(*mean, p));
      }
      GpPrediction pred = cached_gp->predict(residuals, center);
      pred.mean += mean_value(*mean, center);
      sum += std::log(gaussian_likelihood(current.readings.at(*ap), pred));
    }
    log_lik[i] = sum;
  });

  // Scaling by the ensemble maximum cancels in normalization and keeps the
  // product of many small densities representable.
  const double max_ll = *std::max_element(log_lik.begin(), log_lik.end());
  std::vector<double> factors(particles.size());
  for (std::size_t i = 0; i < particles.size(); ++i) factors[i] = std::exp(log_lik[i] - max_ll);
  ens.scale_weights(factors);
}

}  // namespace footwifi
