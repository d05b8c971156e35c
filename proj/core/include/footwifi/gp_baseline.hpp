#pragma once

#include <map>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "footwifi/particle_filter.hpp"
#include "footwifi/types.hpp"

namespace footwifi {

/// Prior mean models for per-AP Gaussian-process regression.
struct ConstantMean {
  double c = -75.0;  // dBm
};

/// mean = k * |p - ap| + d
struct LinearMean {
  double k = -1.0;   // dB/m
  double d = -30.0;  // dBm at the AP
  Position ap;
};

/// mean = s - q * |p - ap|. Named after the log-distance model but, like
/// its usual printed form, linear in distance.
struct LogDistanceMean {
  double s = -40.0;  // dBm at 1 m
  double q = 1.0;    // dB/m
  Position ap;
};

using GpMeanModel = std::variant<ConstantMean, LinearMean, LogDistanceMean>;

double mean_value(const GpMeanModel& model, Position p);

struct GpHyperparams {
  double signal_variance = 36.0;  // dB^2
  double length_scale = 4.0;      // m
  double noise_variance = 9.0;    // dB^2
  double training_radius = 10.0;  // m

  void validate() const;
};

struct TrainingSample {
  Position position;
  double rss_dbm = 0.0;
};

struct GpPrediction {
  double mean = 0.0;      // dBm
  double variance = 0.0;  // dB^2
};

/// Pairs (trajectory[entry.step_index], rss of `ap`) for entries within the
/// closed ball of `radius` around `center` that have a reading for `ap`.
std::vector<TrainingSample> sparse_select(std::span<const Position> trajectory,
                                          std::span<const ObservationEntry> entries,
                                          Position center, double radius, const ApId& ap);

/// Squared-exponential GP over a fixed set of training inputs. The Cholesky
/// factor is computed once and reused for any number of target vectors,
/// which is what lets APs that share the same inputs share one factorization.
class GpRegressor {
 public:
  /// Throws std::runtime_error if the Gram matrix stays singular after one
  /// jitter retry.
  GpRegressor(std::span<const Position> inputs, const GpHyperparams& hp);

  double kernel(Position a, Position b) const;

  /// Prediction at `query` for residual targets (rss - prior mean).
  GpPrediction predict(std::span<const double> residuals, Position query) const;

  std::size_t size() const { return inputs_.size(); }

 private:
  std::vector<Position> inputs_;
  GpHyperparams hp_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Standard GP regression on residuals rss - mean_value. An empty training
/// set returns the prior: (mean_value(query), signal_variance + noise_variance).
GpPrediction gp_predict(std::span<const TrainingSample> train, Position query,
                        const GpHyperparams& hp, const GpMeanModel& mean);

/// Gaussian density with a floor of 1e-12.
double gaussian_likelihood(double observed, const GpPrediction& prediction);

inline constexpr double kLikelihoodFloor = 1e-12;

/// Likelihood weighting: per particle, per AP present in `current` (and in
/// `means`), train on the particle's own positions within training_radius
/// (excluding the newest entry) and multiply the weight by the predictive
/// likelihood of the observed value. APs without a mean model are skipped.
void gp_update_weights(Ensemble& ens, const RssVector& current, const GpHyperparams& hp,
                       const std::map<ApId, GpMeanModel>& means);

}  // namespace footwifi
