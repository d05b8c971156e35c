#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "footwifi/gp_baseline.hpp"
#include "footwifi/particle_filter.hpp"
#include "oracles.hpp"

using namespace footwifi;

namespace {

GpHyperparams hp(double sv = 36.0, double ls = 4.0, double nv = 9.0, double radius = 10.0) {
  GpHyperparams h;
  h.signal_variance = sv;
  h.length_scale = ls;
  h.noise_variance = nv;
  h.training_radius = radius;
  return h;
}

RssVector scan(double t, std::initializer_list<std::pair<const ApId, double>> r) {
  RssVector v;
  v.t = t;
  v.readings = r;
  return v;
}

}  // namespace

TEST(MeanValue, Models) {
  EXPECT_EQ(mean_value(ConstantMean{-75.0}, {123, -4}), -75.0);
  EXPECT_DOUBLE_EQ(mean_value(LinearMean{-1.0, -30.0, {0, 0}}, {6, 8}), -40.0);
  EXPECT_DOUBLE_EQ(mean_value(LogDistanceMean{-40.0, 1.0, {0, 0}}, {6, 8}), -50.0);
}

TEST(SparseSelect, NothingInRadius) {
  const std::vector<Position> traj{{0, 0}, {50, 0}};
  const std::vector<ObservationEntry> entries{{1, 0.5, scan(0.5, {{"A", -60}}), 0.7}};
  EXPECT_TRUE(sparse_select(traj, entries, {0, 0}, 10.0, "A").empty());
}

TEST(SparseSelect, BoundaryIncluded) {
  const std::vector<Position> traj{{0, 0}, {6, 8}};
  const std::vector<ObservationEntry> entries{{1, 0.5, scan(0.5, {{"A", -60}}), 0.7}};
  const auto s = sparse_select(traj, entries, {0, 0}, 10.0, "A");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].position, (Position{6, 8}));
  EXPECT_EQ(s[0].rss_dbm, -60.0);
}

TEST(SparseSelect, EntryWithoutApSkipped) {
  const std::vector<Position> traj{{0, 0}, {1, 0}, {2, 0}, {3, 0}};
  const std::vector<ObservationEntry> entries{{1, 0.5, scan(0.5, {{"A", -60}}), 0.7},
                                              {2, 1.0, scan(1.0, {{"B", -70}}), 1.4},
                                              {3, 1.5, std::nullopt, 2.1}};
  const auto s = sparse_select(traj, entries, {0, 0}, 10.0, "A");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].position, (Position{1, 0}));
}

TEST(GpPredict, InterpolationLimit) {
  const std::vector<TrainingSample> train{{{2, 3}, -61.5}};
  const auto p = gp_predict(train, {2, 3}, hp(36.0, 4.0, 1e-9), ConstantMean{-75.0});
  EXPECT_NEAR(p.mean, -61.5, 1e-6);
  EXPECT_NEAR(p.variance, 0.0, 1e-6);
}

TEST(GpPredict, PriorReversionFarAway) {
  const std::vector<TrainingSample> train{{{0, 0}, -50.0}, {{1, 1}, -55.0}};
  const LinearMean mean{-1.0, -30.0, {0, 0}};
  const Position far{1000.0, 0.0};
  const auto p = gp_predict(train, far, hp(), mean);
  EXPECT_NEAR(p.mean, mean_value(mean, far), 1e-9);
  EXPECT_NEAR(p.variance, 45.0, 1e-9);
}

TEST(GpPredict, EmptyTrainingIsPrior) {
  const auto p = gp_predict({}, {3, 3}, hp(), ConstantMean{-70.0});
  EXPECT_EQ(p.mean, -70.0);
  EXPECT_EQ(p.variance, 45.0);
}

TEST(GpPredict, TwoPointFrozen) {
  // Reference values from an independent dense solve.
  const std::vector<TrainingSample> train{{{0, 0}, -60.0}, {{3, 0}, -70.0}};
  const auto p = gp_predict(train, {1, 1}, hp(), ConstantMean{-65.0});
  EXPECT_NEAR(p.mean, -64.15110602701928, 1e-9);
  EXPECT_NEAR(p.variance, 15.822650054639066, 1e-9);
}

TEST(GpPredict, DuplicateInputsStillFactorize) {
  const std::vector<TrainingSample> train{{{0, 0}, -60.0}, {{0, 0}, -62.0}};
  const auto p = gp_predict(train, {0, 0}, hp(36.0, 4.0, 1e-14), ConstantMean{-65.0});
  EXPECT_TRUE(std::isfinite(p.mean));
  EXPECT_NEAR(p.mean, -61.0, 1e-3);
}

TEST(GpPredictProperty, MatchesDenseSolve) {
  oracle::Gen g(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = g.integer(1, 5);
    const auto h = hp(g.uniform(1.0, 60.0), g.uniform(0.5, 10.0), g.uniform(0.1, 20.0));
    const double c = g.uniform(-90.0, -40.0);
    std::vector<TrainingSample> train;
    std::vector<Position> xs;
    std::vector<double> ys;
    for (int i = 0; i < n; ++i) {
      train.push_back({g.point(10.0), g.uniform(-100.0, -30.0)});
      xs.push_back(train.back().position);
      ys.push_back(train.back().rss_dbm);
    }
    const Position q = g.point(15.0);
    const auto got = gp_predict(train, q, h, ConstantMean{c});
    const auto ref = oracle::gp(xs, ys, q, h.signal_variance, h.length_scale, h.noise_variance, c);
    EXPECT_NEAR(got.mean, ref.mean, 1e-9);
    EXPECT_NEAR(got.variance, ref.var, 1e-9);
    EXPECT_GE(got.variance, h.noise_variance * (1.0 - 1e-9));
    EXPECT_LE(got.variance, h.signal_variance + h.noise_variance + 1e-9);
    // Posterior at a training input never exceeds the prior there.
    const auto at = gp_predict(train, xs[0], h, ConstantMean{c});
    EXPECT_LE(at.variance, h.signal_variance + h.noise_variance + 1e-12);
  }
}

TEST(GaussianLikelihood, ModeAndFloor) {
  const double peak = gaussian_likelihood(-60.0, {-60.0, 4.0});
  EXPECT_NEAR(peak, 1.0 / std::sqrt(2.0 * M_PI * 4.0), 1e-15);
  EXPECT_LT(gaussian_likelihood(-50.0, {-60.0, 4.0}), peak);
  EXPECT_EQ(gaussian_likelihood(0.0, {-100.0, 1.0}), kLikelihoodFloor);
}

TEST(GpUpdateWeights, ScalarOracle) {
  // One AP, one training scan at (0,0) heard at -60; particles now at (1,0)
  // and (3,0) observe -62. Reference weights from the closed-form scalar GP.
  FilterConfig c;
  c.n_particles = 2;
  const std::vector<ObservationEntry> obs{{1, 1.0, scan(1.0, {{"A", -60}}), 0.7},
                                          {2, 2.0, scan(2.0, {{"A", -62}}), 1.4}};
  auto e = Ensemble::restore({{{{0, 0}, {0, 0}, {1, 0}}, Heading{}, 0.5},
                              {{{0, 0}, {0, 0}, {3, 0}}, Heading{}, 0.5}},
                             obs, c);
  const std::map<ApId, GpMeanModel> means{{"A", ConstantMean{-65.0}}};
  gp_update_weights(e, *obs.back().rss, hp(), means);
  EXPECT_NEAR(e.particles()[0].weight, 0.5526687427371969, 1e-9);
  EXPECT_NEAR(e.particles()[1].weight, 0.4473312572628031, 1e-9);
}

TEST(GpUpdateWeights, NoTrainingDataUsesPrior) {
  // Both particles far from the only scan: both evaluate under the prior
  // and keep equal weights.
  FilterConfig c;
  c.n_particles = 2;
  const std::vector<ObservationEntry> obs{{1, 1.0, scan(1.0, {{"A", -60}}), 0.7},
                                          {2, 2.0, scan(2.0, {{"A", -62}}), 1.4}};
  auto e = Ensemble::restore({{{{0, 0}, {0, 0}, {40, 0}}, Heading{}, 0.5},
                              {{{0, 0}, {0, 0}, {0, 40}}, Heading{}, 0.5}},
                             obs, c);
  gp_update_weights(e, *obs.back().rss, hp(), {{"A", ConstantMean{-65.0}}});
  EXPECT_DOUBLE_EQ(e.particles()[0].weight, 0.5);
  EXPECT_DOUBLE_EQ(e.particles()[1].weight, 0.5);
}

TEST(GpUpdateWeights, ExactPredictionWinsAmongEqualVariance) {
  // Symmetric placement gives equal variance; the particle whose prediction
  // equals the observation gets the larger weight.
  FilterConfig c;
  c.n_particles = 2;
  const std::vector<ObservationEntry> obs{
      {1, 1.0, scan(1.0, {{"A", -50}}), 0.7},
      {2, 2.0, scan(2.0, {{"A", -80}}), 1.4},
      {3, 3.0, scan(3.0, {{"A", -50}}), 2.1}};
  auto e = Ensemble::restore({{{{0, 0}, {0, 0}, {20, 0}, {0, 0}}, Heading{}, 0.5},
                              {{{0, 0}, {20, 0}, {0, 0}, {0, 0}}, Heading{}, 0.5}},
                             obs, c);
  gp_update_weights(e, *obs.back().rss, hp(36.0, 4.0, 1e-6), {{"A", ConstantMean{-65.0}}});
  EXPECT_GT(e.particles()[0].weight, 0.99);
}

TEST(GpUpdateWeights, ApsWithoutMeanAreSkipped) {
  FilterConfig c;
  c.n_particles = 2;
  const std::vector<ObservationEntry> obs{{1, 1.0, scan(1.0, {{"A", -60}}), 0.7},
                                          {2, 2.0, scan(2.0, {{"B", -62}}), 1.4}};
  auto e = Ensemble::restore({{{{0, 0}, {0, 0}, {1, 0}}, Heading{}, 0.5},
                              {{{0, 0}, {0, 0}, {3, 0}}, Heading{}, 0.5}},
                             obs, c);
  gp_update_weights(e, *obs.back().rss, hp(), {{"A", ConstantMean{-65.0}}});
  EXPECT_EQ(e.particles()[0].weight, 0.5);
}

TEST(GpUpdateWeights, ThreadCountDoesNotChangeResult) {
  oracle::Gen g(8);
  std::vector<ObservationEntry> obs;
  for (std::size_t k = 1; k <= 30; ++k) {
    obs.push_back({k, 0.5 * static_cast<double>(k),
                   scan(0.5 * static_cast<double>(k),
                        {{"A", g.uniform(-80, -50)}, {"B", g.uniform(-80, -50)}}),
                   0.7 * static_cast<double>(k)});
  }
  std::vector<Particle> ps;
  for (int i = 0; i < 64; ++i) {
    Particle p{{{0, 0}}, Heading{}, 1.0};
    for (std::size_t k = 1; k <= 30; ++k) p.trajectory.push_back(g.point(12.0));
    ps.push_back(p);
  }
  const std::map<ApId, GpMeanModel> means{{"A", ConstantMean{-65.0}},
                                          {"B", ConstantMean{-70.0}}};
  auto run = [&](std::size_t threads) {
    FilterConfig c;
    c.n_particles = ps.size();
    c.threads = threads;
    auto e = Ensemble::restore(ps, obs, c);
    gp_update_weights(e, *obs.back().rss, hp(), means);
    return e.weights();
  };
  EXPECT_EQ(run(1), run(4));
}

TEST(GpHyperparams, Validate) {
  EXPECT_THROW(hp(0.0).validate(), std::invalid_argument);
  EXPECT_THROW(hp(1.0, -1.0).validate(), std::invalid_argument);
  EXPECT_NO_THROW(hp().validate());
}
