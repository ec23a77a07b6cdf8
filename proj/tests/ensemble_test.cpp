// Copyright 2026 The Waypoint Bandits Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wpb/ensemble.hpp"

#include <cmath>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include "wpb/env.hpp"

namespace wpb {
namespace {

NetworkParams constant_net(int input_dim, int hidden, double value) {
  NetworkParams p(input_dim, hidden);
  p.b3() = value;
  return p;
}

EpisodeRecord reach_record(double tx, double ty, double wx, double wy, double r) {
  WorldState s;
  s.robot = Coords(2);
  s.robot << 0.0, 0.5;
  s.objects = Coords(2);
  s.objects << tx, ty;
  return {s, Trajectory({Waypoint{wx, wy}}), r};
}

Ensemble reach_ensemble(int members, std::uint64_t seed, double lr = 0.001) {
  const EnvSpec spec = make_env_spec("reach", 50);
  const WorkspaceBox box(
      (Vec(6) << feature_box(spec).lo, spec.workspace.lo).finished(),
      (Vec(6) << feature_box(spec).hi, spec.workspace.hi).finished());
  return Ensemble(1, 1, members, 32, Standardizer::from_box(box), seed, lr);
}

double member_spread(const Ensemble& e, const Vec& x) {
  double mean = 0.0;
  for (int n = 0; n < e.size(); ++n) mean += e.predict(n, x) / e.size();
  double var = 0.0;
  for (int n = 0; n < e.size(); ++n) var += std::pow(e.predict(n, x) - mean, 2) / e.size();
  return std::sqrt(var);
}

TEST(ModelInputTest, StateFeaturesThenWaypoints) {
  const EpisodeRecord r = reach_record(0.1, 0.2, 0.3, 0.4, 0.0);
  const Vec x = model_input(r.start, r.trajectory);
  EXPECT_EQ(x, (Vec(6) << 0.0, 0.5, 0.1, 0.2, 0.3, 0.4).finished());
}

TEST(SampleMemberTest, SingleMemberAlwaysZero) {
  const Ensemble e = reach_ensemble(1, 3);
  Rng rng(1);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(e.sample_member(rng), 0);
}

TEST(SampleMemberTest, FrequenciesWithinBinomialBand) {
  const Ensemble e = reach_ensemble(10, 3);
  Rng rng(2024);
  std::vector<int> counts(10, 0);
  for (int k = 0; k < 10000; ++k) ++counts[e.sample_member(rng)];
  for (int c : counts) {
    EXPECT_GE(c, 800);
    EXPECT_LE(c, 1200);
  }
}

TEST(SampleMemberTest, SeededSequenceRepeats) {
  const Ensemble e = reach_ensemble(10, 3);
  Rng a(77), b(77);
  for (int k = 0; k < 50; ++k) EXPECT_EQ(e.sample_member(a), e.sample_member(b));
}

TEST(PredictMeanTest, AveragesMembers) {
  const Ensemble two(1, 1, {constant_net(3, 4, 1.0), constant_net(3, 4, 3.0)},
                     Standardizer::identity(3));
  EXPECT_DOUBLE_EQ(two.predict_mean(Vec::Zero(3)), 2.0);

  const NetworkParams p = init_network(3, 8, 5);
  const Ensemble same(1, 1, {p, p, p}, Standardizer::identity(3));
  const Vec x = Vec::Constant(3, 0.2);
  EXPECT_NEAR(same.predict_mean(x), forward(p, x), 1e-15);
}

TEST(PredictMeanTest, MeanBetweenMemberExtremes) {
  const Ensemble e = reach_ensemble(10, 8);
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    Vec x(6);
    for (int j = 0; j < 6; ++j) x[j] = u(gen);
    double lo = 1e300, hi = -1e300;
    for (int n = 0; n < e.size(); ++n) {
      lo = std::min(lo, e.predict(n, x));
      hi = std::max(hi, e.predict(n, x));
    }
    const double m = e.predict_mean(x);
    EXPECT_GE(m, lo - 1e-12);
    EXPECT_LE(m, hi + 1e-12);
  }
}

TEST(PredictTest, GradientMatchesFiniteDifferences) {
  Ensemble e = reach_ensemble(3, 4);
  Dataset d;
  d.append(reach_record(0.1, 0.3, 0.2, 0.2, 20.0));
  d.append(reach_record(-0.2, 0.6, 0.5, 0.9, 35.0));
  Rng rng(1);
  e.update(d, {}, rng);
  const Vec x = (Vec(6) << 0.0, 0.5, 0.1, 0.4, 0.3, 0.6).finished();
  Vec g, gm;
  e.predict(1, x, &g);
  e.predict_mean(x, &gm);
  const double h = 1e-6;
  for (int j = 0; j < 6; ++j) {
    Vec up = x, down = x;
    up[j] += h;
    down[j] -= h;
    EXPECT_NEAR(g[j], (e.predict(1, up) - e.predict(1, down)) / (2 * h), 1e-4 * (1 + std::abs(g[j])));
    EXPECT_NEAR(gm[j], (e.predict_mean(up) - e.predict_mean(down)) / (2 * h),
                1e-4 * (1 + std::abs(gm[j])));
  }
}

TEST(UpdateTest, SinglePointIsFit) {
  Ensemble e = reach_ensemble(10, 12);
  Dataset d;
  const EpisodeRecord r = reach_record(0.2, 0.4, 0.1, 0.3, 31.5);
  d.append(r);
  Rng rng(3);
  e.update(d, {200, 32}, rng);
  const Vec x = model_input(r.start, r.trajectory);
  for (int n = 0; n < e.size(); ++n) EXPECT_NEAR(e.predict(n, x), 31.5, 0.05);
}

TEST(UpdateTest, ZeroEpochsLeavesEnsembleUnchanged) {
  Ensemble e = reach_ensemble(4, 12);
  const Ensemble before = e;
  Dataset d;
  d.append(reach_record(0.2, 0.4, 0.1, 0.3, 10.0));
  Rng rng(3);
  e.update(d, {0, 32}, rng);
  for (int n = 0; n < e.size(); ++n) EXPECT_EQ(e.members()[n].params, before.members()[n].params);
  EXPECT_EQ(e.scaling(), before.scaling());
}

TEST(UpdateTest, MembersStayDiverse) {
  Ensemble e = reach_ensemble(2, 21);
  Dataset d;
  d.append(reach_record(0.2, 0.4, 0.1, 0.3, 10.0));
  d.append(reach_record(-0.3, 0.7, 0.6, 0.2, 25.0));
  Rng rng(5);
  e.update(d, {}, rng);
  const Vec held_out = (Vec(6) << 0.0, 0.5, 0.4, 0.3, -0.8, 0.9).finished();
  EXPECT_NE(e.predict(0, held_out), e.predict(1, held_out));
}

TEST(UpdateTest, RejectsEmptyDataAndFrozen) {
  Ensemble e = reach_ensemble(2, 21);
  Rng rng(5);
  EXPECT_THROW(e.update(Dataset{}, {}, rng), std::invalid_argument);
  Dataset d;
  d.append(reach_record(0.2, 0.4, 0.1, 0.3, 10.0));
  e.freeze();
  EXPECT_THROW(e.update(d, {}, rng), std::logic_error);
}

TEST(UpdateTest, SameSeedSameResult) {
  Dataset d;
  d.append(reach_record(0.2, 0.4, 0.1, 0.3, 10.0));
  d.append(reach_record(-0.3, 0.7, 0.6, 0.2, 25.0));
  Ensemble a = reach_ensemble(3, 2), b = reach_ensemble(3, 2);
  Rng ra(8), rb(8);
  a.update(d, {}, ra);
  b.update(d, {}, rb);
  for (int n = 0; n < 3; ++n) EXPECT_EQ(a.members()[n].params, b.members()[n].params);
}

// Member disagreement at the training inputs shrinks with more updates.
TEST(UpdateTest, MemberSpreadContracts) {
  const EnvSpec spec = make_env_spec("reach", 50);
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d;
  for (int k = 0; k < 24; ++k) {
    const WorldState s0 = reset(spec, k);
    const double wx = 2.0 * u(gen) - 1.0, wy = u(gen);
    const double r = 40.0 * std::exp(-std::hypot(wx - s0.objects[0], wy - s0.objects[1]));
    d.append({s0, Trajectory({Waypoint{wx, wy}}), r});
  }
  Ensemble e = reach_ensemble(10, 44);
  Rng rng(6);
  auto average_spread = [&] {
    double total = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      total += member_spread(e, model_input(d[k].start, d[k].trajectory));
    }
    return total / static_cast<double>(d.size());
  };
  for (int k = 0; k < 5; ++k) e.update(d, {}, rng);
  const double early = average_spread();
  for (int k = 5; k < 100; ++k) e.update(d, {}, rng);
  EXPECT_LT(average_spread(), early);
}

TEST(FrozenBufferTest, FreezeOrderAndErrors) {
  FrozenBuffer buffer;
  EXPECT_THROW(buffer.freeze(Ensemble(2, 1, 2, 8, Standardizer::identity(6), 1)),
               std::invalid_argument);
  buffer.freeze(reach_ensemble(2, 1));
  EXPECT_EQ(buffer.size(), 1u);
}

TEST(FrozenBufferTest, AppendsInBanditOrder) {
  FrozenBuffer buffer;
  Standardizer s = Standardizer::identity(6);
  buffer.freeze(Ensemble(1, 1, 2, 8, s, 1));
  EXPECT_THROW(buffer.freeze(Ensemble(3, 1, 2, 8, s, 3)), std::invalid_argument);
  buffer.freeze(Ensemble(2, 1, 2, 8, Standardizer::identity(8), 2));
  ASSERT_EQ(buffer.size(), 2u);
  EXPECT_EQ(buffer[0].mab_index(), 1);
  EXPECT_EQ(buffer[1].mab_index(), 2);
  EXPECT_TRUE(buffer[0].frozen());
  EXPECT_EQ(buffer.waypoint_count(), 2);
}

TEST(FrozenBufferTest, FreezingKeepsPredictions) {
  Ensemble e = reach_ensemble(3, 6);
  Dataset d;
  d.append(reach_record(0.2, 0.4, 0.1, 0.3, 10.0));
  Rng rng(1);
  e.update(d, {}, rng);
  const Vec x = (Vec(6) << 0.0, 0.5, 0.3, 0.3, 0.2, 0.2).finished();
  const double before = e.predict_mean(x);
  FrozenBuffer buffer;
  buffer.freeze(e);
  EXPECT_EQ(buffer[0].predict_mean(x), before);
  Ensemble copy = buffer[0];
  EXPECT_THROW(copy.update(d, {}, rng), std::logic_error);
}

TEST(FrozenBufferTest, SaveLoadRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "wpb_ensemble_test_buffer";
  std::filesystem::remove_all(dir);
  FrozenBuffer buffer;
  Ensemble e1 = reach_ensemble(3, 6);
  Dataset d;
  d.append(reach_record(0.2, 0.4, 0.1, 0.3, 10.0));
  Rng rng(1);
  e1.update(d, {}, rng);
  buffer.freeze(e1);
  buffer.freeze(Ensemble(2, 1, 3, 32, Standardizer::identity(8), 9));
  save_frozen_buffer(buffer, dir);
  const FrozenBuffer loaded = load_frozen_buffer(dir);
  ASSERT_EQ(loaded.size(), 2u);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_EQ(loaded[j].mab_index(), buffer[j].mab_index());
    EXPECT_EQ(loaded[j].scaling(), buffer[j].scaling());
    for (int n = 0; n < 3; ++n) {
      EXPECT_EQ(loaded[j].members()[n].params, buffer[j].members()[n].params);
    }
  }
  std::filesystem::remove(dir / "mab_2.ckpt");
  EXPECT_THROW(load_frozen_buffer(dir), std::runtime_error);
  std::filesystem::remove_all(dir);
  EXPECT_THROW(load_frozen_buffer(dir), std::runtime_error);
}

}  // namespace
}  // namespace wpb
