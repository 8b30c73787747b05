#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ira/envs/environment.hpp"
#include "ira/envs/pendulum.hpp"
#include "ira/envs/point_mass.hpp"
#include "ira/error.hpp"

using namespace ira;
using namespace ira::envs;

namespace {

Vector scalar(double x) {
  Vector v(1);
  v << x;
  return v;
}

}  // namespace

TEST(Pendulum, ResetBounds) {
  Pendulum env;
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    env.reset(rng);
    ASSERT_GE(env.theta(), -std::numbers::pi);
    ASSERT_LE(env.theta(), std::numbers::pi);
    ASSERT_GE(env.theta_dot(), -1.0);
    ASSERT_LE(env.theta_dot(), 1.0);
  }
}

TEST(Pendulum, ResetDeterministic) {
  Pendulum a, b;
  Rng r1(9), r2(9);
  EXPECT_EQ(a.reset(r1), b.reset(r2));
}

TEST(Pendulum, RestingUprightStaysPut) {
  Pendulum env;
  env.reset_to(0.0, 0.0);
  const auto r = env.step(scalar(0.0));
  EXPECT_EQ(env.theta(), 0.0);
  EXPECT_EQ(env.theta_dot(), 0.0);
  EXPECT_EQ(r.reward, 0.0);
  EXPECT_FALSE(r.terminated);
}

TEST(Pendulum, HorizontalStepByHand) {
  Pendulum env;
  env.reset_to(std::numbers::pi / 2.0, 0.0);
  env.step(scalar(0.0));
  EXPECT_DOUBLE_EQ(env.theta_dot(), 0.75);
  EXPECT_DOUBLE_EQ(env.theta(), std::numbers::pi / 2.0 + 0.0375);
}

TEST(Pendulum, TorqueIsClipped) {
  Pendulum a, b;
  a.reset_to(0.3, 0.1);
  b.reset_to(0.3, 0.1);
  const auto ra = a.step(scalar(50.0));
  const auto rb = b.step(scalar(2.0));
  EXPECT_EQ(ra.next_state, rb.next_state);
  EXPECT_EQ(ra.reward, rb.reward);
}

TEST(Pendulum, TruncatesAt200AndRejectsFurtherSteps) {
  Pendulum env;
  Rng rng(1);
  env.reset(rng);
  for (int t = 1; t <= 200; ++t) {
    const auto r = env.step(scalar(1.0));
    ASSERT_FALSE(r.terminated);
    ASSERT_EQ(r.truncated, t == 200);
  }
  EXPECT_THROW(env.step(scalar(0.0)), EpisodeError);
}

TEST(Pendulum, RewardAndSpeedBounds) {
  Pendulum env;
  Rng rng(2);
  const double lo = -(std::numbers::pi * std::numbers::pi + 0.1 * 64.0 + 0.001 * 4.0);
  for (int ep = 0; ep < 20; ++ep) {
    env.reset(rng);
    for (int t = 0; t < 200; ++t) {
      const auto r = env.step(scalar(rng.uniform(-3.0, 3.0)));
      ASSERT_LE(r.reward, 0.0);
      ASSERT_GE(r.reward, lo);
      ASSERT_LE(std::abs(r.next_state(2)), 8.0);
      ASSERT_NEAR(r.next_state(0) * r.next_state(0) + r.next_state(1) * r.next_state(1), 1.0, 1e-12);
    }
  }
}

TEST(Pendulum, BadActionsThrow) {
  Pendulum env;
  env.reset_to(0.0, 0.0);
  EXPECT_THROW(env.step(scalar(std::nan(""))), EpisodeError);
  EXPECT_THROW(env.step(Vector::Zero(2)), EpisodeError);
  Pendulum fresh;
  EXPECT_THROW(fresh.step(scalar(0.0)), EpisodeError);
}

TEST(Pendulum, ResetToObservationReproducesTrajectory) {
  Pendulum a;
  Rng rng(4);
  a.reset(rng);
  for (int i = 0; i < 5; ++i) a.step(scalar(0.5));
  Pendulum b;
  b.reset_to_observation(a.observation());
  EXPECT_EQ(b.elapsed_steps(), 0);
  const auto ra = a.step(scalar(-1.0));
  const auto rb = b.step(scalar(-1.0));
  EXPECT_NEAR(ra.reward, rb.reward, 1e-9);
  EXPECT_NEAR((ra.next_state - rb.next_state).cwiseAbs().maxCoeff(), 0.0, 1e-12);
}

TEST(WrapAngle, MapsIntoHalfOpenInterval) {
  EXPECT_EQ(wrap_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap_angle(std::numbers::pi), std::numbers::pi);
  EXPECT_DOUBLE_EQ(wrap_angle(-std::numbers::pi), std::numbers::pi);
  EXPECT_NEAR(wrap_angle(3.0 * std::numbers::pi / 2.0), -std::numbers::pi / 2.0, 1e-12);
  for (double t = -20.0; t < 20.0; t += 0.37) {
    const double w = wrap_angle(t);
    ASSERT_GT(w, -std::numbers::pi);
    ASSERT_LE(w, std::numbers::pi);
    ASSERT_NEAR(std::cos(w), std::cos(t), 1e-12);
  }
}

TEST(PointMass, ResetDistribution) {
  PointMass env;
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const Vector s = env.reset(rng);
    ASSERT_EQ(s.size(), 6);
    for (int j : {0, 1, 4, 5}) {
      ASSERT_GE(s(j), -1.0);
      ASSERT_LE(s(j), 1.0);
    }
    ASSERT_EQ(s(2), 0.0);
    ASSERT_EQ(s(3), 0.0);
  }
}

TEST(PointMass, RestingOnGoalTerminatesWithBonus) {
  PointMass env;
  Vector obs(6);
  obs << 0.3, -0.4, 0.0, 0.0, 0.3, -0.4;
  env.reset_to_observation(obs);
  const auto r = env.step(Vector::Zero(2));
  EXPECT_TRUE(r.terminated);
  EXPECT_EQ(r.reward, 1.0);
  EXPECT_THROW(env.step(Vector::Zero(2)), EpisodeError);
}

TEST(PointMass, StepByHand) {
  PointMass env;
  Vector obs(6);
  obs << 0.0, 0.0, 0.2, 0.0, 1.0, 1.0;
  env.reset_to_observation(obs);
  Vector a(2);
  a << 3.0, -0.5;  // first coordinate clipped to 1
  const auto r = env.step(a);
  const double vx = 0.95 * 0.2 + 1.0 * 0.05;
  const double vy = 0.0 + -0.5 * 0.05;
  const double px = vx * 0.05, py = vy * 0.05;
  EXPECT_DOUBLE_EQ(r.next_state(2), vx);
  EXPECT_DOUBLE_EQ(r.next_state(3), vy);
  EXPECT_DOUBLE_EQ(r.next_state(0), px);
  EXPECT_DOUBLE_EQ(r.next_state(1), py);
  const double dist = std::hypot(px - 1.0, py - 1.0);
  EXPECT_NEAR(r.reward, -dist - 0.01 * (1.0 + 0.25), 1e-12);
  EXPECT_FALSE(r.terminated);
}

TEST(PointMass, PositionsClippedAndTruncatesAt100) {
  PointMass env;
  Vector obs(6);
  obs << 1.9, 1.9, 0.0, 0.0, -1.0, -1.0;
  env.reset_to_observation(obs);
  Vector push(2);
  push << 1.0, 1.0;
  for (int t = 1; t <= 100; ++t) {
    const auto r = env.step(push);
    ASSERT_LE(r.next_state(0), 2.0);
    ASSERT_LE(r.next_state(1), 2.0);
    ASSERT_EQ(r.truncated, t == 100);
  }
}

TEST(Environment, FactoryAndClone) {
  for (const auto& id : env_ids()) {
    auto env = make_env(id);
    EXPECT_EQ(env->id(), id);
    Rng r1(3), r2(3);
    auto copy = env->clone();
    EXPECT_EQ(env->reset(r1), copy->reset(r2));
    const Vector a = Vector::Constant(env->spec().action_dim, 0.3);
    const auto s1 = env->step(a);
    const auto s2 = copy->step(a);
    EXPECT_EQ(s1.next_state, s2.next_state);
    EXPECT_EQ(s1.reward, s2.reward);
  }
  EXPECT_THROW(make_env("halfcheetah"), ConfigError);
}

TEST(Environment, DeterministicRollouts) {
  for (const auto& id : env_ids()) {
    auto a = make_env(id);
    auto b = make_env(id);
    Rng ra(17), rb(17), acts_a(2), acts_b(2);
    a->reset(ra);
    b->reset(rb);
    const double bound = a->spec().action_bound;
    for (int t = 0; t < 60; ++t) {
      Vector act_a(a->spec().action_dim), act_b(b->spec().action_dim);
      for (int j = 0; j < act_a.size(); ++j) {
        act_a(j) = acts_a.uniform(-bound, bound);
        act_b(j) = acts_b.uniform(-bound, bound);
      }
      const auto sa = a->step(act_a);
      const auto sb = b->step(act_b);
      ASSERT_EQ(sa.next_state, sb.next_state);
      ASSERT_EQ(sa.reward, sb.reward);
      if (sa.done()) break;
    }
  }
}
