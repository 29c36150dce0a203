// Copyright 2026 The pulsered Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pulsered/dynamics.hpp"
#include "pulsered/error.hpp"
#include "pulsered/reduction.hpp"
#include "test_support.hpp"

namespace pulsered {
namespace {

using test::desk_grid;
using test::interaction_state;
using test::kObserver;

EnvelopeSchedule full_trig(const SystemState& s, double t_end = 1.0, double fraction = 1.0) {
  const TransferSpec spec{0, 1, fraction};
  return EnvelopeSchedule::ramp(RampKind::TrigRamp, 0.0, t_end, {&spec, 1}, s);
}

TEST(Step, HoldLeavesStateUnchanged) {
  const SystemState s = interaction_state();
  const auto r = step(s, EnvelopeSchedule::hold(), 0.01);
  for (std::size_t n = 0; n < s.terms.size(); ++n) {
    EXPECT_EQ(r.state.terms[n].coefficient, s.terms[n].coefficient);
    EXPECT_EQ(r.report.per_term[n], 0.0);
  }
  EXPECT_EQ(r.report.total_positive, 0.0);
}

TEST(Step, TrigRampHalfwayIsBalancedAndAntisymmetric) {
  SystemState s = interaction_state();
  const auto sched = full_trig(s);
  const double dt = 0.001;
  for (int k = 0; k < 500; ++k) s = step(s, sched, dt).state;
  // theta = pi/4 after half the span.
  EXPECT_NEAR(std::norm(s.terms[0].coefficient), 0.5, 1e-9);
  EXPECT_NEAR(std::norm(s.terms[1].coefficient), 0.5, 1e-9);
  const auto r = step(s, sched, dt);
  EXPECT_GT(r.report.per_term[1], 0.0);
  EXPECT_NEAR(r.report.per_term[0], -r.report.per_term[1], 1e-9);
}

TEST(Step, IntegratedCurrentEqualsTransferredSquareModulus) {
  SystemState s = interaction_state();
  const auto sched = full_trig(s);
  const double dt = 0.001;
  double integrated = 0.0;
  while (s.time < 1.0) {
    auto r = step(s, sched, dt);
    integrated += r.report.per_term[1] * dt;
    s = std::move(r.state);
  }
  EXPECT_NEAR(integrated, 1.0, 1e-3);
}

TEST(Step, SiteCurrentsOfReadyPulseSumToTermCurrent) {
  SystemState s = interaction_state();
  const auto sched = full_trig(s);
  for (int k = 0; k < 100; ++k) {
    auto r = step(s, sched, 0.002);
    double sum = 0.0;
    for (const auto& sc : r.report.per_site) {
      if (sc.term == 1) sum += sc.current;
    }
    ASSERT_NEAR(sum, r.report.per_term[1], 1e-9);
    s = std::move(r.state);
  }
}

TEST(Step, NormConservedAlongLinearRampToo) {
  SystemState s = interaction_state();
  const TransferSpec spec{0, 1, 0.7};
  const auto sched = EnvelopeSchedule::ramp(RampKind::LinearRamp, 0.1, 0.6, {&spec, 1}, s);
  const double dt = 0.001;
  while (s.time < 0.7) {
    auto r = step(s, sched, dt);
    ASSERT_LE(std::abs(total_square_modulus(r.state) - total_square_modulus(s)), 1e-9 * dt);
    ASSERT_NEAR(r.report.net(), 0.0, 1e-9);
    s = std::move(r.state);
  }
  EXPECT_NEAR(std::norm(s.terms[1].coefficient), 0.7, 1e-12);
}

TEST(Step, NewComponentIsTaggedReady) {
  const SystemState s = interaction_state();
  ASSERT_TRUE(s.terms[1].brain.is_conscious());
  const auto r = step(s, full_trig(s), 0.002);
  EXPECT_GT(r.state.terms[1].square_modulus(), 0.0);
  EXPECT_TRUE(r.state.terms[1].brain.is_ready());
  EXPECT_TRUE(r.state.terms[0].brain.is_conscious());
}

TEST(Step, ResolutionGuard) {
  const SystemState s = interaction_state();
  try {
    step(s, full_trig(s, 1.0), 0.02);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ResolutionTooCoarse);
  }
}

TEST(Step, ReadyToReadyTransferOfOneObserverIsRule4Violation) {
  const BrainGrid g = desk_grid();
  std::vector<Term> terms;
  terms.push_back(Term{1, {1.0, 0.0}, BrainFactor(SingleState{BrainKind::Ready, 10}, kObserver)});
  terms.push_back(Term{2, {0.5, 0.0}, BrainFactor(SingleState{BrainKind::Ready, 11}, kObserver)});
  const SystemState s = make_state(g, std::move(terms));
  const TransferSpec spec{0, 1, 0.5};
  const auto sched = EnvelopeSchedule::ramp(RampKind::TrigRamp, 0.0, 1.0, {&spec, 1}, s);
  try {
    step(s, sched, 0.001);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Rule4Violation);
  }
}

TEST(Step, PhantomTransferRejected) {
  SystemState s = interaction_state();
  const TransferSpec spec{0, 1, 1.0};
  s.terms[1].phantom = true;
  try {
    EnvelopeSchedule::ramp(RampKind::TrigRamp, 0.0, 1.0, {&spec, 1}, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PhantomTransfer);
  }
}

TEST(Step, ReadyTermBecomesFrozenPhantomWhenInflowStops) {
  SystemState s = interaction_state();
  const auto sched = full_trig(s, 0.5, 0.4);
  while (s.time < 0.5) s = step(s, sched, 0.002).state;
  EXPECT_FALSE(s.terms[1].phantom);
  s = step(s, sched, 0.002).state;
  ASSERT_TRUE(s.terms[1].phantom);
  const Term frozen = s.terms[1];
  for (int k = 0; k < 20; ++k) s = step(s, EnvelopeSchedule::hold(), 0.002).state;
  EXPECT_EQ(s.terms[1].coefficient, frozen.coefficient);
  EXPECT_EQ(s.terms[1].brain.pulse()->weights, frozen.brain.pulse()->weights);
}

SystemState reduced_at(std::size_t site) {
  const BrainGrid g = desk_grid();
  std::vector<Term> terms;
  terms.push_back(Term{2, {0.7, 0.0}, BrainFactor(SingleState{BrainKind::Conscious, site}, kObserver)});
  return make_state(g, std::move(terms));
}

TEST(FormPulse, InstantaneousKeepsCoefficient) {
  const FormationPolicy policy{FormationMode::Instantaneous, 0.0, 0.05, 1};
  const SystemState s = form_pulse(reduced_at(128), 128, policy);
  EXPECT_NEAR(std::norm(s.terms[0].coefficient), 0.49, 1e-15);
  const Pulse* p = s.terms[0].brain.pulse();
  ASSERT_NE(p, nullptr);
  EXPECT_NEAR(p->norm(), 1.0, 1e-12);
  EXPECT_EQ(p->center_index, 128u);
  EXPECT_EQ(p->kind, BrainKind::Conscious);
}

TEST(FormPulse, StagedConvergesToInstantaneous) {
  const double dt = 0.002;
  const FormationPolicy staged{FormationMode::Staged, 10 * dt, 0.05, 1};
  const FormationPolicy instant{FormationMode::Instantaneous, 0.0, 0.05, 1};
  SystemState s = form_pulse(reduced_at(120), 120, staged);
  EXPECT_EQ(occupied_sites(*s.terms[0].brain.pulse()), 1u);
  std::size_t last_occupied = 1;
  while (s.time < 40 * staged.tau) {
    s = step(s, EnvelopeSchedule::hold(), dt).state;
    const Pulse& p = *s.terms[0].brain.pulse();
    ASSERT_NEAR(p.norm(), 1.0, 1e-9);
    ASSERT_GE(occupied_sites(p), last_occupied);
    last_occupied = occupied_sites(p);
  }
  const SystemState ref = form_pulse(reduced_at(120), 120, instant);
  const auto& a = s.terms[0].brain.pulse()->weights;
  const auto& b = ref.terms[0].brain.pulse()->weights;
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(std::abs(a[i] - b[i]), 0.0, 1e-6);
}

TEST(FormPulse, StagedMidFormationIsPartial) {
  const double dt = 0.002;
  const FormationPolicy staged{FormationMode::Staged, 10 * dt, 0.05, 1};
  SystemState s = form_pulse(reduced_at(120), 120, staged);
  for (int k = 0; k < 10; ++k) s = step(s, EnvelopeSchedule::hold(), dt).state;
  const Pulse& mid = *s.terms[0].brain.pulse();
  const Pulse full = make_pulse(desk_grid(), gaussian_profile(desk_grid(), desk_grid().site(120), 0.05),
                                BrainKind::Conscious);
  EXPECT_GT(occupied_sites(mid), 1u);
  EXPECT_LT(occupied_sites(mid), occupied_sites(full));
  EXPECT_NEAR(mid.norm(), 1.0, 1e-9);
  EXPECT_GT(mid.formation_stage, 0.0);
  EXPECT_LT(mid.formation_stage, 1.0);
}

TEST(FormPulse, RequiresSingleConsciousSurvivorAtChosenSite) {
  const FormationPolicy policy{};
  try {
    form_pulse(interaction_state(), 100, policy);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotPostReduction);
  }
  try {
    form_pulse(reduced_at(128), 127, policy);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotPostReduction);
  }
}

SystemState conscious_only(double center) {
  const BrainGrid g = desk_grid();
  std::vector<Term> terms;
  terms.push_back(Term{1, {1.0, 0.0},
                       BrainFactor(make_gaussian_pulse(g, center, 0.05, BrainKind::Conscious), kObserver)});
  return make_state(g, std::move(terms));
}

TEST(DriftPulse, ZeroVelocityLeavesPulseUntouched) {
  const SystemState s = conscious_only(0.3);
  const SystemState next = drift_pulse(s, DriftParams{0.0, false, 0.0, 2}, 0.002);
  EXPECT_EQ(next.terms[0].brain.pulse()->weights, s.terms[0].brain.pulse()->weights);
  EXPECT_EQ(next.terms[0].coefficient, s.terms[0].coefficient);
}

TEST(DriftPulse, CenterMovesByRoundedDistance) {
  SystemState s = conscious_only(0.3);
  const double dt = 0.002;
  const double v = 0.37;
  const int n = 60;
  const std::size_t start = s.terms[0].brain.pulse()->center_index;
  for (int k = 0; k < n; ++k) {
    s = drift_pulse(s, DriftParams{v, false, 0.0, 2}, dt);
    ASSERT_NEAR(s.terms[0].brain.pulse()->norm(), 1.0, 1e-9);
  }
  const auto expected = static_cast<long>(std::lround(v * n * dt / desk_grid().spacing()));
  EXPECT_EQ(static_cast<long>(s.terms[0].brain.pulse()->center_index) - static_cast<long>(start),
            expected);
}

TEST(DriftPulse, ShadowTrailFreezesIntoPhantoms) {
  SystemState s = conscious_only(0.3);
  const double dt = 0.002;
  const DriftParams params{1.0 / 256.0 / dt, true, 1.0, 2};
  std::vector<std::pair<std::size_t, Amplitude>> frozen;
  for (int k = 0; k < 50; ++k) {
    const SystemState next = drift_pulse(s, params, dt);
    ASSERT_NEAR(total_square_modulus(next), total_square_modulus(s), 1e-12);
    for (std::size_t n = 0; n < s.terms.size(); ++n) {
      if (s.terms[n].phantom) ASSERT_EQ(next.terms[n].coefficient, s.terms[n].coefficient);
    }
    s = next;
  }
  std::size_t phantoms = 0;
  for (const auto& t : s.terms) phantoms += t.phantom ? 1 : 0;
  EXPECT_GE(phantoms, 1u);
}

TEST(DriftPulse, RequiresFullyFormedPulse) {
  const FormationPolicy staged{FormationMode::Staged, 0.02, 0.05, 1};
  const SystemState s = form_pulse(reduced_at(100), 100, staged);
  try {
    drift_pulse(s, DriftParams{1.0, false, 0.0, 2}, 0.002);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotFullyFormed);
  }
}

TEST(RelativeIntensity, FullRangeSingleSiteAndHalf) {
  const Pulse p = make_gaussian_pulse(desk_grid(), 0.5, 0.05, BrainKind::Conscious);
  EXPECT_NEAR(relative_intensity(p, 0, 255), 1.0, 1e-9);
  const double centre = relative_intensity(p, 128, 128);
  EXPECT_NEAR(centre, std::norm(p.weights[128]) * desk_grid().spacing(), 1e-15);
  EXPECT_LT(centre, 1.0);
  // Site 128 sits exactly on the center; split its mass evenly between halves.
  const double half = relative_intensity(p, 0, 127) + 0.5 * centre;
  EXPECT_NEAR(half, 0.5, 1e-3);
  const double mid = desk_grid().site(127) + 0.5 * desk_grid().spacing();
  const Pulse q = make_gaussian_pulse(desk_grid(), mid, 0.05, BrainKind::Conscious);
  EXPECT_NEAR(relative_intensity(q, 0, 127), 0.5, 1e-3);
  EXPECT_NEAR(relative_intensity(q, 128, 255), 0.5, 1e-3);
  try {
    relative_intensity(p, 10, 9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IndexOutOfRange);
  }
}

}  // namespace
}  // namespace pulsered
