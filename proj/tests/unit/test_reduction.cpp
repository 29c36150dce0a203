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
#include <map>

#include "pulsered/dynamics.hpp"
#include "pulsered/error.hpp"
#include "pulsered/reduction.hpp"
#include "test_support.hpp"

namespace pulsered {
namespace {

using test::desk_grid;
using test::interaction_state;
using test::kObserver;

CurrentReport report_of(std::vector<double> per_term) {
  CurrentReport r;
  for (double j : per_term) {
    if (j > 0.0) r.total_positive += j;
  }
  r.per_term = std::move(per_term);
  return r;
}

TEST(HitProbability, NoPositiveCurrentMeansZero) {
  EXPECT_EQ(hit_probability(report_of({-0.1, -0.3, 0.0}), 1.0, 0.01), 0.0);
}

TEST(HitProbability, RuleOneFormula) {
  EXPECT_DOUBLE_EQ(hit_probability(report_of({0.2, -0.1, 0.3}), 2.0, 1.0), 0.25);
  EXPECT_EQ(hit_probability(report_of({5.0}), 1.0, 1.0), 1.0);
}

TEST(HitProbability, NonpositiveS) {
  try {
    hit_probability(report_of({0.1}), 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonpositiveS);
  }
}

struct Track {
  std::vector<SystemState> states;
  std::vector<CurrentReport> reports;
};

Track ramp_track(RampKind kind, double fraction, double dt, double t_end = 1.0) {
  Track t;
  t.states.push_back(interaction_state());
  t.reports.emplace_back();
  const TransferSpec spec{0, 1, fraction};
  const auto sched = EnvelopeSchedule::ramp(kind, 0.0, t_end, {&spec, 1}, t.states.front());
  while (t.states.back().time < t_end) {
    auto r = step(t.states.back(), sched, dt);
    t.states.push_back(std::move(r.state));
    t.reports.push_back(std::move(r.report));
  }
  return t;
}

TEST(HitProbability, CompleteTrigRampIsCertain) {
  const double dt = 0.002;
  const Track t = ramp_track(RampKind::TrigRamp, 1.0, dt);
  double unconditional = 0.0;
  double survive = 1.0;
  for (std::size_t k = 1; k < t.states.size(); ++k) {
    unconditional += hit_probability(t.reports[k], t.states[k].s, dt);
    survive *= 1.0 - conditional_hit_probability(t.states[k], t.reports[k], dt);
  }
  EXPECT_NEAR(unconditional, 1.0, 1e-3);
  EXPECT_NEAR(1.0 - survive, 1.0, 1e-3);
}

TEST(HitProbability, CumulativeConditionalMatchesClosedForm) {
  const double dt = 0.002;
  const Track t = ramp_track(RampKind::TrigRamp, 0.3, dt);
  double survive = 1.0;
  for (std::size_t k = 1; k < t.states.size(); ++k) {
    survive *= 1.0 - conditional_hit_probability(t.states[k], t.reports[k], dt);
  }
  EXPECT_NEAR(1.0 - survive, 0.3, 1e-2);
}

TEST(SampleHit, ZeroCurrentNeverHitsAndDrawsNothing) {
  const SystemState s = interaction_state();
  RngStream rng(3);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(sample_hit(s, CurrentReport{{0.0, 0.0}, {}, 0.0}, 0.01, rng).has_value());
  }
  EXPECT_EQ(rng.counter(), 0u);
}

TEST(SampleHit, UniformFourSiteProfileGivesQuarterEach) {
  const BrainGrid g(16, 1.0 / 16.0);
  std::vector<Amplitude> w(16, Amplitude{0.0, 0.0});
  for (std::size_t i = 6; i < 10; ++i) w[i] = 1.0;
  std::vector<Term> terms;
  terms.push_back(Term{1, {1.0, 0.0}, BrainFactor(SingleState{BrainKind::Conscious, 0}, kObserver)});
  terms.push_back(Term{2, {0.0, 0.0}, BrainFactor(make_pulse(g, w, BrainKind::Conscious), kObserver)});
  SystemState s = make_state(g, std::move(terms));
  const TransferSpec spec{0, 1, 1.0};
  const auto sched = EnvelopeSchedule::ramp(RampKind::LinearRamp, 0.0, 10.0, {&spec, 1}, s);
  const auto r = step(s, sched, 0.01);
  SystemState after = r.state;
  after.hit_mass = 1.0;  // everything else already spent: a hit is certain
  RngStream rng(11);
  std::map<std::size_t, int> counts;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto hit = sample_hit(after, r.report, 0.01, rng);
    ASSERT_TRUE(hit.has_value());
    ++counts[hit->site];
  }
  ASSERT_EQ(counts.size(), 4u);
  for (const auto& [site, c] : counts) EXPECT_NEAR(c / static_cast<double>(n), 0.25, 0.01) << site;
}

TEST(SampleHit, StepTooCoarse) {
  const SystemState s = interaction_state();
  RngStream rng(1);
  try {
    sample_hit(s, report_of({0.0, 10.0}), 0.01, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::StepTooCoarse);
  }
}

TEST(SampleHit, HitTimeCalibrationUnderConstantCurrent) {
  // A linear ramp feeds constant current J = 1/T, so the per-step hit
  // probability is J dt / s and hit steps are uniform on 1..N.
  const double dt = 0.002;
  const Track t = ramp_track(RampKind::LinearRamp, 1.0, dt);
  const std::size_t steps = t.states.size() - 1;
  double expected_mean = 0.0;
  double mass = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const double p = hit_probability(t.reports[k], t.states[k].s, dt);
    EXPECT_NEAR(p, dt, 1e-9);
    expected_mean += static_cast<double>(k) * p;
    mass += p;
  }
  expected_mean /= mass;
  const int trials = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng = RngStream::for_trial(99, static_cast<std::uint64_t>(trial));
    std::size_t hit_step = 0;
    for (std::size_t k = 1; k <= steps && hit_step == 0; ++k) {
      if (sample_hit(t.states[k], t.reports[k], dt, rng)) hit_step = k;
    }
    ASSERT_GT(hit_step, 0u);
    sum += static_cast<double>(hit_step);
    sum_sq += static_cast<double>(hit_step * hit_step);
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum_sq / trials - mean * mean) / trials);
  EXPECT_LT(std::abs(mean - expected_mean), 3.0 * se);
}

SystemState observation_pre(double c1, double c2, double r1, double r2, double sigma) {
  const BrainGrid g = desk_grid();
  std::vector<Term> terms;
  terms.push_back(Term{1, {c1, 0.0}, BrainFactor(make_gaussian_pulse(g, r1, sigma, BrainKind::Ready), kObserver)});
  terms.push_back(Term{2, {c2, 0.0}, BrainFactor(make_gaussian_pulse(g, r2, sigma, BrainKind::Ready), kObserver)});
  return make_state(g, std::move(terms));
}

TEST(Reduce, DisjointPulsesLeaveOneLabel) {
  const SystemState pre = observation_pre(0.6, 0.8, 0.3, 0.7, 0.03);
  const std::size_t site = desk_grid().nearest_index(0.7);
  const SystemState post = reduce(pre, 1, site);
  EXPECT_EQ(post.terms[0].coefficient, Amplitude(0.0, 0.0));
  EXPECT_EQ(post.terms[1].coefficient, pre.terms[1].coefficient * pre.terms[1].brain.site_amplitude(site));
  EXPECT_EQ(*post.terms[1].brain.single(), (SingleState{BrainKind::Conscious, site}));
  EXPECT_EQ(post.s, pre.s);
  EXPECT_LE(total_square_modulus(post), total_square_modulus(pre));
}

TEST(Reduce, SymmetricOverlapAtMidpointGivesEqualCoefficients) {
  const double a = 1.0 / std::sqrt(2.0);
  const double mid = desk_grid().site(128);
  const SystemState pre = observation_pre(a, a, mid - 0.05, mid + 0.05, 0.05);
  const SystemState post = reduce(pre, 0, 128);
  ASSERT_NE(post.terms[0].coefficient, Amplitude(0.0, 0.0));
  EXPECT_NEAR(std::abs(post.terms[0].coefficient) / std::abs(post.terms[1].coefficient), 1.0, 1e-9);
}

TEST(Reduce, SingleStateReadyFactorsNeverSuperpose) {
  const BrainGrid g = desk_grid();
  std::vector<Term> terms;
  terms.push_back(Term{1, {0.6, 0.0}, BrainFactor(SingleState{BrainKind::Ready, 100}, kObserver)});
  terms.push_back(Term{2, {0.8, 0.0}, BrainFactor(SingleState{BrainKind::Ready, 140}, kObserver)});
  const SystemState pre = make_state(g, std::move(terms));
  for (std::size_t hit : {0u, 1u}) {
    const std::size_t site = hit == 0 ? 100 : 140;
    const SystemState post = reduce(pre, hit, site);
    int alive = 0;
    for (const auto& t : post.terms) alive += t.coefficient != Amplitude(0.0, 0.0) ? 1 : 0;
    EXPECT_EQ(alive, 1);
  }
}

TEST(Reduce, ErrorsOnBadTargets) {
  const SystemState pre = observation_pre(0.6, 0.8, 0.3, 0.7, 0.03);
  auto code = [&](std::size_t term, std::size_t site) {
    try {
      reduce(pre, term, site);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::InvariantBreach;
  };
  EXPECT_EQ(code(1, 10), Errc::ZeroWeightSite);
  EXPECT_EQ(code(5, 10), Errc::IndexOutOfRange);
  EXPECT_EQ(code(0, 999), Errc::IndexOutOfRange);
  const SystemState conscious = interaction_state(1.0);
  try {
    reduce(conscious, 0, 77);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidHitTarget);
  }
}

TEST(GuardRule4, ConsciousToReadyIsLegal) {
  const SystemState s = interaction_state();
  const TransferSpec spec{0, 1, 1.0};
  const auto sched = EnvelopeSchedule::ramp(RampKind::TrigRamp, 0.0, 1.0, {&spec, 1}, s);
  EXPECT_TRUE(guard_rule4(sched, s).empty());
}

TEST(GuardRule4, TrailingToLeadingReadyOfOneObserverIsFlagged) {
  const BrainGrid g = desk_grid();
  std::vector<Term> terms;
  terms.push_back(Term{2, {0.1, 0.0}, BrainFactor(SingleState{BrainKind::Ready, 60}, kObserver)});
  terms.push_back(Term{2, {0.1, 0.0}, BrainFactor(SingleState{BrainKind::Ready, 90}, kObserver)});
  const SystemState s = make_state(g, std::move(terms));
  const TransferSpec spec{0, 1, 0.5};
  const auto sched = EnvelopeSchedule::ramp(RampKind::LinearRamp, 0.0, 1.0, {&spec, 1}, s);
  const auto findings = guard_rule4(sched, s);
  ASSERT_EQ(findings.size(), 1u);
  EXPECT_EQ(findings[0].source, 0u);
  EXPECT_EQ(findings[0].destination, 1u);
}

TEST(GuardRule4, DistinctObserversAreLegal) {
  const BrainGrid g = desk_grid();
  std::vector<Term> terms;
  terms.push_back(Term{1, {0.1, 0.0}, BrainFactor(SingleState{BrainKind::Ready, 60}, ObserverId{1})});
  terms.push_back(Term{2, {0.1, 0.0}, BrainFactor(SingleState{BrainKind::Ready, 90}, ObserverId{2})});
  const SystemState s = make_state(g, std::move(terms));
  const TransferSpec spec{0, 1, 0.5};
  const auto sched = EnvelopeSchedule::ramp(RampKind::LinearRamp, 0.0, 1.0, {&spec, 1}, s);
  EXPECT_TRUE(guard_rule4(sched, s).empty());
}

TEST(RngStream, SameSeedSameStream) {
  RngStream a(42);
  RngStream b(42);
  RngStream c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    ASSERT_EQ(x, b.uniform());
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    differs = differs || x != c.uniform();
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(a.counter(), 1000u);
  EXPECT_NE(RngStream::for_trial(42, 0).uniform(), RngStream::for_trial(42, 1).uniform());
}

}  // namespace
}  // namespace pulsered
