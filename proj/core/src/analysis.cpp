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

#include "pulsered/analysis.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pulsered/error.hpp"

namespace pulsered {

double closed_form_p_hit(double a2_final_sq, double s) {
  if (!(s > 0.0)) throw Error(Errc::NonpositiveS, "s must be positive");
  if (a2_final_sq < 0.0) throw Error(Errc::InvalidArgument, "square modulus must be >= 0");
  return a2_final_sq / s;
}

double closed_form_p2_after_off(double a2_sq, double s) { return closed_form_p_hit(a2_sq, s); }

namespace {

void require_trials(std::size_t n) {
  if (n < kMinTrials) {
    throw Error(Errc::TooFewTrials,
                std::to_string(n) + " trials, need at least " + std::to_string(kMinTrials));
  }
}

void finish(ProbabilityReport& r) {
  const double diff = r.empirical - r.closed_form;
  if (r.std_error > 0.0) {
    r.z_score = diff / r.std_error;
  } else {
    // Degenerate spread: only a match to the identity tolerance counts.
    r.z_score = std::abs(diff) <= kIdentityTolerance
                    ? 0.0
                    : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  // Estimators whose spread is pure rounding are held to the identity tolerance.
  r.pass = std::abs(r.z_score) < kPassSigmas || std::abs(diff) <= kIdentityTolerance;
}

}  // namespace

ProbabilityReport compare(std::span<const bool> outcomes, double closed_form) {
  require_trials(outcomes.size());
  std::size_t successes = 0;
  for (bool b : outcomes) successes += b ? 1 : 0;
  ProbabilityReport r;
  r.closed_form = closed_form;
  r.n_trials = outcomes.size();
  const double n = static_cast<double>(r.n_trials);
  r.empirical = static_cast<double>(successes) / n;
  r.std_error = std::sqrt(r.empirical * (1.0 - r.empirical) / n);
  if (r.std_error == 0.0) {
    r.std_error = std::sqrt(std::max(0.0, closed_form * (1.0 - closed_form)) / n);
  }
  finish(r);
  return r;
}

ProbabilityReport compare_mean(std::span<const double> samples, double closed_form) {
  require_trials(samples.size());
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  ProbabilityReport r;
  r.closed_form = closed_form;
  r.empirical = mean;
  r.n_trials = samples.size();
  r.std_error = std::sqrt(var / n);
  finish(r);
  return r;
}

ProbabilityReport compare_reports(const ProbabilityReport& a, const ProbabilityReport& b) {
  ProbabilityReport r;
  r.closed_form = b.empirical;
  r.empirical = a.empirical;
  r.n_trials = a.n_trials + b.n_trials;
  r.std_error = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  finish(r);
  return r;
}

std::vector<double> born_profile(const Pulse& pulse) {
  std::vector<double> expected(pulse.weights.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    expected[i] = std::norm(pulse.weights[i]) * pulse.grid.spacing();
  }
  return expected;
}

HitHistogram hit_histogram(std::span<const ReductionEvent> events, std::span<const double> expected) {
  if (events.size() < kMinHistogramEvents) {
    throw Error(Errc::TooFewEvents, std::to_string(events.size()) + " events, need at least " +
                                        std::to_string(kMinHistogramEvents));
  }
  HitHistogram h;
  h.counts.assign(expected.size(), 0);
  h.expected.assign(expected.begin(), expected.end());
  double expected_total = 0.0;
  for (double e : expected) expected_total += e;
  if (!(expected_total > 0.0)) throw Error(Errc::InvalidArgument, "expected profile is empty");
  for (auto& e : h.expected) e /= expected_total;

  for (const auto& ev : events) {
    if (ev.u_sc >= h.counts.size()) throw Error(Errc::IndexOutOfRange, "event site outside grid");
    ++h.counts[ev.u_sc];
  }
  const double n = static_cast<double>(events.size());
  h.frequency.resize(h.counts.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    h.frequency[i] = static_cast<double>(h.counts[i]) / n;
  }

  double pooled_observed = 0.0;
  double pooled_expected = 0.0;
  std::size_t bins = 0;
  bool impossible = false;
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double expected_count = h.expected[i] * n;
    const auto observed = static_cast<double>(h.counts[i]);
    if (expected_count == 0.0) {
      if (observed > 0.0) impossible = true;
      continue;
    }
    if (expected_count < 5.0) {
      pooled_observed += observed;
      pooled_expected += expected_count;
      continue;
    }
    h.chi_square += (observed - expected_count) * (observed - expected_count) / expected_count;
    ++bins;
  }
  if (pooled_expected > 0.0) {
    h.chi_square += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) /
                    pooled_expected;
    ++bins;
  }
  h.dof = bins > 0 ? bins - 1 : 0;
  if (impossible) {
    h.chi_square = std::numeric_limits<double>::infinity();
    h.p_value = 0.0;
  } else if (h.dof == 0) {
    h.p_value = 1.0;
  } else {
    h.p_value = boost::math::gamma_q(static_cast<double>(h.dof) / 2.0, h.chi_square / 2.0);
  }
  h.pass = h.p_value > kChiSquarePassP;
  return h;
}

}  // namespace pulsered
