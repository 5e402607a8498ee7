/*
   Copyright 2026 The covertsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "covertsim/model.hpp"

namespace covertsim::outage {

/// One outage query: which receiver, at which rate, under which hypothesis,
/// against which outage cap. Bob under H0 is invalid (no covert transmission
/// exists to be in outage).
struct OutageSpec {
    Receiver receiver = Receiver::Carol;
    double rate = 0.0;
    Hypothesis hypothesis = Hypothesis::H1;
    double delta_cap = 0.1;

    double snr_threshold() const { return covertsim::snr_threshold(rate); }
};

/// Throws std::invalid_argument on a violated OutageSpec invariant.
void ensure_valid(const SystemParams& params, const OutageSpec& spec);

/// Carol's outage under H1: the covert signal is self-interference she cannot
/// decode. Returns 1 exactly when the interference-limited SNR ceiling falls
/// below the rate's SNR threshold.
double outage_carol_h1(const SystemParams& params, double rate);

/// Carol's outage under H0 (no covert interference); independent of p_ab and
/// never above the H1 value at equal rate.
double outage_carol_h0(const SystemParams& params, double rate);

/// Bob's outage under H1: mirror of Carol's with the signal/interference
/// roles of p_ab and p_ac swapped.
double outage_bob_h1(const SystemParams& params, double rate);

/// Dispatch on (receiver, hypothesis); Bob under H0 throws.
double outage_probability(const SystemParams& params, Receiver receiver,
                          Hypothesis hypothesis, double rate);

/// sup{R >= 0 : outage(R) <= delta_cap} by bisection to 1e-9 absolute in R.
/// Outage is increasing in R, so the bracket [0, SNR-ceiling rate] (or a
/// doubling expansion when there is no interference ceiling) contains the sup.
double max_rate(const SystemParams& params, Receiver receiver, Hypothesis hypothesis,
                double delta_cap);

}  // namespace covertsim::outage
