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

#include <string_view>

#include "covertsim/model.hpp"

namespace covertsim::detection {

/// Radiometer error probabilities at a fixed threshold, in the asymptotic
/// (blocklength -> infinity) regime where the normalized received power
/// concentrates on its conditional mean.
struct DetectionResult {
    double lambda = 0.0;
    double p_fa = 0.0;
    double p_md = 0.0;
    double error_sum = 0.0;  ///< p_fa + p_md, exactly
};

enum class ThresholdBranch {
    Dagger,  ///< realization-independent inflection threshold applies
    Clamp,   ///< threshold clamped to the H1 received-power floor
};

std::string_view to_string(ThresholdBranch branch);

/// Warden's optimal threshold for one realization of the known channel gain.
struct ThresholdDecision {
    double lambda_star = 0.0;
    ThresholdBranch branch = ThresholdBranch::Dagger;
    double lambda_dagger = 0.0;
};

/// Inflection threshold minimizing p_fa + p_md when the known-gain term does
/// not bind. Evaluated in the expanded form
///   sigma_w^2 + (zeta1*zeta0*beta_w/(zeta1-zeta0)) * ln(zeta1/zeta0),
/// whose intermediates stay bounded for small beta_w (the nested exp/log form
/// overflows there). Independent of g_hat.
double lambda_dagger(const WillieChannelView& view);

/// False-alarm probability at threshold lambda for the realization view.g_hat.
/// The unknown gain |h_tilde|^2 is exponential with mean beta_w. Equals 1 for
/// any threshold at or below the H0 received-power floor.
double p_fa(const WillieChannelView& view, double lambda);

/// Missed-detection probability; 0 for any threshold at or below the H1
/// received-power floor.
double p_md(const WillieChannelView& view, double lambda);

/// p_fa + p_md across the three threshold regimes split at
/// g_hat*zeta0 + sigma_w^2 and g_hat*zeta1 + sigma_w^2; continuous in lambda
/// at both breakpoints.
DetectionResult error_sum(const WillieChannelView& view, double lambda);

/// The threshold minimizing error_sum over all lambda: lambda_dagger when
/// g_hat < (lambda_dagger - sigma_w^2)/zeta1, otherwise clamped to
/// g_hat*zeta1 + sigma_w^2. A tie at the boundary takes the dagger branch
/// (the two coincide there; fixed for determinism).
ThresholdDecision optimal_threshold(const WillieChannelView& view);

/// error_sum evaluated at the optimal threshold; equals
/// error_sum(view, optimal_threshold(view).lambda_star).error_sum exactly.
double conditional_error_at_optimum(const WillieChannelView& view);

/// Detection error probability averaged over the exponential known-gain
/// distribution (mean 1 - beta_w): the transmitter-side covertness measure.
/// Uses the closed form except within |2*beta_w - 1| < 1e-6 of its removable
/// singularity, where adaptive quadrature of the conditional error against
/// the gain density takes over. Result in (0, 1].
double average_detection_error(const SystemParams& params);

}  // namespace covertsim::detection
