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

#include "covertsim/detection.hpp"

#include <cmath>

#include "covertsim/numeric.hpp"

namespace covertsim::detection {

namespace {

void require_detectable(const WillieChannelView& view) {
    if (!(view.zeta1 > view.zeta0) || !(view.zeta0 > 0.0)) {
        throw DegenerateHypotheses("degenerate hypothesis pair: requires zeta1 > zeta0 > 0");
    }
}

double require_gain(const WillieChannelView& view) {
    if (!view.g_hat) {
        throw std::invalid_argument("g_hat not set on WillieChannelView");
    }
    if (!(*view.g_hat >= 0.0)) {
        throw std::invalid_argument("g_hat must be >= 0");
    }
    return *view.g_hat;
}

// Received-power floors under each hypothesis. optimal_threshold and
// error_sum must compute these with the same expression so the clamp-branch
// threshold lands exactly on the case-II boundary.
double floor_h0(const WillieChannelView& view, double g) {
    return g * view.zeta0 + view.sigma2_w;
}

double floor_h1(const WillieChannelView& view, double g) {
    return g * view.zeta1 + view.sigma2_w;
}

}  // namespace

std::string_view to_string(ThresholdBranch branch) {
    return branch == ThresholdBranch::Dagger ? "dagger-branch" : "clamp-branch";
}

double lambda_dagger(const WillieChannelView& view) {
    require_detectable(view);
    const double z0 = view.zeta0;
    const double z1 = view.zeta1;
    return view.sigma2_w + (z1 * z0 * view.beta_w / (z1 - z0)) * std::log(z1 / z0);
}

double p_fa(const WillieChannelView& view, double lambda) {
    require_detectable(view);
    const double g = require_gain(view);
    const double b0 = floor_h0(view, g);
    if (lambda < b0) {
        return 1.0;
    }
    return numeric::prob_exp((b0 - lambda) / (view.zeta0 * view.beta_w));
}

double p_md(const WillieChannelView& view, double lambda) {
    require_detectable(view);
    const double g = require_gain(view);
    const double b1 = floor_h1(view, g);
    if (lambda <= b1) {
        return 0.0;
    }
    return 1.0 - numeric::prob_exp((b1 - lambda) / (view.zeta1 * view.beta_w));
}

DetectionResult error_sum(const WillieChannelView& view, double lambda) {
    DetectionResult result;
    result.lambda = lambda;
    result.p_fa = p_fa(view, lambda);
    result.p_md = p_md(view, lambda);
    result.error_sum = result.p_fa + result.p_md;
    return result;
}

ThresholdDecision optimal_threshold(const WillieChannelView& view) {
    const double dagger = lambda_dagger(view);
    const double g = require_gain(view);

    ThresholdDecision decision;
    decision.lambda_dagger = dagger;
    // A tie at the branch boundary takes the dagger branch; the two
    // thresholds coincide there.
    if (g <= (dagger - view.sigma2_w) / view.zeta1) {
        decision.branch = ThresholdBranch::Dagger;
        decision.lambda_star = dagger;
    } else {
        decision.branch = ThresholdBranch::Clamp;
        decision.lambda_star = floor_h1(view, g);
    }
    return decision;
}

double conditional_error_at_optimum(const WillieChannelView& view) {
    const ThresholdDecision decision = optimal_threshold(view);
    return error_sum(view, decision.lambda_star).error_sum;
}

double average_detection_error(const SystemParams& params) {
    const WillieChannelView view = derive_willie_view(params);
    const double z0 = view.zeta0;
    const double z1 = view.zeta1;
    const double bw = view.beta_w;
    const double m = 1.0 - bw;  // mean of the known-gain distribution

    const double dagger = lambda_dagger(view);
    const double excess = dagger - view.sigma2_w;   // (zeta1*zeta0*bw/(zeta1-zeta0))*ln(zeta1/zeta0)
    const double t = excess / z1;                   // branch boundary on g_hat

    if (std::abs(2.0 * bw - 1.0) < 1e-6) {
        // Removable singularity of the closed form at beta_w = 1/2: the
        // 1/(2*beta_w - 1) terms cancel catastrophically, so integrate the
        // conditional error against the gain density instead. Substituting
        // x = exp(-g/m) absorbs the density; the kink at the branch boundary
        // sits at x = exp(-t/m), so split there.
        const double split = std::exp(-t / m);
        const auto integrand = [&](double x) {
            if (x <= 0.0) {
                return 0.0;  // g -> infinity limit of the clamp-branch error
            }
            const double g = -m * std::log(x);
            return conditional_error_at_optimum(view.with_gain(g));
        };
        bool ok1 = false;
        bool ok2 = false;
        const double value = numeric::integrate_adaptive(integrand, 0.0, split, 5e-11, &ok1) +
                             numeric::integrate_adaptive(integrand, split, 1.0, 5e-11, &ok2);
        if (!ok1 || !ok2) {
            throw NumericFailure("average_detection_error: quadrature did not converge");
        }
        return std::min(value, 1.0);
    }

    // Closed form of the two-branch expectation. With
    //   E1 = P[g >= t] = exp(-t/m),
    //   A  = kappa1 at g = 0,  B = kappa0 at g = 0,
    // the dagger-branch integral of (1 - kappa1 + kappa0) contributes
    // (1 - E1) - (A - B)*expm1(u*t)/(u*m), and the clamp-branch tail is
    // geometric. expm1 keeps the u -> 0 cancellation benign right up to the
    // quadrature switchover.
    const double E1 = std::exp(-t / m);
    const double A = numeric::prob_exp(-excess / (z1 * bw));
    const double B = numeric::prob_exp(-excess / (z0 * bw));
    const double u = (1.0 - 2.0 * bw) / (bw * m);
    const double ramp = std::expm1(u * t) / (u * m);
    const double tail = (z0 / z1) * E1 * (z0 * bw) / (m * z1 + (2.0 * bw - 1.0) * z0);

    const double value = (1.0 - E1) - (A - B) * ramp + tail;
    return std::min(value, 1.0);
}

}  // namespace covertsim::detection
