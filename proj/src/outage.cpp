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

#include "covertsim/outage.hpp"

#include <cmath>

#include "covertsim/numeric.hpp"

namespace covertsim::outage {

namespace {

// Outage of a link whose desired signal (power p_sig) rides the same fading
// coefficient as an undecodable interferer (power p_int), with the uncertain
// channel part of both acting as extra noise:
//
//   SNR = X*p_sig / (X*p_int + Y*(p_sig+p_int) + d^alpha*sigma2),
//   X = |h_hat|^2 ~ Exp(1-beta),  Y = |h_tilde|^2 ~ Exp(beta).
//
// Marginalizing X and then Y gives the closed form below with
// p_delta = (1-beta)*(p_sig - p_int*delta). The SNR is capped at
// p_sig/p_int, so p_delta <= 0 means the rate is never supported.
double fading_outage(double p_sig, double p_int, double distance, double alpha,
                     double sigma2, double beta, double rate) {
    if (rate <= 0.0) {
        return 0.0;
    }
    const double delta = snr_threshold(rate);
    const double p_delta = (1.0 - beta) * (p_sig - p_int * delta);
    if (p_delta <= 0.0) {
        return 1.0;
    }
    const double noise = delta * std::pow(distance, alpha) * sigma2;
    return 1.0 - p_delta / (beta * delta * (p_sig + p_int) + p_delta) * std::exp(-noise / p_delta);
}

struct LinkPowers {
    double p_sig;
    double p_int;
};

LinkPowers link_powers(const SystemParams& params, Receiver receiver, Hypothesis hypothesis) {
    if (receiver == Receiver::Carol) {
        return {params.p_ac, hypothesis == Hypothesis::H1 ? params.p_ab : 0.0};
    }
    if (hypothesis == Hypothesis::H0) {
        throw std::invalid_argument("Bob under H0 is invalid: no covert transmission exists");
    }
    return {params.p_ab, params.p_ac};
}

}  // namespace

void ensure_valid(const SystemParams& params, const OutageSpec& spec) {
    covertsim::ensure_valid(params);
    if (!(spec.rate >= 0.0) || !std::isfinite(spec.rate)) {
        throw std::invalid_argument("rate must be finite and >= 0");
    }
    if (!(spec.delta_cap > 0.0 && spec.delta_cap < 1.0)) {
        throw std::invalid_argument("delta_cap out of open interval (0,1)");
    }
    if (spec.receiver == Receiver::Bob && spec.hypothesis == Hypothesis::H0) {
        throw std::invalid_argument("Bob under H0 is invalid: no covert transmission exists");
    }
}

double outage_carol_h1(const SystemParams& params, double rate) {
    return fading_outage(params.p_ac, params.p_ab, params.d_ac, params.alpha,
                         params.sigma2_c, params.beta_c, rate);
}

double outage_carol_h0(const SystemParams& params, double rate) {
    return fading_outage(params.p_ac, 0.0, params.d_ac, params.alpha, params.sigma2_c,
                         params.beta_c, rate);
}

double outage_bob_h1(const SystemParams& params, double rate) {
    return fading_outage(params.p_ab, params.p_ac, params.d_ab, params.alpha,
                         params.sigma2_b, params.beta_b, rate);
}

double outage_probability(const SystemParams& params, Receiver receiver,
                          Hypothesis hypothesis, double rate) {
    if (receiver == Receiver::Carol) {
        return hypothesis == Hypothesis::H1 ? outage_carol_h1(params, rate)
                                            : outage_carol_h0(params, rate);
    }
    if (hypothesis == Hypothesis::H0) {
        throw std::invalid_argument("Bob under H0 is invalid: no covert transmission exists");
    }
    return outage_bob_h1(params, rate);
}

double max_rate(const SystemParams& params, Receiver receiver, Hypothesis hypothesis,
                double delta_cap) {
    if (!(delta_cap > 0.0 && delta_cap < 1.0)) {
        throw std::invalid_argument("delta_cap out of open interval (0,1)");
    }
    const LinkPowers link = link_powers(params, receiver, hypothesis);
    if (!(link.p_sig > 0.0)) {
        return 0.0;
    }
    const auto supported = [&](double rate) {
        return outage_probability(params, receiver, hypothesis, rate) <= delta_cap;
    };

    double hi;
    if (link.p_int > 0.0) {
        // Interference-limited: outage is 1 at the SNR-ceiling rate.
        hi = std::log2(1.0 + link.p_sig / link.p_int);
    } else {
        hi = 64.0;
        while (supported(hi)) {
            hi *= 2.0;
            if (hi > 1e9) {
                throw NumericFailure("max_rate: outage never exceeded the cap");
            }
        }
    }
    if (supported(hi)) {
        // Rounding in the ceiling evaluation; the true sup is within an ulp.
        return hi;
    }
    return numeric::bisect_last_true(0.0, hi, 1e-9, supported);
}

}  // namespace covertsim::outage
