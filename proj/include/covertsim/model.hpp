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

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace covertsim {

/// Raised when the two hypotheses are statistically indistinguishable at the
/// warden (no covert power, so both received-power levels coincide).
struct DegenerateHypotheses : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised when an internal numerical routine fails to converge.
struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Receiver { Carol, Bob };
enum class Hypothesis { H0, H1 };

/// Full physical scenario. Powers are linear-scale relative to unit noise;
/// the CLI converts dB inputs once at the boundary. Immutable value type,
/// safe to copy across parallel workers.
struct SystemParams {
    double p_ac = 500.0;   ///< transmit power of the public (cover) link
    double p_ab = 100.0;   ///< transmit power of the covert link; 0 = no covert traffic
    double d_ac = 5.0;
    double d_ab = 5.0;
    double d_aw = 5.0;
    double alpha = 3.0;    ///< path-loss exponent
    double sigma2_c = 1.0; ///< receiver noise variances, normalized to 1 by default
    double sigma2_b = 1.0;
    double sigma2_w = 1.0;
    double beta_c = 0.2;   ///< channel-uncertainty variances, each in (0, 1)
    double beta_b = 0.2;
    double beta_w = 0.2;
    double epsilon = 0.2;  ///< covertness requirement, in (0, 1)
    double p_total = 1000.0;

    /// Sets all three uncertainty variances at once.
    void set_beta(double beta) { beta_c = beta_b = beta_w = beta; }
};

/// Detection-side quantities derived from the scenario geometry. g_hat is the
/// realized known-channel gain |h_hat_aw|^2, present only for per-realization
/// operations.
struct WillieChannelView {
    double zeta0 = 0.0;    ///< received-power scale under H0
    double zeta1 = 0.0;    ///< received-power scale under H1
    double beta_w = 0.0;
    double sigma2_w = 0.0;
    std::optional<double> g_hat;

    WillieChannelView with_gain(double g) const {
        WillieChannelView v = *this;
        v.g_hat = g;
        return v;
    }
};

/// Returns every violated invariant, one message per field; empty when valid.
std::vector<std::string> validate(const SystemParams& params);

/// Throws std::invalid_argument with the aggregated report when invalid.
void ensure_valid(const SystemParams& params);

/// Computes zeta0 = P_ac/d_aw^alpha and zeta1 = (P_ac+P_ab)/d_aw^alpha.
/// Rejects p_ab = 0 (zeta1 = zeta0 makes the hypotheses indistinguishable).
WillieChannelView derive_willie_view(const SystemParams& params);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// SNR threshold for a target rate: Delta = 2^R - 1.
inline double snr_threshold(double rate) { return std::exp2(rate) - 1.0; }

}  // namespace covertsim
