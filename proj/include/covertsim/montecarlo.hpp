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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covertsim/model.hpp"

namespace covertsim::mc {

/// Small counter-seeded generator (SplittableRandom-style: a Weyl sequence
/// through the splitmix64 finalizer). Every trial gets its own stream derived
/// from (master seed, trial index), so the sample set is a pure function of
/// the seed and worker partitioning cannot change it.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0, 1]; never 0, so logs are safe.
    double uniform() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Exponential with the given mean (squared CSCG magnitudes are
    /// exponential with mean equal to the variance).
    double exponential(double mean) { return -mean * std::log(uniform()); }

    /// One Box-Muller pair of independent standard normals.
    void normal_pair(double& z1, double& z2);

  private:
    std::uint64_t state_;
};

/// Hash of (seed, trial, purpose) defining a trial's substream. Purposes keep
/// draw positions fixed: channel gains never shift when the finite-n mode
/// consumes a different number of noise-factor variates.
SplitMix64 substream(std::uint64_t seed, std::uint64_t trial, std::uint64_t purpose);

struct McConfig {
    std::uint64_t trials = 1'000'000;
    std::optional<std::uint32_t> n_uses;  ///< finite blocklength; unset = asymptotic
    std::uint64_t seed = 0;
    unsigned workers = 1;
};

struct ChannelDraw {
    double g_hat;    ///< known-part gain, Exp(1 - beta)
    double g_tilde;  ///< uncertain-part gain, Exp(beta)
};

/// Draws one channel: independent exponential gains whose means sum to 1.
ChannelDraw sample_channel(double beta, SplitMix64& stream);

/// chi-squared with 2n degrees of freedom: a sum of 2n squared standard
/// normals for n <= 1000 (exact at the small blocklengths where convergence
/// is under test), gamma sampling above.
double chi_squared_2n(std::uint32_t n, SplitMix64& stream);

struct ErrorSumEstimate {
    double p_fa = 0.0;
    double p_md = 0.0;
    double se_fa = 0.0;  ///< binomial standard errors sqrt(p(1-p)/trials)
    double se_md = 0.0;
    double error_sum = 0.0;
    double se_error_sum = 0.0;
    std::vector<std::string> warnings;
};

/// Empirical radiometer error probabilities at a fixed threshold. The
/// decision statistic is the per-use received power
///   P_w/n = (sigma_w^2 + (g_hat + g_tilde)*zeta) * chi2_{2n}/(2n)
/// in finite-n mode (each complex sample has variance v, so |y|^2 sums to
/// (v/2)*chi2_{2n} and P_w/n has mean exactly sigma_w^2 + g*zeta), and its
/// almost-sure limit with the chi factor replaced by 1 in asymptotic mode.
/// g_hat_fixed conditions on a known-gain realization; otherwise g_hat is
/// marginalized per trial.
ErrorSumEstimate empirical_error_sum(const SystemParams& params, double lambda,
                                     const McConfig& config,
                                     std::optional<double> g_hat_fixed = std::nullopt);

/// Empirical detection error at the per-realization optimal threshold,
/// marginalized over the known gain (the Monte Carlo counterpart of the
/// average detection error).
ErrorSumEstimate empirical_average_error(const SystemParams& params, const McConfig& config);

struct OutageEstimate {
    double delta_hat = 0.0;
    double std_err = 0.0;
    std::vector<std::string> warnings;
};

/// Empirical outage: draws (g_hat, g_tilde) pairs, forms the link SNR, and
/// counts rate violations (SNR below 2^rate - 1, equivalent to
/// log2(1+SNR) < rate).
OutageEstimate empirical_outage(const SystemParams& params, Receiver receiver,
                                Hypothesis hypothesis, double rate, const McConfig& config);

}  // namespace covertsim::mc
