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

#include "covertsim/montecarlo.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "covertsim/detection.hpp"

namespace covertsim::mc {

namespace {

constexpr std::uint64_t kPurposeChannel = 1;
constexpr std::uint64_t kPurposeNoiseFactor = 2;
constexpr std::uint64_t kPurposeOutage = 3;

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

void check_config(const McConfig& config) {
    if (config.trials < 1) {
        throw std::invalid_argument("trials must be >= 1");
    }
    if (config.workers < 1) {
        throw std::invalid_argument("workers must be >= 1");
    }
    if (config.n_uses && *config.n_uses < 1) {
        throw std::invalid_argument("n_uses must be >= 1");
    }
}

/// Integer tallies are additive, so merging per-worker partial tallies in
/// index order yields counts identical to a single-threaded run for any
/// worker count.
struct Tally {
    std::uint64_t fa = 0;
    std::uint64_t md = 0;
    std::uint64_t both = 0;

    Tally& operator+=(const Tally& other) {
        fa += other.fa;
        md += other.md;
        both += other.both;
        return *this;
    }
};

template <typename PerTrial>
Tally run_trials(std::uint64_t trials, unsigned workers, PerTrial&& per_trial) {
    const unsigned n_workers =
        static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));
    if (n_workers <= 1) {
        Tally tally;
        for (std::uint64_t i = 0; i < trials; ++i) {
            per_trial(i, tally);
        }
        return tally;
    }
    std::vector<Tally> partial(n_workers);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
            const std::uint64_t lo = trials * w / n_workers;
            const std::uint64_t hi = trials * (w + 1) / n_workers;
            Tally local;
            for (std::uint64_t i = lo; i < hi; ++i) {
                per_trial(i, local);
            }
            partial[w] = local;
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    Tally tally;
    for (const auto& p : partial) {
        tally += p;
    }
    return tally;
}

double binomial_se(double p_hat, std::uint64_t trials) {
    return std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) / static_cast<double>(trials));
}

void warn_if_degenerate(std::vector<std::string>& warnings, const char* name, double p_hat,
                        std::uint64_t trials) {
    if (p_hat == 0.0 || p_hat == 1.0) {
        warnings.push_back(std::string(name) + " estimate is degenerate (" +
                           std::to_string(p_hat) + ") at " + std::to_string(trials) +
                           " trials; standard error unresolvable");
    }
}

ErrorSumEstimate finish_error_sum(const Tally& tally, std::uint64_t trials) {
    ErrorSumEstimate est;
    const double n = static_cast<double>(trials);
    est.p_fa = static_cast<double>(tally.fa) / n;
    est.p_md = static_cast<double>(tally.md) / n;
    est.se_fa = binomial_se(est.p_fa, trials);
    est.se_md = binomial_se(est.p_md, trials);
    est.error_sum = est.p_fa + est.p_md;
    // Per-trial sum X = fa + md takes values {0, 1, 2}; its sample variance
    // accounts for the coupling through a shared g_hat draw.
    const double n_two = static_cast<double>(tally.both);
    const double n_one = static_cast<double>(tally.fa + tally.md) - 2.0 * n_two;
    const double mean = est.error_sum;
    const double second_moment = (n_one + 4.0 * n_two) / n;
    est.se_error_sum = std::sqrt(std::max(second_moment - mean * mean, 0.0) / n);
    warn_if_degenerate(est.warnings, "p_fa", est.p_fa, trials);
    warn_if_degenerate(est.warnings, "p_md", est.p_md, trials);
    return est;
}

}  // namespace

void SplitMix64::normal_pair(double& z1, double& z2) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    z1 = radius * std::cos(angle);
    z2 = radius * std::sin(angle);
}

SplitMix64 substream(std::uint64_t seed, std::uint64_t trial, std::uint64_t purpose) {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ trial);
    h = mix64(h ^ purpose);
    return SplitMix64(h);
}

ChannelDraw sample_channel(double beta, SplitMix64& stream) {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw std::invalid_argument("beta out of open interval (0,1)");
    }
    ChannelDraw draw;
    draw.g_hat = stream.exponential(1.0 - beta);
    draw.g_tilde = stream.exponential(beta);
    return draw;
}

double chi_squared_2n(std::uint32_t n, SplitMix64& stream) {
    if (n <= 1000) {
        double sum = 0.0;
        for (std::uint32_t i = 0; i < n; ++i) {
            double z1;
            double z2;
            stream.normal_pair(z1, z2);
            sum += z1 * z1 + z2 * z2;
        }
        return sum;
    }
    // chi2_{2n} = 2 * Gamma(n, 1); Marsaglia-Tsang squeeze for shape n >= 1.
    const double d = static_cast<double>(n) - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double z1;
        double z2;
        stream.normal_pair(z1, z2);
        const double x = z1;
        const double t = 1.0 + c * x;
        if (t <= 0.0) {
            continue;
        }
        const double v = t * t * t;
        const double u = stream.uniform();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
            return 2.0 * d * v;
        }
    }
}

ErrorSumEstimate empirical_error_sum(const SystemParams& params, double lambda,
                                     const McConfig& config,
                                     std::optional<double> g_hat_fixed) {
    check_config(config);
    const WillieChannelView view = derive_willie_view(params);
    const std::optional<std::uint32_t> n_uses = config.n_uses;

    const Tally tally = run_trials(config.trials, config.workers, [&](std::uint64_t i, Tally& t) {
        SplitMix64 channel = substream(config.seed, i, kPurposeChannel);
        const double g = g_hat_fixed ? *g_hat_fixed : channel.exponential(1.0 - view.beta_w);
        const double gt0 = channel.exponential(view.beta_w);
        const double gt1 = channel.exponential(view.beta_w);
        const double v0 = view.sigma2_w + (g + gt0) * view.zeta0;
        const double v1 = view.sigma2_w + (g + gt1) * view.zeta1;
        double w0 = 1.0;
        double w1 = 1.0;
        if (n_uses) {
            SplitMix64 noise = substream(config.seed, i, kPurposeNoiseFactor);
            const double two_n = 2.0 * static_cast<double>(*n_uses);
            w0 = chi_squared_2n(*n_uses, noise) / two_n;
            w1 = chi_squared_2n(*n_uses, noise) / two_n;
        }
        const bool fa = v0 * w0 > lambda;
        const bool md = v1 * w1 < lambda;
        t.fa += fa;
        t.md += md;
        t.both += fa && md;
    });
    return finish_error_sum(tally, config.trials);
}

ErrorSumEstimate empirical_average_error(const SystemParams& params, const McConfig& config) {
    check_config(config);
    const WillieChannelView view = derive_willie_view(params);

    const Tally tally = run_trials(config.trials, config.workers, [&](std::uint64_t i, Tally& t) {
        SplitMix64 channel = substream(config.seed, i, kPurposeChannel);
        const double g = channel.exponential(1.0 - view.beta_w);
        const double gt0 = channel.exponential(view.beta_w);
        const double gt1 = channel.exponential(view.beta_w);
        const double lambda = detection::optimal_threshold(view.with_gain(g)).lambda_star;
        const bool fa = view.sigma2_w + (g + gt0) * view.zeta0 > lambda;
        const bool md = view.sigma2_w + (g + gt1) * view.zeta1 < lambda;
        t.fa += fa;
        t.md += md;
        t.both += fa && md;
    });
    return finish_error_sum(tally, config.trials);
}

OutageEstimate empirical_outage(const SystemParams& params, Receiver receiver,
                                Hypothesis hypothesis, double rate, const McConfig& config) {
    check_config(config);
    ensure_valid(params);
    if (receiver == Receiver::Bob && hypothesis == Hypothesis::H0) {
        throw std::invalid_argument("Bob under H0 is invalid: no covert transmission exists");
    }
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("rate must be finite and >= 0");
    }

    const bool carol = receiver == Receiver::Carol;
    const double beta = carol ? params.beta_c : params.beta_b;
    const double p_sig = carol ? params.p_ac : params.p_ab;
    double p_int = carol ? params.p_ab : params.p_ac;
    if (carol && hypothesis == Hypothesis::H0) {
        p_int = 0.0;
    }
    const double noise =
        std::pow(carol ? params.d_ac : params.d_ab, params.alpha) *
        (carol ? params.sigma2_c : params.sigma2_b);
    const double delta = snr_threshold(rate);
    const std::uint64_t purpose = kPurposeOutage + (carol ? 0 : 1);

    const Tally tally = run_trials(config.trials, config.workers, [&](std::uint64_t i, Tally& t) {
        SplitMix64 stream = substream(config.seed, i, purpose);
        const ChannelDraw ch = sample_channel(beta, stream);
        const double snr =
            ch.g_hat * p_sig / (ch.g_hat * p_int + ch.g_tilde * (p_sig + p_int) + noise);
        t.fa += snr < delta;
    });

    OutageEstimate est;
    est.delta_hat = static_cast<double>(tally.fa) / static_cast<double>(config.trials);
    est.std_err = binomial_se(est.delta_hat, config.trials);
    warn_if_degenerate(est.warnings, "outage", est.delta_hat, config.trials);
    return est;
}

}  // namespace covertsim::mc
