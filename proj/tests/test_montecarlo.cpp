#include <doctest.h>

#include <cmath>

#include "covertsim/detection.hpp"
#include "covertsim/montecarlo.hpp"
#include "covertsim/outage.hpp"

using namespace covertsim;

namespace {

SystemParams small_scale_params() {
    SystemParams p;
    p.p_ac = 10.0;
    p.p_ab = 10.0;
    p.p_total = 40.0;
    return p;  // zeta0 = 0.08, zeta1 = 0.16 at the default geometry
}

bool same_estimate(const mc::ErrorSumEstimate& a, const mc::ErrorSumEstimate& b) {
    return a.p_fa == b.p_fa && a.p_md == b.p_md && a.se_fa == b.se_fa && a.se_md == b.se_md &&
           a.error_sum == b.error_sum && a.se_error_sum == b.se_error_sum;
}

}  // namespace

TEST_CASE("sample_channel has the advertised moments") {
    const double beta = 0.3;
    const std::uint64_t n = 1'000'000;
    double sum_hat = 0.0;
    double sum_tilde = 0.0;
    double sum_cross = 0.0;
    double sum_hat_sq = 0.0;
    double sum_tilde_sq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto stream = mc::substream(99, i, 0);
        const auto draw = mc::sample_channel(beta, stream);
        sum_hat += draw.g_hat;
        sum_tilde += draw.g_tilde;
        sum_cross += draw.g_hat * draw.g_tilde;
        sum_hat_sq += draw.g_hat * draw.g_hat;
        sum_tilde_sq += draw.g_tilde * draw.g_tilde;
    }
    const double mean_hat = sum_hat / n;
    const double mean_tilde = sum_tilde / n;

    // exponential(mean m) has standard deviation m
    CHECK(std::abs(mean_hat - (1.0 - beta)) <= 3.0 * (1.0 - beta) / std::sqrt(double(n)));
    CHECK(std::abs(mean_tilde - beta) <= 3.0 * beta / std::sqrt(double(n)));
    CHECK(std::abs(mean_hat + mean_tilde - 1.0) <= 3.0 / std::sqrt(double(n)));

    const double var_hat = sum_hat_sq / n - mean_hat * mean_hat;
    const double var_tilde = sum_tilde_sq / n - mean_tilde * mean_tilde;
    const double corr = (sum_cross / n - mean_hat * mean_tilde) /
                        std::sqrt(var_hat * var_tilde);
    CHECK(std::abs(corr) <= 3.0 / std::sqrt(double(n)));
}

TEST_CASE("sample_channel validates beta") {
    auto stream = mc::substream(1, 2, 3);
    CHECK_THROWS_AS(mc::sample_channel(0.0, stream), std::invalid_argument);
    CHECK_THROWS_AS(mc::sample_channel(1.0, stream), std::invalid_argument);
}

TEST_CASE("chi_squared_2n is calibrated on both sampling paths") {
    for (const std::uint32_t n : {50u, 5000u}) {
        const std::uint64_t trials = 20000;
        double sum = 0.0;
        for (std::uint64_t i = 0; i < trials; ++i) {
            auto stream = mc::substream(55, i, 9);
            sum += mc::chi_squared_2n(n, stream) / (2.0 * n);
        }
        const double mean = sum / trials;
        // chi2_{2n}/(2n) has mean 1 and standard deviation 1/sqrt(n)
        CHECK(std::abs(mean - 1.0) <= 3.0 / std::sqrt(double(n) * trials));
    }
}

TEST_CASE("estimates are a pure function of the configuration") {
    const auto p = small_scale_params();
    mc::McConfig cfg;
    cfg.trials = 50000;
    cfg.seed = 31337;
    cfg.workers = 2;

    const double lambda = 1.1;
    const auto a = mc::empirical_error_sum(p, lambda, cfg);
    const auto b = mc::empirical_error_sum(p, lambda, cfg);
    CHECK(same_estimate(a, b));
    CHECK(a.se_fa == std::sqrt(a.p_fa * (1.0 - a.p_fa) / double(cfg.trials)));
    CHECK(a.se_md == std::sqrt(a.p_md * (1.0 - a.p_md) / double(cfg.trials)));

    cfg.n_uses = 200;
    const auto c = mc::empirical_error_sum(p, lambda, cfg);
    const auto d = mc::empirical_error_sum(p, lambda, cfg);
    CHECK(same_estimate(c, d));
    CHECK(!same_estimate(a, c));  // finite-n really changes the statistic
}

TEST_CASE("worker partitioning never changes the sample set") {
    const auto p = small_scale_params();
    mc::McConfig one;
    one.trials = 40000;
    one.seed = 271828;
    one.workers = 1;
    mc::McConfig four = one;
    four.workers = 4;

    CHECK(same_estimate(mc::empirical_error_sum(p, 1.05, one),
                        mc::empirical_error_sum(p, 1.05, four)));
    CHECK(same_estimate(mc::empirical_average_error(p, one),
                        mc::empirical_average_error(p, four)));

    const auto oa = mc::empirical_outage(p, Receiver::Carol, Hypothesis::H1, 0.8, one);
    const auto ob = mc::empirical_outage(p, Receiver::Carol, Hypothesis::H1, 0.8, four);
    CHECK(oa.delta_hat == ob.delta_hat);
    CHECK(oa.std_err == ob.std_err);
}

TEST_CASE("asymptotic mode reproduces the closed-form error probabilities") {
    mc::McConfig cfg;
    cfg.trials = 100'000;
    cfg.workers = 2;

    mc::SplitMix64 rng(41);
    for (int i = 0; i < 5; ++i) {
        SystemParams p;
        p.p_ac = 5.0 + 400.0 * rng.uniform();
        p.p_ab = p.p_ac * (0.3 + 1.2 * rng.uniform());
        p.p_total = 2.0 * (p.p_ac + p.p_ab);
        p.beta_w = 0.1 + 0.6 * rng.uniform();
        cfg.seed = 500 + i;

        const auto view = derive_willie_view(p);
        const double g = rng.exponential(1.0 - p.beta_w);
        // threshold inside the informative band
        const double lambda = detection::optimal_threshold(view.with_gain(g)).lambda_star *
                              (0.95 + 0.1 * rng.uniform());
        const auto est = mc::empirical_error_sum(p, lambda, cfg, g);
        const auto closed = detection::error_sum(view.with_gain(g), lambda);
        CAPTURE(i);
        CHECK(std::abs(est.p_fa - closed.p_fa) <= 3.0 * std::max(est.se_fa, 1e-5));
        CHECK(std::abs(est.p_md - closed.p_md) <= 3.0 * std::max(est.se_md, 1e-5));
    }
}

TEST_CASE("marginalized mode reproduces the average detection error") {
    const auto p = small_scale_params();
    mc::McConfig cfg;
    cfg.trials = 400'000;
    cfg.seed = 17;
    cfg.workers = 2;
    const auto est = mc::empirical_average_error(p, cfg);
    const double closed = detection::average_detection_error(p);
    CHECK(std::abs(est.error_sum - closed) <= 3.0 * est.se_error_sum);
}

TEST_CASE("finite-n gaps to the asymptotic value shrink as blocks grow") {
    // strong-convergence configuration: moderate received scales, optimal
    // threshold at a conditioned gain
    SystemParams p;
    p.p_ac = 10.0;
    p.p_ab = 10.0;
    p.p_total = 40.0;
    p.beta_w = 0.2;
    const auto view = derive_willie_view(p);
    const double g = 0.3;
    const double lambda = detection::optimal_threshold(view.with_gain(g)).lambda_star;
    const double exact = detection::error_sum(view.with_gain(g), lambda).error_sum;

    mc::McConfig cfg;
    cfg.trials = 100'000;
    cfg.seed = 271;
    cfg.workers = 2;

    double prev_gap = 2.0;
    for (const std::uint32_t n : {100u, 1000u, 10000u}) {
        cfg.n_uses = n;
        const auto est = mc::empirical_error_sum(p, lambda, cfg, g);
        const double gap = std::abs(est.error_sum - exact);
        CAPTURE(n);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
}

TEST_CASE("a threshold below the detector's blind spot always alarms") {
    const auto p = small_scale_params();
    mc::McConfig cfg;
    cfg.trials = 20000;
    cfg.seed = 77;
    const double g = 0.4;
    // any threshold under g*zeta0 + sigma2 is exceeded by every draw
    const auto est = mc::empirical_error_sum(p, 0.9 * (g * 0.08 + 1.0), cfg, g);
    CHECK(est.p_fa == 1.0);
}

TEST_CASE("empirical outage basics") {
    const auto p = small_scale_params();
    mc::McConfig cfg;
    cfg.trials = 10000;
    cfg.seed = 5;

    SUBCASE("zero rate never counts a violation") {
        const auto est = mc::empirical_outage(p, Receiver::Carol, Hypothesis::H1, 0.0, cfg);
        CHECK(est.delta_hat == 0.0);
        CHECK(est.std_err == 0.0);
    }
    SUBCASE("H0 is never worse than H1") {
        const auto h0 = mc::empirical_outage(p, Receiver::Carol, Hypothesis::H0, 0.6, cfg);
        const auto h1 = mc::empirical_outage(p, Receiver::Carol, Hypothesis::H1, 0.6, cfg);
        CHECK(h0.delta_hat <= h1.delta_hat + 3.0 * std::hypot(h0.std_err, h1.std_err));
    }
    SUBCASE("Bob under H0 is rejected") {
        CHECK_THROWS_AS(mc::empirical_outage(p, Receiver::Bob, Hypothesis::H0, 0.5, cfg),
                        std::invalid_argument);
    }
}

TEST_CASE("degenerate resolution raises a warning, not a failure") {
    const auto p = small_scale_params();
    mc::McConfig cfg;
    cfg.trials = 64;
    cfg.seed = 1;
    // threshold far above anything observable: p_fa estimates to exactly 0
    const auto est = mc::empirical_error_sum(p, 1e9, cfg, 0.1);
    CHECK(est.p_fa == 0.0);
    CHECK(!est.warnings.empty());
}

TEST_CASE("McConfig validation") {
    const auto p = small_scale_params();
    mc::McConfig cfg;
    cfg.trials = 0;
    CHECK_THROWS_AS(mc::empirical_average_error(p, cfg), std::invalid_argument);
    cfg.trials = 10;
    cfg.workers = 0;
    CHECK_THROWS_AS(mc::empirical_average_error(p, cfg), std::invalid_argument);
    cfg.workers = 1;
    cfg.n_uses = 0;
    CHECK_THROWS_AS(mc::empirical_error_sum(p, 1.0, cfg), std::invalid_argument);
}
