// Test-only oracles, kept independent of the library's implementation paths:
// the quadrature here integrates the per-realization error expressions
// directly in gain space with a Gauss-Kronrod rule, while the library's
// fallback uses adaptive Simpson on a substituted integrand.
#pragma once

#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "covertsim/model.hpp"

namespace covertsim::test_oracles {

// Gauss-Kronrod 7-15 pair on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

template <typename Fn>
void gauss_kronrod(const Fn& f, double a, double b, double& value, double& error) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double k = 0.0;
    double g = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = kKronrodNodes[i];
        const double fv = i == 7 ? f(mid) : f(mid - half * x) + f(mid + half * x);
        k += kKronrodWeights[i] * fv;
        if (i % 2 == 1) {
            g += kGaussWeights[i / 2] * fv;
        } else if (i == 7) {
            g += kGaussWeights[3] * fv;
        }
    }
    value = k * half;
    error = std::abs((k - g) * half);
}

// Adaptive scheme: split the interval with the worst error estimate until the
// summed estimate meets the tolerance.
template <typename Fn>
double integrate_gk(const Fn& f, double a, double b, double abs_tol) {
    struct Interval {
        double a, b, value, error;
        bool operator<(const Interval& o) const { return error < o.error; }
    };
    std::priority_queue<Interval> queue;
    Interval whole{a, b, 0.0, 0.0};
    gauss_kronrod(f, a, b, whole.value, whole.error);
    queue.push(whole);
    double total_error = whole.error;
    double total_value = whole.value;
    int splits = 0;
    while (total_error > abs_tol && splits < 4000) {
        const Interval worst = queue.top();
        queue.pop();
        total_error -= worst.error;
        total_value -= worst.value;
        const double mid = 0.5 * (worst.a + worst.b);
        for (const auto& [lo, hi] : {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
            Interval part{lo, hi, 0.0, 0.0};
            gauss_kronrod(f, lo, hi, part.value, part.error);
            queue.push(part);
            total_error += part.error;
            total_value += part.value;
        }
        ++splits;
    }
    if (total_error > abs_tol) {
        throw std::runtime_error("oracle quadrature did not converge");
    }
    return total_value;
}

// Per-realization detection error at the optimal threshold, written straight
// from the two-branch expressions (inflection threshold in expanded form).
inline double conditional_error_direct(double zeta0, double zeta1, double beta_w, double sigma2,
                                       double g) {
    const double dagger =
        sigma2 + (zeta1 * zeta0 * beta_w / (zeta1 - zeta0)) * std::log(zeta1 / zeta0);
    const double boundary = (dagger - sigma2) / zeta1;
    if (g < boundary) {
        const double k1 = std::exp((g * zeta1 + sigma2 - dagger) / (zeta1 * beta_w));
        const double k0 = std::exp((g * zeta0 + sigma2 - dagger) / (zeta0 * beta_w));
        return 1.0 - k1 + k0;
    }
    return std::exp(g * (zeta0 - zeta1) / (zeta0 * beta_w));
}

// Average detection error by quadrature of the conditional error against the
// exponential gain density, split at the branch boundary; the tail is cut
// where both the error and the density are negligible (< 1e-21 combined).
inline double average_error_quadrature(double zeta0, double zeta1, double beta_w, double sigma2,
                                       double abs_tol = 1e-12) {
    const double mean = 1.0 - beta_w;
    const double dagger =
        sigma2 + (zeta1 * zeta0 * beta_w / (zeta1 - zeta0)) * std::log(zeta1 / zeta0);
    const double boundary = (dagger - sigma2) / zeta1;
    const auto integrand = [&](double g) {
        return conditional_error_direct(zeta0, zeta1, beta_w, sigma2, g) *
               std::exp(-g / mean) / mean;
    };
    const double decay = (zeta1 - zeta0) / (zeta0 * beta_w) + 1.0 / mean;
    const double cut = boundary + 50.0 / decay;
    return integrate_gk(integrand, 0.0, boundary, 0.5 * abs_tol) +
           integrate_gk(integrand, boundary, cut, 0.5 * abs_tol);
}

inline double average_error_quadrature(const SystemParams& params, double abs_tol = 1e-12) {
    const double path_loss = std::pow(params.d_aw, params.alpha);
    return average_error_quadrature(params.p_ac / path_loss,
                                    (params.p_ac + params.p_ab) / path_loss, params.beta_w,
                                    params.sigma2_w, abs_tol);
}

}  // namespace covertsim::test_oracles
