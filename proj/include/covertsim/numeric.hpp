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

#include <algorithm>
#include <cmath>
#include <functional>

namespace covertsim::numeric {

/// exp of a probability exponent: the argument is clamped to [-745, 0] so a
/// probability never underflows to 0 or rounds above 1. Exponents of the
/// closed forms are nonpositive by construction; the upper clamp only absorbs
/// round-off at case boundaries.
inline double prob_exp(double exponent) {
    return std::exp(std::clamp(exponent, -745.0, 0.0));
}

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance
/// abs_tol. Returns the estimate; sets *converged = false when the recursion
/// depth limit is hit before the tolerance is met.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, bool* converged);

/// Largest x in [lo, hi] with pred(x) true, assuming pred is monotone
/// (true on [lo, x*], false after) and pred(lo) holds. Bisection keeps the
/// returned endpoint on the feasible side; terminates when the bracket is
/// narrower than tol.
template <typename Pred>
double bisect_last_true(double lo, double hi, double tol, Pred&& pred) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;  // bracket at floating-point resolution
        }
        if (pred(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

}  // namespace covertsim::numeric
