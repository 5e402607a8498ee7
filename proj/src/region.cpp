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

#include "covertsim/region.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "covertsim/detection.hpp"
#include "covertsim/numeric.hpp"
#include "covertsim/outage.hpp"

namespace covertsim::region {

namespace {

double avg_error_at(const SystemParams& base, double p_ac, double p_ab) {
    SystemParams p = base;
    p.p_ac = p_ac;
    p.p_ab = p_ab;
    return detection::average_detection_error(p);
}

// Spot-check that the average error is non-increasing in p_ab before trusting
// the bisection; the solver aborts loudly on a violation instead of returning
// a wrong root.
void check_monotone(const SystemParams& base, double p_ac, double budget) {
    constexpr int kSamples = 9;
    double prev = 2.0;
    for (int i = 1; i <= kSamples; ++i) {
        const double p_ab = budget * static_cast<double>(i) / kSamples;
        const double err = avg_error_at(base, p_ac, p_ab);
        if (err > prev + 1e-12) {
            std::ostringstream msg;
            msg << "average_detection_error not monotone in p_ab at p_ac=" << p_ac
                << ", p_ab=" << p_ab << " (" << err << " > " << prev << ")";
            throw std::logic_error(msg.str());
        }
        prev = err;
    }
}

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Parallel map over the grid, each worker owning a contiguous index range.
// Results land by index, so output order never depends on scheduling.
template <typename Fn>
std::vector<RegionPoint> sweep(std::span<const double> pac_grid, unsigned workers, Fn&& point_at) {
    std::vector<RegionPoint> points(pac_grid.size());
    const unsigned n_workers =
        std::max(1u, std::min<unsigned>(resolve_workers(workers), points.size()));
    if (n_workers == 1) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            points[i] = point_at(pac_grid[i]);
        }
        return points;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
        pool.emplace_back([&, w] {
            const std::size_t lo = points.size() * w / n_workers;
            const std::size_t hi = points.size() * (w + 1) / n_workers;
            try {
                for (std::size_t i = lo; i < hi; ++i) {
                    points[i] = point_at(pac_grid[i]);
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return points;
}

RegionPoint solve_point(const SystemParams& base, const RegionConfig& config, double p_ac,
                        bool constrained) {
    SystemParams p = base;
    p.p_ac = p_ac;
    p.p_ab = constrained ? max_covert_power(base, p_ac) : std::max(0.0, base.p_total - p_ac);

    RegionPoint point;
    point.p_ac = p.p_ac;
    point.p_ab = p.p_ab;
    point.covert_margin =
        (p.p_ab > 0.0 ? detection::average_detection_error(p) : 1.0) - (1.0 - base.epsilon);
    point.r_c = outage::max_rate(p, Receiver::Carol, Hypothesis::H1, config.delta_c);
    point.r_b =
        p.p_ab > 0.0 ? outage::max_rate(p, Receiver::Bob, Hypothesis::H1, config.delta_b) : 0.0;
    return point;
}

}  // namespace

double max_covert_power(const SystemParams& params, double p_ac) {
    SystemParams base = params;
    base.p_ac = p_ac;
    base.p_ab = 0.0;
    ensure_valid(base);

    const double budget = params.p_total - p_ac;
    if (!(budget > 0.0)) {
        return 0.0;
    }
    const double required = 1.0 - params.epsilon;
    if (avg_error_at(params, p_ac, budget) >= required) {
        return budget;  // constraint slack even at full budget
    }
    check_monotone(params, p_ac, budget);

    // p_ab = 0 is always covert (the hypotheses coincide and the error tends
    // to 1), so the sup is bracketed; keeping the feasible endpoint makes the
    // returned split's covert margin nonnegative.
    const double tol = 1e-9 * std::max(1.0, budget);
    return numeric::bisect_last_true(0.0, budget, tol, [&](double p_ab) {
        return avg_error_at(params, p_ac, p_ab) >= required;
    });
}

std::vector<double> make_pac_grid(double p_total, int grid_size) {
    if (!(p_total > 0.0)) {
        throw std::invalid_argument("p_total must be > 0");
    }
    if (grid_size < 2) {
        throw std::invalid_argument("grid_size must be >= 2");
    }
    const int remaining = grid_size - 1;
    const int n_high = (remaining + 1) / 2;  // resolved in remaining budget
    const int n_low = remaining - n_high;    // resolved in p_ac

    std::vector<double> grid;
    grid.reserve(grid_size);
    if (n_low > 0) {
        // log-spaced p_ac in [p_total*1e-3, p_total/2)
        const double lo = std::log(p_total * 1e-3);
        const double hi = std::log(p_total * 0.5);
        for (int i = 0; i < n_low; ++i) {
            grid.push_back(std::exp(lo + (hi - lo) * i / n_low));
        }
    }
    // budgets log-spaced in [p_total*1e-5, p_total/2], descending budget
    {
        const double lo = std::log(p_total * 0.5);
        const double hi = std::log(p_total * 1e-5);
        for (int i = 0; i < n_high; ++i) {
            const double budget = std::exp(n_high == 1 ? lo : lo + (hi - lo) * i / (n_high - 1));
            grid.push_back(p_total - budget);
        }
    }
    grid.push_back(p_total);
    std::sort(grid.begin(), grid.end());
    return grid;
}

std::vector<RegionPoint> region_boundary(const SystemParams& params, const RegionConfig& config,
                                         std::span<const double> pac_grid) {
    ensure_valid(params);
    std::vector<double> grid(pac_grid.begin(), pac_grid.end());
    std::sort(grid.begin(), grid.end());  // output order contract: p_ac ascending
    return sweep(grid, config.workers,
                 [&](double p_ac) { return solve_point(params, config, p_ac, true); });
}

std::vector<RegionPoint> region_boundary(const SystemParams& params, const RegionConfig& config) {
    const auto grid = make_pac_grid(params.p_total, config.grid_size);
    return region_boundary(params, config, grid);
}

std::vector<RegionPoint> no_covert_baseline(const SystemParams& params,
                                            const RegionConfig& config,
                                            std::span<const double> pac_grid) {
    ensure_valid(params);
    std::vector<double> grid(pac_grid.begin(), pac_grid.end());
    std::sort(grid.begin(), grid.end());
    return sweep(grid, config.workers,
                 [&](double p_ac) { return solve_point(params, config, p_ac, false); });
}

std::vector<RegionPoint> no_covert_baseline(const SystemParams& params,
                                            const RegionConfig& config) {
    const auto grid = make_pac_grid(params.p_total, config.grid_size);
    return no_covert_baseline(params, config, grid);
}

std::vector<std::string> validate_point(const SystemParams& params, const RegionConfig& config,
                                        const RegionPoint& point, bool require_covert_margin) {
    std::vector<std::string> errors;
    SystemParams p = params;
    p.p_ac = point.p_ac;
    p.p_ab = point.p_ab;
    for (auto& e : validate(p)) {
        errors.push_back("split: " + e);
    }
    if (!errors.empty()) {
        return errors;
    }
    if (require_covert_margin && !(point.covert_margin >= -1e-9)) {
        errors.push_back("covert_margin below -1e-9");
    }
    if (outage::outage_carol_h1(p, point.r_c) > config.delta_c) {
        errors.push_back("Carol outage above delta_c at r_c");
    }
    if (point.r_b > 0.0 && outage::outage_bob_h1(p, point.r_b) > config.delta_b) {
        errors.push_back("Bob outage above delta_b at r_b");
    }
    return errors;
}

}  // namespace covertsim::region
