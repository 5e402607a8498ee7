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

#include <span>
#include <vector>

#include "covertsim/model.hpp"

namespace covertsim::region {

/// One achievable rate pair with the power split certifying it: the split
/// satisfies the power budget, the covertness constraint (covert_margin =
/// average detection error minus (1 - epsilon), nonnegative up to solver
/// slack), and both receivers' outage caps at (r_c, r_b).
struct RegionPoint {
    double r_c = 0.0;
    double r_b = 0.0;
    double p_ac = 0.0;
    double p_ab = 0.0;
    double covert_margin = 0.0;
};

/// Sweep configuration: outage caps for the two receivers, the p_ac grid
/// resolution, and the worker count for the parallel map (0 = all hardware
/// threads). Output order is by p_ac ascending regardless of scheduling.
struct RegionConfig {
    double delta_c = 0.1;
    double delta_b = 0.1;
    int grid_size = 200;
    unsigned workers = 0;
};

/// Largest covert power satisfying the covertness constraint at the given
/// cover power: sup{p_ab in [0, p_total - p_ac] : avg detection error >=
/// 1 - epsilon}, by bisection (1e-9 relative) on the strictly decreasing
/// average error. Returns the budget cap when even full covert power is
/// covert. The monotonicity the bisection relies on is spot-checked on a
/// coarse sample; a violation throws rather than returning a wrong root.
double max_covert_power(const SystemParams& params, double p_ac);

/// Default p_ac grid over (0, p_total]: log-spaced in p_ac over the lower
/// half and log-spaced in the remaining power budget over the upper half, so
/// both the weak-cover end and the knee where the covert budget pinches to
/// zero are resolved. Ascending, ends at p_total; grid_size >= 2.
std::vector<double> make_pac_grid(double p_total, int grid_size);

/// Traces the covertness-constrained boundary: for each grid p_ac, spends the
/// largest covert power allowed by the constraint, then maximizes both rates
/// under their outage caps.
std::vector<RegionPoint> region_boundary(const SystemParams& params, const RegionConfig& config);
std::vector<RegionPoint> region_boundary(const SystemParams& params, const RegionConfig& config,
                                         std::span<const double> pac_grid);

/// Same sweep with the covertness constraint dropped: p_ab takes the whole
/// remaining budget. covert_margin is reported as-is (typically negative).
std::vector<RegionPoint> no_covert_baseline(const SystemParams& params,
                                            const RegionConfig& config);
std::vector<RegionPoint> no_covert_baseline(const SystemParams& params,
                                            const RegionConfig& config,
                                            std::span<const double> pac_grid);

/// Re-validates a point's invariants against the modules that produced it.
/// require_covert_margin distinguishes constrained points from baseline ones.
std::vector<std::string> validate_point(const SystemParams& params, const RegionConfig& config,
                                        const RegionPoint& point, bool require_covert_margin);

}  // namespace covertsim::region
