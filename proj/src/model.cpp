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

#include "covertsim/model.hpp"

#include <cmath>
#include <sstream>

namespace covertsim {

namespace {

void check_finite(std::vector<std::string>& errors, const char* name, double v) {
    if (!std::isfinite(v)) {
        errors.push_back(std::string(name) + " is not finite");
    }
}

void check_open01(std::vector<std::string>& errors, const char* name, double v) {
    if (!(v > 0.0 && v < 1.0)) {
        errors.push_back(std::string(name) + " out of open interval (0,1)");
    }
}

}  // namespace

std::vector<std::string> validate(const SystemParams& p) {
    std::vector<std::string> errors;

    for (auto [name, v] : {std::pair{"p_ac", p.p_ac},       {"p_ab", p.p_ab},
                           std::pair{"d_ac", p.d_ac},       {"d_ab", p.d_ab},
                           std::pair{"d_aw", p.d_aw},       {"alpha", p.alpha},
                           std::pair{"sigma2_c", p.sigma2_c}, {"sigma2_b", p.sigma2_b},
                           std::pair{"sigma2_w", p.sigma2_w}, {"beta_c", p.beta_c},
                           std::pair{"beta_b", p.beta_b},   {"beta_w", p.beta_w},
                           std::pair{"epsilon", p.epsilon}, {"p_total", p.p_total}}) {
        check_finite(errors, name, v);
    }
    if (!errors.empty()) {
        return errors;
    }

    if (!(p.p_ac > 0.0)) errors.push_back("p_ac must be > 0");
    if (!(p.p_ab >= 0.0)) errors.push_back("p_ab must be >= 0");
    if (!(p.p_total > 0.0)) errors.push_back("p_total must be > 0");
    // Budget boundary p_ac + p_ab = p_total is feasible; the 1-ulp-scale slack
    // keeps splits constructed as (p_ac, p_total - p_ac) from tripping rounding.
    if (p.p_ac + p.p_ab > p.p_total * (1.0 + 1e-12)) {
        errors.push_back("p_ac + p_ab exceeds p_total");
    }
    if (!(p.d_ac > 0.0)) errors.push_back("d_ac must be > 0");
    if (!(p.d_ab > 0.0)) errors.push_back("d_ab must be > 0");
    if (!(p.d_aw > 0.0)) errors.push_back("d_aw must be > 0");
    if (!(p.alpha >= 2.0)) errors.push_back("alpha below 2");
    if (!(p.sigma2_c > 0.0)) errors.push_back("sigma2_c must be > 0");
    if (!(p.sigma2_b > 0.0)) errors.push_back("sigma2_b must be > 0");
    if (!(p.sigma2_w > 0.0)) errors.push_back("sigma2_w must be > 0");
    check_open01(errors, "beta_c", p.beta_c);
    check_open01(errors, "beta_b", p.beta_b);
    check_open01(errors, "beta_w", p.beta_w);
    check_open01(errors, "epsilon", p.epsilon);

    return errors;
}

void ensure_valid(const SystemParams& params) {
    const auto errors = validate(params);
    if (errors.empty()) {
        return;
    }
    std::ostringstream msg;
    msg << "invalid parameters:";
    for (const auto& e : errors) {
        msg << " [" << e << "]";
    }
    throw std::invalid_argument(msg.str());
}

WillieChannelView derive_willie_view(const SystemParams& params) {
    ensure_valid(params);
    if (!(params.p_ab > 0.0)) {
        throw DegenerateHypotheses("degenerate hypothesis pair: p_ab = 0 makes zeta1 = zeta0");
    }
    const double path_loss = std::pow(params.d_aw, params.alpha);
    WillieChannelView view;
    view.zeta0 = params.p_ac / path_loss;
    view.zeta1 = (params.p_ac + params.p_ab) / path_loss;
    view.beta_w = params.beta_w;
    view.sigma2_w = params.sigma2_w;
    return view;
}

}  // namespace covertsim
