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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "covertsim/detection.hpp"
#include "covertsim/model.hpp"
#include "covertsim/montecarlo.hpp"
#include "covertsim/outage.hpp"
#include "covertsim/region.hpp"

namespace {

using namespace covertsim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// --- CSV output ------------------------------------------------------------

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) {
        if (path != "-") {
            file_.open(path, std::ios::out | std::ios::trunc);
            if (!file_) {
                throw UsageError("cannot open output file: " + path);
            }
        }
    }

    void row(const std::vector<std::string>& cells) {
        std::ostream& out = file_.is_open() ? file_ : std::cout;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) {
                out << ',';
            }
            out << cells[i];
        }
        out << '\n';
    }

  private:
    std::ofstream file_;
};

// --- sweep grids -----------------------------------------------------------

struct Sweep {
    std::string name;
    bool log_scale = false;
    double min = 0.0;
    double max = 0.0;
    int count = 0;
};

Sweep parse_sweep(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 5) {
        throw UsageError("--sweep expects NAME:lin|log:MIN:MAX:COUNT, got: " + text);
    }
    Sweep sweep;
    sweep.name = parts[0];
    if (parts[1] == "lin") {
        sweep.log_scale = false;
    } else if (parts[1] == "log") {
        sweep.log_scale = true;
    } else {
        throw UsageError("sweep scale must be lin or log, got: " + parts[1]);
    }
    try {
        sweep.min = std::stod(parts[2]);
        sweep.max = std::stod(parts[3]);
        sweep.count = std::stoi(parts[4]);
    } catch (const std::exception&) {
        throw UsageError("cannot parse sweep bounds in: " + text);
    }
    if (sweep.count < 1) {
        throw UsageError("sweep count must be >= 1");
    }
    if (sweep.log_scale && !(sweep.min > 0.0 && sweep.max > 0.0)) {
        throw UsageError("log sweep requires positive bounds");
    }
    return sweep;
}

std::vector<double> sweep_values(const Sweep& sweep) {
    std::vector<double> values;
    values.reserve(sweep.count);
    if (sweep.count == 1) {
        values.push_back(sweep.min);
        return values;
    }
    for (int i = 0; i < sweep.count; ++i) {
        const double f = static_cast<double>(i) / (sweep.count - 1);
        if (sweep.log_scale) {
            values.push_back(std::exp(std::log(sweep.min) +
                                      (std::log(sweep.max) - std::log(sweep.min)) * f));
        } else {
            values.push_back(sweep.min + (sweep.max - sweep.min) * f);
        }
    }
    return values;
}

double SystemParams::* param_field(const std::string& name) {
    static const std::map<std::string, double SystemParams::*> fields = {
        {"p_ac", &SystemParams::p_ac},       {"p_ab", &SystemParams::p_ab},
        {"d_ac", &SystemParams::d_ac},       {"d_ab", &SystemParams::d_ab},
        {"d_aw", &SystemParams::d_aw},       {"alpha", &SystemParams::alpha},
        {"sigma2_c", &SystemParams::sigma2_c}, {"sigma2_b", &SystemParams::sigma2_b},
        {"sigma2_w", &SystemParams::sigma2_w}, {"beta_c", &SystemParams::beta_c},
        {"beta_b", &SystemParams::beta_b},   {"beta_w", &SystemParams::beta_w},
        {"epsilon", &SystemParams::epsilon}, {"p_total", &SystemParams::p_total},
    };
    const auto it = fields.find(name);
    if (it == fields.end()) {
        throw UsageError("sweep parameter must name a SystemParams field, got: " + name);
    }
    return it->second;
}

// --- experiment configuration ----------------------------------------------

struct CliOptions {
    std::string command;
    SystemParams params;
    std::optional<Sweep> sweep;
    std::string out_path = "-";
    double delta_c = 0.1;
    double delta_b = 0.1;
    int grid_size = 200;
    bool baseline = false;
    std::string receiver = "carol";
    std::string hypothesis = "h1";
    mc::McConfig mc;
};

void ensure_params(const SystemParams& params) {
    const auto errors = validate(params);
    if (errors.empty()) {
        return;
    }
    std::ostringstream msg;
    msg << "invalid parameters:";
    for (const auto& e : errors) {
        msg << " [" << e << "]";
    }
    throw UsageError(msg.str());
}

void run_threshold(const CliOptions& opt) {
    ensure_params(opt.params);
    const WillieChannelView view = derive_willie_view(opt.params);
    std::vector<double> gains;
    if (opt.sweep) {
        if (opt.sweep->name != "g_hat") {
            throw UsageError("threshold sweeps over the realization gain; use --sweep g_hat:...");
        }
        if (opt.sweep->min < 0.0) {
            throw UsageError("g_hat sweep requires nonnegative bounds");
        }
        gains = sweep_values(*opt.sweep);
    } else {
        gains = sweep_values({"g_hat", false, 0.0, 8.0 * (1.0 - view.beta_w), 200});
    }

    CsvWriter csv(opt.out_path);
    csv.row({"g_hat", "lambda_star", "branch", "error_sum"});
    for (const double g : gains) {
        const auto decision = detection::optimal_threshold(view.with_gain(g));
        const double err = detection::conditional_error_at_optimum(view.with_gain(g));
        csv.row({csv_double(g), csv_double(decision.lambda_star),
                 std::string(detection::to_string(decision.branch)), csv_double(err)});
    }
}

void run_avg_error(const CliOptions& opt) {
    if (!opt.sweep) {
        throw UsageError("avg-error requires --sweep over a SystemParams field");
    }
    const auto field = param_field(opt.sweep->name);

    // compute the whole sweep before opening the output so a validation
    // failure cannot leave a truncated CSV behind
    std::vector<std::pair<double, double>> rows;
    for (const double value : sweep_values(*opt.sweep)) {
        SystemParams p = opt.params;
        p.*field = value;
        ensure_params(p);
        // p_ab = 0 leaves the hypotheses indistinguishable; the error tends
        // to 1 in that limit, so report the limit rather than rejecting it.
        rows.emplace_back(value, p.p_ab > 0.0 ? detection::average_detection_error(p) : 1.0);
    }

    CsvWriter csv(opt.out_path);
    csv.row({opt.sweep->name, "avg_error"});
    for (const auto& [value, avg] : rows) {
        csv.row({csv_double(value), csv_double(avg)});
    }
}

outage::OutageSpec make_outage_spec(const CliOptions& opt, double rate) {
    outage::OutageSpec spec;
    if (opt.receiver == "carol") {
        spec.receiver = Receiver::Carol;
    } else if (opt.receiver == "bob") {
        spec.receiver = Receiver::Bob;
    } else {
        throw UsageError("--receiver must be carol or bob");
    }
    if (opt.hypothesis == "h0") {
        spec.hypothesis = Hypothesis::H0;
    } else if (opt.hypothesis == "h1") {
        spec.hypothesis = Hypothesis::H1;
    } else {
        throw UsageError("--hypothesis must be h0 or h1");
    }
    spec.rate = rate;
    spec.delta_cap = spec.receiver == Receiver::Carol ? opt.delta_c : opt.delta_b;
    return spec;
}

void run_outage(const CliOptions& opt) {
    ensure_params(opt.params);
    std::vector<double> rates;
    if (opt.sweep) {
        if (opt.sweep->name != "rate") {
            throw UsageError("outage sweeps over the target rate; use --sweep rate:...");
        }
        if (opt.sweep->min < 0.0) {
            throw UsageError("rate sweep requires nonnegative bounds");
        }
        rates = sweep_values(*opt.sweep);
    } else {
        rates = sweep_values({"rate", false, 0.0, 10.0, 201});
    }
    const outage::OutageSpec probe = make_outage_spec(opt, 0.0);
    outage::ensure_valid(opt.params, probe);

    CsvWriter csv(opt.out_path);
    csv.row({"rate", "delta"});
    for (const double rate : rates) {
        const double delta =
            outage::outage_probability(opt.params, probe.receiver, probe.hypothesis, rate);
        csv.row({csv_double(rate), csv_double(delta)});
    }
}

void run_region(const CliOptions& opt) {
    if (opt.sweep) {
        throw UsageError("region does not take --sweep; the p_ac grid is built in");
    }
    ensure_params(opt.params);
    region::RegionConfig config;
    config.delta_c = opt.delta_c;
    config.delta_b = opt.delta_b;
    config.grid_size = opt.grid_size;
    config.workers = opt.mc.workers;
    const auto points = opt.baseline ? region::no_covert_baseline(opt.params, config)
                                     : region::region_boundary(opt.params, config);

    // re-validate every point before any output is written
    for (const auto& point : points) {
        const auto errors = region::validate_point(opt.params, config, point, !opt.baseline);
        if (!errors.empty()) {
            std::ostringstream msg;
            msg << "region point failed re-validation at p_ac=" << point.p_ac << ":";
            for (const auto& e : errors) {
                msg << " [" << e << "]";
            }
            throw NumericFailure(msg.str());
        }
    }

    CsvWriter csv(opt.out_path);
    csv.row({"p_ac", "p_ab", "r_c", "r_b", "covert_margin"});
    for (const auto& point : points) {
        csv.row({csv_double(point.p_ac), csv_double(point.p_ab), csv_double(point.r_c),
                 csv_double(point.r_b), csv_double(point.covert_margin)});
    }
}

void run_mc_validate(const CliOptions& opt) {
    ensure_params(opt.params);
    const SystemParams& p = opt.params;
    const WillieChannelView view = derive_willie_view(p);
    const double g_ref = 1.0 - view.beta_w;  // mean known-channel gain
    // probe one uncertainty quantum above the optimum so both error
    // probabilities are interior rather than pinned at a case boundary
    const double lambda = detection::optimal_threshold(view.with_gain(g_ref)).lambda_star +
                          view.zeta1 * view.beta_w;
    const auto closed = detection::error_sum(view.with_gain(g_ref), lambda);

    CsvWriter csv(opt.out_path);
    csv.row({"quantity", "closed_form", "mc_estimate", "std_err", "sigmas"});
    const auto emit = [&csv](const std::string& name, double closed_value, double estimate,
                             double std_err) {
        double sigmas;
        if (std_err > 0.0) {
            sigmas = std::abs(estimate - closed_value) / std_err;
        } else {
            sigmas = estimate == closed_value ? 0.0
                                              : std::numeric_limits<double>::infinity();
        }
        csv.row({name, csv_double(closed_value), csv_double(estimate), csv_double(std_err),
                 csv_double(sigmas)});
    };

    const auto err = mc::empirical_error_sum(p, lambda, opt.mc, g_ref);
    emit("p_fa", closed.p_fa, err.p_fa, err.se_fa);
    emit("p_md", closed.p_md, err.p_md, err.se_md);
    emit("error_sum", closed.error_sum, err.error_sum, err.se_error_sum);

    const auto avg = mc::empirical_average_error(p, opt.mc);
    emit("avg_detection_error", detection::average_detection_error(p), avg.error_sum,
         avg.se_error_sum);

    const double rate = 1.0;
    const auto carol_h1 = mc::empirical_outage(p, Receiver::Carol, Hypothesis::H1, rate, opt.mc);
    emit("outage_carol_h1", outage::outage_carol_h1(p, rate), carol_h1.delta_hat,
         carol_h1.std_err);
    const auto carol_h0 = mc::empirical_outage(p, Receiver::Carol, Hypothesis::H0, rate, opt.mc);
    emit("outage_carol_h0", outage::outage_carol_h0(p, rate), carol_h0.delta_hat,
         carol_h0.std_err);
    const auto bob_h1 = mc::empirical_outage(p, Receiver::Bob, Hypothesis::H1, rate, opt.mc);
    emit("outage_bob_h1", outage::outage_bob_h1(p, rate), bob_h1.delta_hat, bob_h1.std_err);

    for (const auto* est : {&err, &avg}) {
        for (const auto& w : est->warnings) {
            std::cerr << "warning: " << w << '\n';
        }
    }
}

int run(const CliOptions& opt) {
    if (opt.command == "threshold") {
        run_threshold(opt);
    } else if (opt.command == "avg-error") {
        run_avg_error(opt);
    } else if (opt.command == "outage") {
        run_outage(opt);
    } else if (opt.command == "region") {
        run_region(opt);
    } else if (opt.command == "mc-validate") {
        run_mc_validate(opt);
    } else {
        throw UsageError("unknown command: " + opt.command);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covert-communication analysis over block-fading channels: warden detection "
                 "limits, receiver outage, and covertness-constrained rate regions"};
    app.set_config("--config", "", "Flat key=value config file (same keys as flags)");

    CliOptions opt;
    std::optional<double> p_total_db;
    std::optional<double> beta_all;
    std::optional<double> beta_c;
    std::optional<double> beta_b;
    std::optional<double> beta_w;
    std::string sweep_text;
    std::uint64_t trials = 1'000'000;
    std::optional<std::uint32_t> n_uses;
    std::uint64_t seed = 0;
    unsigned workers = 0;

    app.add_option("command", opt.command, "threshold | avg-error | outage | region | mc-validate")
        ->required();
    app.add_option("--p-ac", opt.params.p_ac, "Cover-link transmit power (linear)");
    app.add_option("--p-ab", opt.params.p_ab, "Covert-link transmit power (linear)");
    app.add_option("--p-total-db", p_total_db, "Total power budget in dB (stored linear)");
    app.add_option("--d-ac", opt.params.d_ac, "Distance to Carol");
    app.add_option("--d-ab", opt.params.d_ab, "Distance to Bob");
    app.add_option("--d-aw", opt.params.d_aw, "Distance to Willie");
    app.add_option("--alpha", opt.params.alpha, "Path-loss exponent");
    app.add_option("--sigma2-c", opt.params.sigma2_c, "Carol noise variance");
    app.add_option("--sigma2-b", opt.params.sigma2_b, "Bob noise variance");
    app.add_option("--sigma2-w", opt.params.sigma2_w, "Willie noise variance");
    app.add_option("--beta", beta_all, "Channel-uncertainty variance for all users");
    app.add_option("--beta-c", beta_c, "Carol channel-uncertainty variance");
    app.add_option("--beta-b", beta_b, "Bob channel-uncertainty variance");
    app.add_option("--beta-w", beta_w, "Willie channel-uncertainty variance");
    app.add_option("--eps", opt.params.epsilon, "Covertness requirement epsilon");
    app.add_option("--delta-c", opt.delta_c, "Carol outage cap");
    app.add_option("--delta-b", opt.delta_b, "Bob outage cap");
    app.add_option("--sweep", sweep_text, "NAME:lin|log:MIN:MAX:COUNT");
    app.add_option("--trials", trials, "Monte Carlo trials");
    app.add_option("--n-uses", n_uses, "Channel uses per block (finite-n mode)");
    app.add_option("--seed", seed, "Monte Carlo master seed");
    app.add_option("--workers", workers, "Parallel worker count")
        ->envname("COVERTSIM_WORKERS");
    app.add_option("--out", opt.out_path, "CSV destination; - = stdout");
    app.add_option("--grid-size", opt.grid_size, "p_ac grid size for region");
    app.add_flag("--baseline", opt.baseline, "region: drop the covertness constraint");
    app.add_option("--receiver", opt.receiver, "outage: carol | bob");
    app.add_option("--hypothesis", opt.hypothesis, "outage: h0 | h1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (p_total_db) {
            opt.params.p_total = db_to_linear(*p_total_db);
        }
        if (beta_all) {
            opt.params.set_beta(*beta_all);
        }
        if (beta_c) opt.params.beta_c = *beta_c;
        if (beta_b) opt.params.beta_b = *beta_b;
        if (beta_w) opt.params.beta_w = *beta_w;
        if (!sweep_text.empty()) {
            opt.sweep = parse_sweep(sweep_text);
        }
        opt.mc.trials = trials;
        opt.mc.n_uses = n_uses;
        opt.mc.seed = seed;
        if (workers == 0) {
            const unsigned hw = std::thread::hardware_concurrency();
            workers = hw > 0 ? hw : 1;
        }
        opt.mc.workers = workers;
        return run(opt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitNumeric;
    }
}
