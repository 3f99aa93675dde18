// Copyright 2026 The qdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qdc/scaling.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

using namespace qdc;

namespace {

constexpr double kSameP = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Curve {
    std::vector<double> x;
    std::vector<double> y;
};

std::map<double, double> curve_of(std::span<const AggregatePoint> points, std::size_t L) {
    std::map<double, double> out;
    for (const auto &pt : points) {
        if (pt.L == L) {
            out[pt.p] = pt.mean;
        }
    }
    return out;
}

double interpolate(const Curve &c, double x) {
    auto hi = std::lower_bound(c.x.begin(), c.x.end(), x);
    auto k = static_cast<std::size_t>(hi - c.x.begin());
    if (k == 0) {
        return c.y[0];
    }
    double x0 = c.x[k - 1];
    double x1 = c.x[k];
    if (x1 == x0) {
        return c.y[k];
    }
    return c.y[k - 1] + (c.y[k] - c.y[k - 1]) * (x - x0) / (x1 - x0);
}

double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    double pos = q * static_cast<double>(values.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (values[hi] - values[lo]) * (pos - static_cast<double>(lo));
}

double stddev(const std::vector<double> &values) {
    if (values.size() < 2) {
        return 0.0;
    }
    double mean = 0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double ss = 0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::pair<double, double> data_p_range(std::span<const ScalingPoint> data) {
    auto [lo, hi] = std::minmax_element(
        data.begin(), data.end(), [](const ScalingPoint &a, const ScalingPoint &b) { return a.p < b.p; });
    return {lo->p, hi->p};
}

void check_collapse_data(std::span<const ScalingPoint> data) {
    std::map<std::size_t, std::size_t> per_size;
    for (const auto &pt : data) {
        per_size[pt.L]++;
    }
    if (per_size.size() < 3) {
        throw std::invalid_argument(
            "fit_collapse: need at least 3 system sizes in the p window, got " + std::to_string(per_size.size()));
    }
    for (auto [L, n] : per_size) {
        if (n < 5) {
            throw std::invalid_argument(
                "fit_collapse: L=" + std::to_string(L) + " has " + std::to_string(n) +
                " p points in the window; need at least 5");
        }
    }
}

CollapseFit fit_once(std::span<const ScalingPoint> data, const CollapseOptions &options, bool keep_trace) {
    auto [pc_lo, pc_hi] = options.p_window.value_or(data_p_range(data));
    auto [nu_lo, nu_hi] = options.fixed_nu ? std::pair{*options.fixed_nu, *options.fixed_nu} : options.nu_window;
    if (!(pc_lo <= pc_hi) || !(nu_lo <= nu_hi) || nu_lo <= 0) {
        throw std::invalid_argument("fit_collapse: windows must be ordered and nu must be positive");
    }
    std::size_t grid = std::max<std::size_t>(options.grid, 2);
    std::size_t nu_steps = options.fixed_nu ? 1 : grid;
    double dpc = (pc_hi - pc_lo) / static_cast<double>(grid - 1);
    double dnu = options.fixed_nu ? 0.0 : (nu_hi - nu_lo) / static_cast<double>(grid - 1);

    CollapseFit fit;
    fit.cost = kInf;
    std::size_t best_terms_seen = 0;
    auto evaluate = [&](double pc, double nu) {
        CollapseCost c = collapse_cost(data, pc, nu, options.min_overlap_fraction);
        best_terms_seen = std::max(best_terms_seen, c.terms);
        if (keep_trace) {
            fit.trace.push_back({pc, nu, c.cost});
        }
        if (c.cost < fit.cost) {
            fit.p_c = pc;
            fit.nu = nu;
            fit.cost = c.cost;
            fit.terms = c.terms;
            return true;
        }
        return false;
    };
    for (std::size_t i = 0; i < grid; i++) {
        for (std::size_t j = 0; j < nu_steps; j++) {
            evaluate(pc_lo + dpc * static_cast<double>(i), nu_lo + dnu * static_cast<double>(j));
        }
    }
    if (!std::isfinite(fit.cost)) {
        throw std::runtime_error(
            "fit_collapse: insufficient overlap in x after rescaling; at most " + std::to_string(best_terms_seen) +
            " of " + std::to_string(data.size()) + " points fall inside the other sizes' range");
    }

    std::size_t trace_mark = fit.trace.size();
    for (int iteration = 0; iteration < 400 && (dpc > 1e-7 || dnu > 1e-7); iteration++) {
        bool improved = false;
        for (double step : {dpc, -dpc}) {
            double pc = fit.p_c + step;
            if (step != 0 && pc >= pc_lo && pc <= pc_hi) {
                improved |= evaluate(pc, fit.nu);
            }
        }
        for (double step : {dnu, -dnu}) {
            double nu = fit.nu + step;
            if (step != 0 && nu >= nu_lo && nu <= nu_hi) {
                improved |= evaluate(fit.p_c, nu);
            }
        }
        if (!improved) {
            dpc /= 2;
            dnu /= 2;
        }
    }
    if (keep_trace) {
        // Keep the full grid but only the accepted refinement steps.
        std::vector<CollapseTraceEntry> refined;
        double running = kInf;
        for (std::size_t k = trace_mark; k < fit.trace.size(); k++) {
            if (fit.trace[k].cost < running) {
                running = fit.trace[k].cost;
                refined.push_back(fit.trace[k]);
            }
        }
        fit.trace.resize(trace_mark);
        fit.trace.insert(fit.trace.end(), refined.begin(), refined.end());
    }
    return fit;
}

}  // namespace

double qdc::estimate_crossing(
    std::span<const AggregatePoint> points, std::size_t L1, std::size_t L2, const std::string &observable) {
    auto selected = final_layer_points(points, observable);
    auto small = curve_of(selected, L1);
    auto large = curve_of(selected, L2);
    std::vector<std::pair<double, double>> diff;
    for (auto [p, y1] : small) {
        auto it = large.lower_bound(p - kSameP);
        if (it != large.end() && std::abs(it->first - p) <= kSameP) {
            diff.emplace_back(p, it->second - y1);
        }
    }
    if (diff.size() < 3) {
        throw std::invalid_argument(
            "estimate_crossing: L=" + std::to_string(L1) + " and L=" + std::to_string(L2) + " share " +
            std::to_string(diff.size()) + " p values of '" + observable + "'; need at least 3");
    }
    for (std::size_t k = 0; k + 1 < diff.size(); k++) {
        auto [p0, d0] = diff[k];
        auto [p1, d1] = diff[k + 1];
        if (d0 < 0 && d1 >= 0) {
            return p0 + (p1 - p0) * (-d0) / (d1 - d0);
        }
    }
    throw std::runtime_error("no crossing in range");
}

std::vector<CrossingEstimate> qdc::pairwise_crossings(
    std::span<const AggregatePoint> points, const std::string &observable) {
    std::set<std::size_t> sizes;
    for (const auto &pt : points) {
        if (pt.observable == observable) {
            sizes.insert(pt.L);
        }
    }
    std::vector<CrossingEstimate> out;
    for (auto a = sizes.begin(); a != sizes.end(); ++a) {
        for (auto b = std::next(a); b != sizes.end(); ++b) {
            out.push_back({*a, *b, estimate_crossing(points, *a, *b, observable)});
        }
    }
    return out;
}

CollapseCost qdc::collapse_cost(std::span<const ScalingPoint> data, double p_c, double nu, double min_overlap_fraction) {
    std::map<std::size_t, Curve> by_size;
    std::vector<double> xs(data.size());
    for (std::size_t k = 0; k < data.size(); k++) {
        xs[k] = (data[k].p - p_c) * std::pow(static_cast<double>(data[k].L), 1.0 / nu);
        by_size[data[k].L];
    }

    CollapseCost result;
    double total = 0;
    for (const auto &[L, unused] : by_size) {
        std::vector<std::pair<double, double>> others;
        for (std::size_t k = 0; k < data.size(); k++) {
            if (data[k].L != L) {
                others.emplace_back(xs[k], data[k].y);
            }
        }
        if (others.size() < 2) {
            continue;
        }
        std::sort(others.begin(), others.end());
        Curve master;
        for (auto [x, y] : others) {
            master.x.push_back(x);
            master.y.push_back(y);
        }
        for (std::size_t k = 0; k < data.size(); k++) {
            if (data[k].L != L || xs[k] < master.x.front() || xs[k] > master.x.back()) {
                continue;
            }
            double se = data[k].std_error > 0 ? data[k].std_error : 1.0;
            double r = (data[k].y - interpolate(master, xs[k])) / se;
            total += r * r;
            result.terms++;
        }
    }
    double needed = std::max(1.0, min_overlap_fraction * static_cast<double>(data.size()));
    result.cost = static_cast<double>(result.terms) >= needed ? total / static_cast<double>(result.terms) : kInf;
    return result;
}

std::vector<ScalingPoint> qdc::scaling_points(
    std::span<const AggregatePoint> points, const std::string &observable,
    std::optional<std::pair<double, double>> p_window) {
    std::vector<ScalingPoint> out;
    for (const auto &pt : final_layer_points(points, observable)) {
        if (p_window && (pt.p < p_window->first - kSameP || pt.p > p_window->second + kSameP)) {
            continue;
        }
        out.push_back({pt.L, pt.p, pt.mean, pt.std_error});
    }
    return out;
}

CollapseFit qdc::fit_collapse(std::span<const AggregatePoint> points, const CollapseOptions &options) {
    auto data = scaling_points(points, options.observable, options.p_window);
    return fit_collapse(std::span<const ScalingPoint>(data), options);
}

CollapseFit qdc::fit_collapse(std::span<const ScalingPoint> data, const CollapseOptions &options) {
    check_collapse_data(data);
    CollapseFit fit = fit_once(data, options, true);
    if (options.bootstrap == 0) {
        return fit;
    }
    std::mt19937_64 rng(options.bootstrap_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> pcs;
    std::vector<double> nus;
    std::vector<ScalingPoint> resampled(data.begin(), data.end());
    for (std::size_t b = 0; b < options.bootstrap; b++) {
        for (std::size_t k = 0; k < data.size(); k++) {
            resampled[k].y = data[k].y + std::max(0.0, data[k].std_error) * gauss(rng);
        }
        try {
            CollapseFit refit = fit_once(resampled, options, false);
            pcs.push_back(refit.p_c);
            nus.push_back(refit.nu);
        } catch (const std::runtime_error &) {
            // A resample without overlap contributes no estimate.
        }
    }
    if (!pcs.empty()) {
        fit.bootstrap = BootstrapSummary{
            pcs.size(),
            stddev(pcs),
            percentile(pcs, 0.025),
            percentile(pcs, 0.975),
            stddev(nus),
            percentile(nus, 0.025),
            percentile(nus, 0.975)};
    }
    return fit;
}

std::vector<AggregatePoint> qdc::synthetic_collapse_points(
    std::span<const std::size_t> Ls, std::span<const double> ps, double p_c, double nu, double noise,
    std::uint64_t seed, const std::string &observable) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<AggregatePoint> out;
    for (std::size_t L : Ls) {
        for (double p : ps) {
            double x = (p - p_c) * std::pow(static_cast<double>(L), 1.0 / nu);
            double y = -0.5 * (1.0 - std::tanh(2.0 * x));
            if (noise > 0) {
                y += noise * gauss(rng);
            }
            out.push_back({L, p, 0, observable, y, noise, 1});
        }
    }
    return out;
}

std::vector<double> qdc::p_grid(double begin, double end, double step) {
    if (!(step > 0) || end < begin) {
        throw std::invalid_argument("p_grid: need begin <= end and step > 0");
    }
    std::vector<double> out;
    for (std::size_t k = 0;; k++) {
        double p = std::round((begin + step * static_cast<double>(k)) * 1e9) / 1e9;
        if (p > end + 1e-12) {
            break;
        }
        out.push_back(p);
    }
    return out;
}
