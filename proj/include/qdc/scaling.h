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


#ifndef QDC_SCALING_H
#define QDC_SCALING_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qdc/aggregate.h"

namespace qdc {

/// Root of the linear interpolation of y(L2) - y(L1) over the common p grid.
///
/// Uses the last recorded layer of each size and the first interval on which the
/// difference goes from negative to nonnegative. Throws std::invalid_argument when the
/// sizes share fewer than 3 p values, and std::runtime_error("no crossing in range")
/// when no such interval exists.
double estimate_crossing(
    std::span<const AggregatePoint> points, std::size_t L1, std::size_t L2, const std::string &observable = "I3");

struct CrossingEstimate {
    std::size_t L1 = 0;
    std::size_t L2 = 0;
    double p_star = 0;
};

/// estimate_crossing for every pair of sizes present, smaller size first.
std::vector<CrossingEstimate> pairwise_crossings(
    std::span<const AggregatePoint> points, const std::string &observable = "I3");

struct ScalingPoint {
    std::size_t L = 0;
    double p = 0;
    double y = 0;
    double std_error = 0;
};

struct CollapseCost {
    /// Mean of the squared, error-weighted residuals; infinite when too few points
    /// overlap.
    double cost = 0;
    std::size_t terms = 0;
};

/// Leave-one-size-out collapse cost at (p_c, nu).
///
/// Each point is mapped to x = (p - p_c) L^(1/nu) and compared with the piecewise
/// linear curve through the points of all other sizes. Only points inside that curve's
/// x range contribute. A nonpositive std_error counts as 1.
CollapseCost collapse_cost(
    std::span<const ScalingPoint> data, double p_c, double nu, double min_overlap_fraction = 0.5);

struct CollapseOptions {
    std::string observable = "I3";
    /// Range of p used for the data and searched for p_c. Empty means the data range.
    std::optional<std::pair<double, double>> p_window;
    std::pair<double, double> nu_window{0.5, 2.5};
    std::size_t grid = 41;
    std::optional<double> fixed_nu;
    double min_overlap_fraction = 0.5;
    /// Parametric bootstrap refits; 0 disables it.
    std::size_t bootstrap = 0;
    std::uint64_t bootstrap_seed = 0;
};

struct CollapseTraceEntry {
    double p_c = 0;
    double nu = 0;
    double cost = 0;
};

struct BootstrapSummary {
    std::size_t samples = 0;
    double p_c_std = 0;
    double p_c_lo = 0;
    double p_c_hi = 0;
    double nu_std = 0;
    double nu_lo = 0;
    double nu_hi = 0;
};

struct CollapseFit {
    double p_c = 0;
    double nu = 0;
    double cost = 0;
    std::size_t terms = 0;
    /// Every evaluated (p_c, nu): the grid scan first, then accepted refinement steps.
    std::vector<CollapseTraceEntry> trace;
    /// 2.5% and 97.5% percentiles of the bootstrap refits.
    std::optional<BootstrapSummary> bootstrap;
};

std::vector<ScalingPoint> scaling_points(
    std::span<const AggregatePoint> points, const std::string &observable,
    std::optional<std::pair<double, double>> p_window = std::nullopt);

/// Grid scan over the windows followed by coordinate refinement.
///
/// Needs at least 3 sizes with at least 5 p values each inside the p window.
CollapseFit fit_collapse(std::span<const AggregatePoint> points, const CollapseOptions &options);
CollapseFit fit_collapse(std::span<const ScalingPoint> data, const CollapseOptions &options);

/// Points y = f((p - p_c) L^(1/nu)) + noise with f(x) = -(1 - tanh(2x)) / 2 and
/// std_error = noise (or 0 without noise).
std::vector<AggregatePoint> synthetic_collapse_points(
    std::span<const std::size_t> Ls, std::span<const double> ps, double p_c, double nu, double noise,
    std::uint64_t seed, const std::string &observable = "I3");

/// 0.40, 0.42, ... style grids, rounded to 1e-9 so the values print cleanly.
std::vector<double> p_grid(double begin, double end, double step);

}  // namespace qdc

#endif
