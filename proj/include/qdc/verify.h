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


#ifndef QDC_VERIFY_H
#define QDC_VERIFY_H

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qdc/full_tableau.h"

namespace qdc {

struct VerifyOptions {
    std::vector<std::size_t> Ls{4};
    std::vector<double> ps{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<InitialStateKind> kinds{
        InitialStateKind::PureProduct, InitialStateKind::MaximallyMixed, InitialStateKind::BellReference};
    std::size_t seeds = 100;
    /// Layers per trajectory; 0 means 4 L.
    std::size_t T = 0;
    std::uint64_t master_seed = 0;
    std::size_t qubit_cap = kDefaultQubitCap;
    /// Random regions per snapshot for each symmetry check.
    std::size_t region_trials = 50;
    /// Seeds of the a/b-asymmetric circuit, run at the first L and p = 0.5.
    std::size_t negative_control_seeds = 50;
};

struct CheckResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t violations = 0;
    /// The first few violations, human readable.
    std::vector<std::string> examples;

    bool passed() const {
        return checks > 0 && violations == 0;
    }
    void record(bool ok, const std::string &what);
};

struct VerifyReport {
    VerifyOptions options;
    std::vector<CheckResult> checks;
    std::size_t trajectories = 0;
    std::size_t negative_control_runs = 0;
    std::size_t negative_control_detected = 0;
    double elapsed_s = 0;

    const CheckResult &check(const std::string &name) const;
    double negative_control_fraction() const;
    bool passed() const;
    std::string to_json(bool include_timing = false) const;
};

/// Runs the efficient tracker and the full oracle on identical seeded circuits.
///
/// Checks: "oracle_equivalence" (every observable at every layer), "ie_symmetry",
/// "complement_symmetry" (bell runs), "positivity" (conditional entropies),
/// "purity" (pure initial states), "coherent_info_identity" (mixed vs bell runs).
VerifyReport run_verification(const VerifyOptions &options);

}  // namespace qdc

#endif
