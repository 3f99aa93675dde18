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


#include "qdc/verify.h"

#include <chrono>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

using namespace qdc;

namespace {

constexpr std::size_t kMaxExamples = 10;
constexpr std::uint64_t kRegionSeedSalt = 0x7265'6769'6f6e'7321ULL;

ObservableSet verification_observables(std::size_t L, InitialStateKind kind) {
    ObservableSet set;
    set.cond_entropy_quarter = true;
    set.I3 = L % 4 == 0;
    set.coherent_info = kind != InitialStateKind::PureProduct;
    set.full_profile = true;
    return set;
}

std::string describe(
    InitialStateKind kind, std::size_t L, double p, std::uint64_t seed, std::size_t layer, const std::string &detail) {
    std::ostringstream out;
    out << initial_state_name(kind) << " L=" << L << " p=" << p << " seed=" << seed << " layer=" << layer << ": "
        << detail;
    return out.str();
}

std::string values_str(const ObservableValues &values) {
    std::string out;
    for (const auto &[name, v] : values) {
        out += (out.empty() ? "" : " ") + name + "=" + std::to_string(v);
    }
    return out;
}

bool is_conditional_entropy(const std::string &name) {
    return name == "cond_entropy_quarter" || name.starts_with("profile:");
}

void absorb(CheckResult &result, const SymmetryReport &report, const std::string &prefix) {
    result.checks += report.checks - report.violations.size();
    for (const auto &v : report.violations) {
        result.record(false, prefix + std::to_string(v.lhs) + " vs " + std::to_string(v.rhs) + " P=" + v.region);
    }
}

}  // namespace

void CheckResult::record(bool ok, const std::string &what) {
    checks++;
    if (!ok) {
        violations++;
        if (examples.size() < kMaxExamples) {
            examples.push_back(what);
        }
    }
}

const CheckResult &VerifyReport::check(const std::string &name) const {
    for (const auto &c : checks) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::out_of_range("no verification check named '" + name + "'");
}

double VerifyReport::negative_control_fraction() const {
    if (negative_control_runs == 0) {
        return 0.0;
    }
    return static_cast<double>(negative_control_detected) / static_cast<double>(negative_control_runs);
}

bool VerifyReport::passed() const {
    for (const auto &c : checks) {
        if (c.violations > 0) {
            return false;
        }
    }
    return true;
}

std::string VerifyReport::to_json(bool include_timing) const {
    nlohmann::ordered_json j;
    j["passed"] = passed();
    j["trajectories"] = trajectories;
    auto &opts = j["options"];
    opts["L"] = options.Ls;
    opts["p"] = options.ps;
    std::vector<std::string> kinds;
    for (auto kind : options.kinds) {
        kinds.emplace_back(initial_state_name(kind));
    }
    opts["init"] = kinds;
    opts["seeds"] = options.seeds;
    opts["T"] = options.T;
    opts["master_seed"] = options.master_seed;
    opts["cap"] = options.qubit_cap;
    opts["region_trials"] = options.region_trials;
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto &c : checks) {
        nlohmann::ordered_json entry;
        entry["name"] = c.name;
        entry["checks"] = c.checks;
        entry["violations"] = c.violations;
        entry["examples"] = c.examples;
        list.push_back(entry);
    }
    j["checks"] = list;
    auto &neg = j["negative_control"];
    neg["runs"] = negative_control_runs;
    neg["runs_with_violation"] = negative_control_detected;
    neg["fraction"] = negative_control_fraction();
    if (include_timing) {
        j["elapsed_s"] = elapsed_s;
    }
    return j.dump(2);
}

VerifyReport qdc::run_verification(const VerifyOptions &options) {
    if (options.Ls.empty() || options.ps.empty() || options.kinds.empty()) {
        throw std::invalid_argument("run_verification: empty L, p or initial-state list");
    }
    auto start = std::chrono::steady_clock::now();
    VerifyReport report;
    report.options = options;
    CheckResult equivalence;
    equivalence.name = "oracle_equivalence";
    CheckResult ie;
    ie.name = "ie_symmetry";
    CheckResult complement;
    complement.name = "complement_symmetry";
    CheckResult positivity;
    positivity.name = "positivity";
    CheckResult purity;
    purity.name = "purity";
    CheckResult coherent;
    coherent.name = "coherent_info_identity";

    for (InitialStateKind kind : options.kinds) {
        for (std::size_t L : options.Ls) {
            for (double p : options.ps) {
                CircuitConfig config;
                config.L = L;
                config.T = options.T;
                config.p = p;
                config.initial_state = kind;
                config.master_seed = options.master_seed;
                config.record_every = 1;
                config.observables = verification_observables(L, kind);
                config.validate();

                for (std::uint64_t seed = 0; seed < options.seeds; seed++) {
                    TrajectoryRecord fast = run_trajectory(config, seed);
                    report.trajectories++;
                    for (const auto &snap : fast.snapshots) {
                        for (const auto &[name, v] : snap.values) {
                            if (is_conditional_entropy(name)) {
                                positivity.record(
                                    v >= 0, describe(kind, L, p, seed, snap.layer, name + "=" + std::to_string(v)));
                            }
                        }
                    }

                    std::mt19937_64 region_rng = trajectory_rng(options.master_seed ^ kRegionSeedSalt, seed);
                    std::size_t k = 0;
                    evolve_full(
                        config, seed,
                        [&](std::size_t layer, const FullTableau &state) {
                            ConditionedEntropies given_apparatus(state, QubitRole::Apparatus);
                            ConditionedEntropies given_environment(state, QubitRole::Environment);
                            ObservableValues slow =
                                evaluate_observables_full(state, given_apparatus, config.observables);
                            const ObservableValues &expected = fast.snapshots.at(k++).values;
                            equivalence.record(
                                slow == expected, describe(
                                                      kind, L, p, seed, layer,
                                                      "tracked {" + values_str(expected) + "} oracle {" +
                                                          values_str(slow) + "}"));
                            absorb(
                                ie, check_ie_symmetry(
                                    state, given_apparatus, given_environment, options.region_trials, region_rng,
                                    layer),
                                describe(kind, L, p, seed, layer, "S(P+A) != S(P+E) "));
                            if (kind == InitialStateKind::BellReference) {
                                absorb(
                                    complement,
                                    check_complement_symmetry(
                                        state, given_apparatus, options.region_trials, region_rng, layer),
                                    describe(kind, L, p, seed, layer, "S(P;A) != S(P^c;A) "));
                            }
                            if (kind != InitialStateKind::MaximallyMixed) {
                                std::size_t s = state.entropy(state.all_qubits());
                                purity.record(s == 0, describe(kind, L, p, seed, layer, "S(all)=" + std::to_string(s)));
                            }
                        },
                        options.qubit_cap);

                    if (kind == InitialStateKind::BellReference) {
                        CircuitConfig mixed = config;
                        mixed.initial_state = InitialStateKind::MaximallyMixed;
                        TrajectoryRecord other = run_trajectory(mixed, seed);
                        for (std::size_t s = 0; s < fast.snapshots.size(); s++) {
                            std::int64_t c_bell = fast.snapshots[s].value("coherent_info");
                            std::int64_t c_mixed = other.snapshots.at(s).value("coherent_info");
                            coherent.record(
                                c_bell == c_mixed, describe(
                                                       kind, L, p, seed, fast.snapshots[s].layer,
                                                       "bell C=" + std::to_string(c_bell) +
                                                           " mixed C=" + std::to_string(c_mixed)));
                        }
                    }
                }
            }
        }
    }

    CircuitConfig broken;
    broken.L = options.Ls.front();
    broken.T = options.T;
    broken.p = 0.5;
    broken.master_seed = options.master_seed;
    broken.record_every = 1;
    broken.break_ab_symmetry = true;
    for (std::uint64_t seed = 0; seed < options.negative_control_seeds; seed++) {
        std::mt19937_64 region_rng = trajectory_rng(options.master_seed ^ kRegionSeedSalt, seed);
        bool detected = false;
        evolve_full(
            broken, seed,
            [&](std::size_t layer, const FullTableau &state) {
                if (!detected) {
                    detected = !check_ie_symmetry(state, options.region_trials, region_rng, layer).violations.empty();
                }
            },
            options.qubit_cap);
        report.negative_control_runs++;
        report.negative_control_detected += detected;
    }

    report.checks = {equivalence, ie, complement, positivity, purity, coherent};
    report.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}
