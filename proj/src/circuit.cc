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

#include "qdc/circuit.h"

#include <chrono>
#include <stdexcept>

using namespace qdc;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

const SymplecticGate &random_single_qubit(std::mt19937_64 &rng) {
    const auto &gates = single_qubit_symplectics();
    return gates[rng() % gates.size()];
}

}  // namespace

bool CircuitConfig::snapshot_at(std::size_t layer) const {
    if (layer == layers()) {
        return true;
    }
    return record_every > 0 && layer % record_every == 0;
}

void CircuitConfig::validate() const {
    if (L < 4 || L % 2 != 0) {
        throw std::invalid_argument("CircuitConfig: L must be even and >= 4 (got " + std::to_string(L) + ")");
    }
    if (observables.I3 && L % 4 != 0) {
        throw std::invalid_argument("CircuitConfig: I3 needs L divisible by 4 (got " + std::to_string(L) + ")");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("CircuitConfig: p must be in [0, 1]");
    }
    if (!(cnot_prob >= 0.0 && cnot_prob <= 1.0)) {
        throw std::invalid_argument("CircuitConfig: cnot_prob must be in [0, 1]");
    }
    if (observables.coherent_info && initial_state == InitialStateKind::PureProduct) {
        throw std::invalid_argument("CircuitConfig: coherent_info needs a mixed or bell initial state");
    }
    for (std::size_t x : observables.profile_xs) {
        if (x > L) {
            throw std::invalid_argument("CircuitConfig: profile x=" + std::to_string(x) + " exceeds L");
        }
    }
}

std::int64_t Snapshot::value(std::string_view name) const {
    for (const auto &[key, v] : values) {
        if (key == name) {
            return v;
        }
    }
    throw std::out_of_range("snapshot has no observable '" + std::string(name) + "'");
}

std::mt19937_64 qdc::trajectory_rng(std::uint64_t master_seed, std::uint64_t trajectory_index) {
    return std::mt19937_64(splitmix64(splitmix64(master_seed) ^ trajectory_index));
}

double qdc::uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SymplecticGate qdc::sample_two_qubit_clifford(std::mt19937_64 &rng, double cnot_prob) {
    const auto &s1 = random_single_qubit(rng);
    const auto &s2 = random_single_qubit(rng);
    SymplecticGate gate = s1.tensor(s2);
    if (uniform01(rng) < cnot_prob) {
        const auto &s3 = random_single_qubit(rng);
        const auto &s4 = random_single_qubit(rng);
        gate = gate.then(SymplecticGate::cnot()).then(s3.tensor(s4));
    }
    return gate;
}

std::array<std::size_t, 4> qdc::brick_qubits(std::size_t site_i, std::size_t site_j) {
    return {2 * site_i, 2 * site_i + 1, 2 * site_j, 2 * site_j + 1};
}

SymplecticGate qdc::compose_brick(const SymplecticGate &u1, const SymplecticGate &u2) {
    return compose_brick(u1, u1, u2, u2);
}

SymplecticGate qdc::compose_brick(
    const SymplecticGate &u1_a, const SymplecticGate &u1_b, const SymplecticGate &u2_a, const SymplecticGate &u2_b) {
    // Local order: 0 = a_i, 1 = b_i, 2 = a_j, 3 = b_j.
    static constexpr std::array<std::size_t, 2> a_pair{0, 2};
    static constexpr std::array<std::size_t, 2> b_pair{1, 3};
    static constexpr std::array<std::size_t, 2> site_j{2, 3};
    static const SymplecticGate cross = SymplecticGate::swap().embed(4, site_j);
    return u1_a.embed(4, a_pair)
        .then(u1_b.embed(4, b_pair))
        .then(cross)
        .then(u2_a.embed(4, a_pair))
        .then(u2_b.embed(4, b_pair));
}

void qdc::apply_brick(TrackedTableau &t, std::mt19937_64 &rng, std::size_t site_i, std::size_t site_j, double cnot_prob) {
    std::size_t L = t.n_sites();
    if (site_i >= L || site_j >= L || ((site_i + 1) % L != site_j && (site_j + 1) % L != site_i)) {
        throw std::invalid_argument("apply_brick: sites must be neighbours on the periodic chain");
    }
    SymplecticGate u1 = sample_two_qubit_clifford(rng, cnot_prob);
    SymplecticGate u2 = sample_two_qubit_clifford(rng, cnot_prob);
    t.apply_gate(compose_brick(u1, u2), brick_qubits(site_i, site_j));
}

std::vector<std::pair<std::size_t, std::size_t>> qdc::brick_pairs(std::size_t L, std::size_t layer) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::size_t offset = layer % 2 == 1 ? 0 : 1;
    for (std::size_t k = 0; k < L / 2; k++) {
        std::size_t i = 2 * k + offset;
        pairs.emplace_back(i % L, (i + 1) % L);
    }
    return pairs;
}

CircuitSampler::CircuitSampler(const CircuitConfig &config, std::uint64_t trajectory_index)
    : config_(config), rng_(trajectory_rng(config.master_seed, trajectory_index)) {
    config_.validate();
}

LayerPlan CircuitSampler::next_layer() {
    LayerPlan plan;
    plan.layer = ++layer_;
    for (auto [i, j] : brick_pairs(config_.L, plan.layer)) {
        BrickPlan brick{i, j, SymplecticGate(4)};
        if (config_.break_ab_symmetry) {
            SymplecticGate u1_a = sample_two_qubit_clifford(rng_, config_.cnot_prob);
            SymplecticGate u1_b = sample_two_qubit_clifford(rng_, config_.cnot_prob);
            SymplecticGate u2_a = sample_two_qubit_clifford(rng_, config_.cnot_prob);
            SymplecticGate u2_b = sample_two_qubit_clifford(rng_, config_.cnot_prob);
            brick.gate = compose_brick(u1_a, u1_b, u2_a, u2_b);
        } else {
            SymplecticGate u1 = sample_two_qubit_clifford(rng_, config_.cnot_prob);
            SymplecticGate u2 = sample_two_qubit_clifford(rng_, config_.cnot_prob);
            brick.gate = compose_brick(u1, u2);
        }
        plan.bricks.push_back(brick);
    }
    for (std::size_t site = 0; site < config_.L; site++) {
        if (uniform01(rng_) < config_.p) {
            plan.transduced_sites.push_back(site);
        }
    }
    return plan;
}

TrajectoryRecord qdc::run_trajectory(const CircuitConfig &config, std::uint64_t trajectory_index) {
    config.validate();
    auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    TrajectoryRecord record;
    record.config = config;
    record.trajectory_index = trajectory_index;

    TrackedTableau tableau(config.initial_state, 2 * config.L);
    std::size_t row_limit = 2 * tableau.num_tracked_qubits();
    record.max_tracked_rows = tableau.rows().num_rows();
    if (config.snapshot_at(0)) {
        record.snapshots.push_back({0, evaluate_observables(tableau, config.observables), elapsed()});
    }

    CircuitSampler sampler(config, trajectory_index);
    for (std::size_t layer = 1; layer <= config.layers(); layer++) {
        LayerPlan plan = sampler.next_layer();
        apply_layer(tableau, plan);
        tableau.compact();
        record.transductions += plan.transduced_sites.size();
        std::size_t rows = tableau.rows().num_rows();
        if (rows > row_limit) {
            throw std::logic_error(
                "run_trajectory: " + std::to_string(rows) + " tracked rows exceed the bound " +
                std::to_string(row_limit));
        }
        record.max_tracked_rows = std::max(record.max_tracked_rows, rows);
        if (config.snapshot_at(layer)) {
            record.snapshots.push_back({layer, evaluate_observables(tableau, config.observables), elapsed()});
        }
    }
    return record;
}
