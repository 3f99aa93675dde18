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

#ifndef QDC_CIRCUIT_H
#define QDC_CIRCUIT_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "qdc/gf2.h"
#include "qdc/observables.h"
#include "qdc/tracked_tableau.h"

namespace qdc {

struct CircuitConfig {
    std::size_t L = 16;
    /// Number of brickwork layers; 0 means 4 L.
    std::size_t T = 0;
    double p = 0.0;
    double cnot_prob = 0.9;
    InitialStateKind initial_state = InitialStateKind::PureProduct;
    std::uint64_t master_seed = 0;
    /// Snapshot stride in layers; 0 records only the final layer. A positive stride
    /// also records layer 0.
    std::size_t record_every = 0;
    ObservableSet observables;
    /// Negative control: draw independent gates for the b qubits, which breaks the
    /// a/b exchange symmetry of every brick.
    bool break_ab_symmetry = false;

    std::size_t layers() const {
        return T == 0 ? 4 * L : T;
    }
    bool snapshot_at(std::size_t layer) const;

    /// Throws std::invalid_argument on an unusable configuration.
    void validate() const;

    bool operator==(const CircuitConfig &other) const = default;
};

struct Snapshot {
    std::size_t layer = 0;
    ObservableValues values;
    double elapsed_s = 0;

    std::int64_t value(std::string_view name) const;
};

struct TrajectoryRecord {
    CircuitConfig config;
    std::uint64_t trajectory_index = 0;
    std::vector<Snapshot> snapshots;
    /// Largest tracked row count seen after any compaction.
    std::size_t max_tracked_rows = 0;
    std::size_t transductions = 0;
};

/// One 64-bit generator per trajectory, seeded by a splitmix64 mix of the master seed
/// and the trajectory index.
std::mt19937_64 trajectory_rng(std::uint64_t master_seed, std::uint64_t trajectory_index);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(std::mt19937_64 &rng);

/// Random single-qubit symplectics on both qubits, then with probability `cnot_prob` a
/// CNOT (first qubit controls) followed by fresh single-qubit symplectics.
///
/// Draw order: S1, S2, branch coin, then S3, S4 when the CNOT branch is taken.
SymplecticGate sample_two_qubit_clifford(std::mt19937_64 &rng, double cnot_prob = 0.9);

/// Qubits a_i, b_i, a_j, b_j: the local order of every brick gate.
std::array<std::size_t, 4> brick_qubits(std::size_t site_i, std::size_t site_j);

/// Composes a brick on (a_i, b_i, a_j, b_j): u1 on both the a pair and the b pair,
/// SWAP(a_j, b_j), then u2 on both pairs. The *_b arguments replace the gates on the b
/// pair.
///
/// The brick commutes with exchanging a and b on both sites. Swapping only one site is
/// what lets the a and b lines interact: swapping both sites would commute through the
/// identical gates and leave two decoupled chains.
SymplecticGate compose_brick(const SymplecticGate &u1, const SymplecticGate &u2);
SymplecticGate compose_brick(
    const SymplecticGate &u1_a, const SymplecticGate &u1_b, const SymplecticGate &u2_a, const SymplecticGate &u2_b);

/// Samples U1 and U2 (exactly two gate draws) and applies the brick.
void apply_brick(TrackedTableau &t, std::mt19937_64 &rng, std::size_t site_i, std::size_t site_j, double cnot_prob = 0.9);

struct BrickPlan {
    std::size_t site_i;
    std::size_t site_j;
    SymplecticGate gate{4};
};

struct LayerPlan {
    std::size_t layer = 0;
    std::vector<BrickPlan> bricks;
    std::vector<std::size_t> transduced_sites;
};

/// (i, j) site pairs of a layer. Odd layers pair (2k, 2k+1); even layers pair
/// (2k+1, 2k+2 mod L).
std::vector<std::pair<std::size_t, std::size_t>> brick_pairs(std::size_t L, std::size_t layer);

/// Turns a trajectory's random stream into concrete layers. Every backend driven by
/// the same (config, trajectory_index) sees the same gates and transductions.
///
/// Per layer the bricks are drawn left to right, then one transduction coin per site
/// 0..L-1.
class CircuitSampler {
   public:
    CircuitSampler(const CircuitConfig &config, std::uint64_t trajectory_index);

    LayerPlan next_layer();
    std::size_t layers_done() const {
        return layer_;
    }

   private:
    CircuitConfig config_;
    std::mt19937_64 rng_;
    std::size_t layer_ = 0;
};

/// Applies the unitary bricks and then the transductions of a layer.
template <typename State>
void apply_layer(State &state, const LayerPlan &plan) {
    for (const auto &brick : plan.bricks) {
        auto qubits = brick_qubits(brick.site_i, brick.site_j);
        state.apply_gate(brick.gate, qubits);
    }
    for (std::size_t site : plan.transduced_sites) {
        state.transduce_site(site);
    }
}

/// Runs one trajectory on the efficient tableau, recording the configured snapshots.
TrajectoryRecord run_trajectory(const CircuitConfig &config, std::uint64_t trajectory_index);

}  // namespace qdc

#endif
