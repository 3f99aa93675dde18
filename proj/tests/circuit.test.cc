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

#include <cmath>

#include "gtest/gtest.h"

using namespace qdc;

namespace {

SymplecticGate ab_exchange() {
    std::array<std::size_t, 2> site_i{0, 1};
    std::array<std::size_t, 2> site_j{2, 3};
    return SymplecticGate::swap().embed(4, site_i).then(SymplecticGate::swap().embed(4, site_j));
}

CircuitConfig small_config(std::size_t L, double p) {
    CircuitConfig c;
    c.L = L;
    c.p = p;
    c.master_seed = 99;
    return c;
}

}  // namespace

TEST(circuit_config, defaults_and_schedule) {
    CircuitConfig c;
    c.L = 8;
    ASSERT_EQ(c.layers(), 32);
    c.T = 10;
    c.record_every = 4;
    std::vector<std::size_t> scheduled;
    for (std::size_t layer = 0; layer <= c.layers(); layer++) {
        if (c.snapshot_at(layer)) {
            scheduled.push_back(layer);
        }
    }
    ASSERT_EQ(scheduled, (std::vector<std::size_t>{0, 4, 8, 10}));
    c.record_every = 0;
    ASSERT_FALSE(c.snapshot_at(0));
    ASSERT_TRUE(c.snapshot_at(10));
}

TEST(circuit_config, validation) {
    CircuitConfig c;
    c.L = 6;
    c.validate();
    c.observables.I3 = true;
    ASSERT_THROW(c.validate(), std::invalid_argument);
    c.L = 2;
    c.observables.I3 = false;
    ASSERT_THROW(c.validate(), std::invalid_argument);
    c.L = 7;
    ASSERT_THROW(c.validate(), std::invalid_argument);
    c.L = 8;
    c.p = 1.5;
    ASSERT_THROW(c.validate(), std::invalid_argument);
    c.p = 0.5;
    c.observables.coherent_info = true;
    ASSERT_THROW(c.validate(), std::invalid_argument);
    c.initial_state = InitialStateKind::MaximallyMixed;
    c.validate();
    c.observables.profile_xs = {9};
    ASSERT_THROW(c.validate(), std::invalid_argument);
}

TEST(rng, trajectory_streams_differ_and_repeat) {
    auto a = trajectory_rng(1, 0);
    auto b = trajectory_rng(1, 1);
    auto c = trajectory_rng(1, 0);
    auto first = a();
    ASSERT_NE(first, b());
    ASSERT_EQ(first, c());
    for (int k = 0; k < 1000; k++) {
        double u = uniform01(a);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(sample_two_qubit_clifford, no_cnot_branch_is_local) {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 200; k++) {
        SymplecticGate g = sample_two_qubit_clifford(rng, 0.0);
        ASSERT_TRUE(g.is_block_diagonal());
        ASSERT_TRUE(g.is_symplectic());
    }
}

TEST(sample_two_qubit_clifford, identity_singles_give_cnot) {
    // Find a stream whose four single-qubit draws all pick the identity (index 2).
    bool found = false;
    for (std::uint64_t seed = 0; seed < 100000 && !found; seed++) {
        std::mt19937_64 probe(seed);
        bool s1 = probe() % 6 == 2;
        bool s2 = probe() % 6 == 2;
        probe();
        bool s3 = probe() % 6 == 2;
        bool s4 = probe() % 6 == 2;
        if (s1 && s2 && s3 && s4) {
            std::mt19937_64 rng(seed);
            ASSERT_EQ(sample_two_qubit_clifford(rng, 1.0), SymplecticGate::cnot());
            found = true;
        }
    }
    ASSERT_TRUE(found);
}

TEST(sample_two_qubit_clifford, draw_order) {
    std::mt19937_64 rng(17);
    std::mt19937_64 copy = rng;
    SymplecticGate g = sample_two_qubit_clifford(rng, 0.9);
    const auto &singles = single_qubit_symplectics();
    SymplecticGate expected = singles[copy() % 6].tensor(singles[copy() % 6]);
    if (uniform01(copy) < 0.9) {
        const auto &s3 = singles[copy() % 6];
        const auto &s4 = singles[copy() % 6];
        expected = expected.then(SymplecticGate::cnot()).then(s3.tensor(s4));
    }
    ASSERT_EQ(g, expected);
    ASSERT_EQ(rng(), copy());
}

TEST(sample_two_qubit_clifford, cnot_branch_frequency) {
    std::mt19937_64 rng(2024);
    std::size_t entangling = 0;
    constexpr std::size_t kDraws = 100000;
    for (std::size_t k = 0; k < kDraws; k++) {
        entangling += !sample_two_qubit_clifford(rng, 0.9).is_block_diagonal();
    }
    double frequency = static_cast<double>(entangling) / kDraws;
    ASSERT_NEAR(frequency, 0.9, 0.01);
}

TEST(brick, commutes_with_ab_exchange) {
    std::mt19937_64 rng(3);
    SymplecticGate x = ab_exchange();
    for (int k = 0; k < 50; k++) {
        SymplecticGate u1 = sample_two_qubit_clifford(rng);
        SymplecticGate u2 = sample_two_qubit_clifford(rng);
        SymplecticGate brick = compose_brick(u1, u2);
        ASSERT_TRUE(brick.is_symplectic());
        ASSERT_EQ(x.then(brick), brick.then(x));
    }
}

TEST(brick, asymmetric_brick_breaks_exchange) {
    std::mt19937_64 rng(4);
    SymplecticGate x = ab_exchange();
    std::size_t broken = 0;
    for (int k = 0; k < 50; k++) {
        SymplecticGate brick = compose_brick(
            sample_two_qubit_clifford(rng), sample_two_qubit_clifford(rng), sample_two_qubit_clifford(rng),
            sample_two_qubit_clifford(rng));
        broken += !(x.then(brick) == brick.then(x));
    }
    ASSERT_GT(broken, 40);
}

TEST(brick, identity_gates_leave_one_swap) {
    SymplecticGate id(2);
    std::array<std::size_t, 2> site_j{2, 3};
    ASSERT_EQ(compose_brick(id, id), SymplecticGate::swap().embed(4, site_j));
}

TEST(brick, a_and_b_lines_become_entangled) {
    // Two decoupled chains would keep the a qubits in a pure state forever.
    CircuitConfig config;
    config.L = 8;
    config.T = 8;
    TrackedTableau t(InitialStateKind::PureProduct, 2 * config.L);
    CircuitSampler sampler(config, 3);
    for (std::size_t layer = 1; layer <= config.layers(); layer++) {
        apply_layer(t, sampler.next_layer());
        t.compact();
    }
    std::vector<std::size_t> a_qubits;
    for (std::size_t s = 0; s < config.L; s++) {
        a_qubits.push_back(2 * s);
    }
    ASSERT_GT(conditional_entropy(t, Region(a_qubits)), 2);
}

TEST(brick, apply_brick_uses_two_draws_and_checks_adjacency) {
    TrackedTableau t(InitialStateKind::PureProduct, 8);
    std::mt19937_64 rng(5);
    std::mt19937_64 copy = rng;
    apply_brick(t, rng, 3, 0);
    sample_two_qubit_clifford(copy);
    sample_two_qubit_clifford(copy);
    ASSERT_EQ(rng(), copy());
    ASSERT_THROW(apply_brick(t, rng, 0, 2), std::invalid_argument);
    ASSERT_EQ(rank(t.rows()), 8);
}

TEST(brick_pairs, parity_and_periodic_wrap) {
    using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;
    ASSERT_EQ(brick_pairs(6, 1), (Pairs{{0, 1}, {2, 3}, {4, 5}}));
    ASSERT_EQ(brick_pairs(6, 2), (Pairs{{1, 2}, {3, 4}, {5, 0}}));
    ASSERT_EQ(brick_pairs(6, 3), brick_pairs(6, 1));
}

TEST(circuit_sampler, documented_draw_order) {
    CircuitConfig c = small_config(4, 0.5);
    CircuitSampler sampler(c, 7);
    std::mt19937_64 rng = trajectory_rng(c.master_seed, 7);
    for (std::size_t layer = 1; layer <= 4; layer++) {
        LayerPlan plan = sampler.next_layer();
        ASSERT_EQ(plan.layer, layer);
        auto pairs = brick_pairs(4, layer);
        ASSERT_EQ(plan.bricks.size(), pairs.size());
        for (std::size_t k = 0; k < pairs.size(); k++) {
            SymplecticGate u1 = sample_two_qubit_clifford(rng, c.cnot_prob);
            SymplecticGate u2 = sample_two_qubit_clifford(rng, c.cnot_prob);
            ASSERT_EQ(plan.bricks[k].site_i, pairs[k].first);
            ASSERT_EQ(plan.bricks[k].site_j, pairs[k].second);
            ASSERT_EQ(plan.bricks[k].gate, compose_brick(u1, u2));
        }
        std::vector<std::size_t> sites;
        for (std::size_t s = 0; s < 4; s++) {
            if (uniform01(rng) < c.p) {
                sites.push_back(s);
            }
        }
        ASSERT_EQ(plan.transduced_sites, sites);
    }
}

TEST(run_trajectory, deterministic) {
    CircuitConfig c = small_config(8, 0.3);
    c.record_every = 3;
    c.observables = ObservableSet::parse("I3,cond_entropy_quarter,profile");
    auto a = run_trajectory(c, 5);
    auto b = run_trajectory(c, 5);
    ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
    for (std::size_t k = 0; k < a.snapshots.size(); k++) {
        ASSERT_EQ(a.snapshots[k].layer, b.snapshots[k].layer);
        ASSERT_EQ(a.snapshots[k].values, b.snapshots[k].values);
    }
    ASSERT_EQ(a.transductions, b.transductions);
}

TEST(run_trajectory, full_transduction_resets_to_product) {
    CircuitConfig c = small_config(8, 1.0);
    c.record_every = 1;
    c.observables = ObservableSet::parse("I3,cond_entropy_quarter,profile");
    for (std::uint64_t seed = 0; seed < 5; seed++) {
        auto r = run_trajectory(c, seed);
        ASSERT_EQ(r.snapshots.size(), c.layers() + 1);
        for (const auto &snap : r.snapshots) {
            for (const auto &[name, v] : snap.values) {
                ASSERT_EQ(v, 0) << name << " at layer " << snap.layer;
            }
        }
        ASSERT_EQ(r.transductions, c.L * c.layers());
    }
}

TEST(run_trajectory, unitary_circuit_builds_volume_law) {
    CircuitConfig c = small_config(16, 0.0);
    c.observables = ObservableSet::parse("cond_entropy_quarter,I3");
    double mean = 0;
    double i3 = 0;
    constexpr int kSeeds = 20;
    for (int seed = 0; seed < kSeeds; seed++) {
        auto r = run_trajectory(c, seed);
        ASSERT_EQ(r.snapshots.size(), 1);
        ASSERT_EQ(r.snapshots[0].layer, 64);
        ASSERT_EQ(r.transductions, 0);
        mean += r.snapshots[0].value("cond_entropy_quarter");
        i3 += r.snapshots[0].value("I3");
    }
    mean /= kSeeds;
    i3 /= kSeeds;
    // 4 sites hold 8 qubits.
    ASSERT_GT(mean, 6.0);
    ASSERT_LE(mean, 8.0);
    ASSERT_LT(i3, -4.0);
}

TEST(run_trajectory, transduction_count_is_binomial) {
    CircuitConfig c = small_config(8, 0.3);
    c.T = 16;
    constexpr int kSeeds = 200;
    double total = 0;
    for (int seed = 0; seed < kSeeds; seed++) {
        total += run_trajectory(c, seed).transductions;
    }
    double n = static_cast<double>(c.L * c.layers()) * kSeeds;
    double sigma = std::sqrt(n * c.p * (1 - c.p));
    ASSERT_NEAR(total, n * c.p, 3 * sigma);
}

TEST(run_trajectory, row_count_bound) {
    for (auto kind : {InitialStateKind::PureProduct, InitialStateKind::MaximallyMixed, InitialStateKind::BellReference}) {
        CircuitConfig c = small_config(16, 0.4);
        c.initial_state = kind;
        auto r = run_trajectory(c, 1);
        std::size_t K = 2 * c.L * (kind == InitialStateKind::BellReference ? 2 : 1);
        ASSERT_LE(r.max_tracked_rows, 2 * K);
        ASSERT_GT(r.max_tracked_rows, 0);
    }
}
