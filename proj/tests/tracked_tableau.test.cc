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


#include "qdc/tracked_tableau.h"

#include <random>

#include "gtest/gtest.h"
#include "qdc/circuit.h"
#include "qdc/observables.h"

using namespace qdc;

namespace {

// X <-> Z exchange on one qubit: index 0 of the single-qubit list.
const SymplecticGate &hadamard_like() {
    return single_qubit_symplectics()[0];
}

void apply_one(TrackedTableau &t, const SymplecticGate &g, std::size_t q) {
    std::array<std::size_t, 1> qubits{q};
    t.apply_gate(g, qubits);
}

TrackedTableau bell_pair_on_site_zero() {
    TrackedTableau t(InitialStateKind::PureProduct, 2);
    apply_one(t, hadamard_like(), 0);
    t.apply_two_qubit_gate(SymplecticGate::cnot(), 0, 1);
    return t;
}

}  // namespace

TEST(tracked_tableau, initial_states) {
    TrackedTableau product(InitialStateKind::PureProduct, 4);
    ASSERT_EQ(product.rows(), BitMatrix::from_strings({"01000000", "00010000", "00000100", "00000001"}));
    ASSERT_EQ(product.generator_total(), 4);
    ASSERT_EQ(product.n_reference(), 0);

    TrackedTableau mixed(InitialStateKind::MaximallyMixed, 4);
    ASSERT_EQ(mixed.rows().num_rows(), 0);
    ASSERT_EQ(mixed.generator_total(), 0);
    ASSERT_EQ(joint_entropy_with_apparatus(mixed, Region::sites(0, 2)), 4);

    TrackedTableau bell(InitialStateKind::BellReference, 2);
    ASSERT_EQ(bell.n_reference(), 2);
    ASSERT_EQ(bell.rows().num_rows(), 4);
    ASSERT_EQ(bell.rows().num_cols(), 8);
    ASSERT_EQ(joint_entropy_with_apparatus(bell, Region::sites(0, 1)), 2);
    ASSERT_EQ(joint_entropy_with_apparatus(bell, Region::sites(0, 2)), 0);
}

TEST(tracked_tableau, rejects_bad_sizes) {
    ASSERT_THROW(TrackedTableau(InitialStateKind::PureProduct, 0), std::invalid_argument);
    ASSERT_THROW(TrackedTableau(InitialStateKind::PureProduct, 3), std::invalid_argument);
}

TEST(tracked_tableau, initial_state_names) {
    for (auto kind : {InitialStateKind::PureProduct, InitialStateKind::MaximallyMixed, InitialStateKind::BellReference}) {
        ASSERT_EQ(parse_initial_state(initial_state_name(kind)), kind);
    }
    ASSERT_THROW(parse_initial_state("pure"), std::invalid_argument);
}

TEST(tracked_tableau, cnot_on_product) {
    TrackedTableau t(InitialStateKind::PureProduct, 2);
    t.apply_two_qubit_gate(SymplecticGate::cnot(), 0, 1);
    ASSERT_EQ(t.rows(), BitMatrix::from_strings({"0100", "0101"}));
}

TEST(tracked_tableau, swap_twice_is_identity) {
    TrackedTableau t(InitialStateKind::PureProduct, 4);
    apply_one(t, hadamard_like(), 1);
    t.apply_two_qubit_gate(SymplecticGate::cnot(), 1, 2);
    std::string before = t.dump();
    t.apply_two_qubit_gate(SymplecticGate::swap(), 0, 1);
    ASSERT_NE(t.dump(), before);
    t.apply_two_qubit_gate(SymplecticGate::swap(), 0, 1);
    ASSERT_EQ(t.dump(), before);
}

TEST(tracked_tableau, gates_only_touch_the_system) {
    TrackedTableau t(InitialStateKind::BellReference, 4);
    ASSERT_THROW(t.apply_two_qubit_gate(SymplecticGate::cnot(), 0, 4), std::invalid_argument);
    ASSERT_THROW(t.apply_two_qubit_gate(SymplecticGate::cnot(), 1, 1), std::invalid_argument);
    ASSERT_THROW(t.transduce_site(2), std::invalid_argument);
}

TEST(tracked_tableau, gates_keep_system_entropy) {
    std::mt19937_64 rng(3);
    TrackedTableau t(InitialStateKind::BellReference, 8);
    Region system = Region::sites(0, 4);
    for (int k = 0; k < 50; k++) {
        std::size_t q1 = rng() % 8;
        std::size_t q2 = (q1 + 1 + rng() % 7) % 8;
        t.apply_two_qubit_gate(sample_two_qubit_clifford(rng), q1, q2);
        ASSERT_EQ(joint_entropy_with_apparatus(t, system), 8);
        ASSERT_EQ(rank(t.rows()), 16);
    }
}

TEST(tracked_tableau, transduce_fresh_product_site) {
    TrackedTableau t(InitialStateKind::PureProduct, 2);
    t.transduce_site(0);
    t.compact();
    ASSERT_EQ(t.rows(), BitMatrix::from_strings({"0100", "0001"}));
    ASSERT_EQ(t.ignored_count(), 1);
    ASSERT_EQ(t.n_apparatus(), 1);
    ASSERT_EQ(t.n_environment(), 1);
    ASSERT_EQ(t.generator_total(), 3);
    ASSERT_EQ(joint_entropy_with_apparatus(t, Region::sites(0, 1)), 0);
    ASSERT_EQ(joint_entropy_with_apparatus(t, Region()), 0);
}

TEST(tracked_tableau, transduce_bell_pair_site) {
    TrackedTableau t = bell_pair_on_site_zero();
    ASSERT_EQ(t.rows(), BitMatrix::from_strings({"1010", "0101"}));
    t.transduce_site(0);
    // Both rows touch a and are removed; only the fresh Z_a, Z_b remain.
    ASSERT_EQ(t.rows(), BitMatrix::from_strings({"0100", "0001"}));
    t.compact();
    ASSERT_EQ(t.ignored_count(), 0);
    ASSERT_EQ(t.generator_total(), 2);
    ASSERT_EQ(joint_entropy_with_apparatus(t, Region()), 1);
    ASSERT_EQ(conditional_entropy(t, Region::sites(0, 1)), 0);
}

TEST(tracked_tableau, transduce_twice) {
    TrackedTableau t = bell_pair_on_site_zero();
    t.transduce_site(0);
    t.compact();
    std::size_t ignored = t.ignored_count();
    auto s_a = joint_entropy_with_apparatus(t, Region());
    auto s_sys = conditional_entropy(t, Region::sites(0, 1));
    t.transduce_site(0);
    t.compact();
    ASSERT_EQ(t.n_apparatus(), 2);
    ASSERT_EQ(t.n_environment(), 2);
    ASSERT_EQ(t.ignored_count(), ignored + 1);
    ASSERT_EQ(joint_entropy_with_apparatus(t, Region()), s_a);
    ASSERT_EQ(conditional_entropy(t, Region::sites(0, 1)), s_sys);
}

TEST(tracked_tableau, compact_keeps_independent_rows) {
    TrackedTableau t(InitialStateKind::PureProduct, 4);
    std::string before = t.dump();
    t.compact();
    ASSERT_EQ(t.dump(), before);
}

TEST(tracked_tableau, compact_drops_duplicate_into_ignored) {
    TrackedTableau t(InitialStateKind::PureProduct, 4);
    // Z_b0 -> Z_a1 Z_b0; moving b0 into the apparatus leaves Z_a1 twice.
    t.apply_two_qubit_gate(SymplecticGate::cnot(), 2, 1);
    t.transduce_site(0);
    ASSERT_EQ(t.rows().num_rows(), 5);
    ASSERT_EQ(t.ignored_count(), 0);
    t.compact();
    ASSERT_EQ(t.rows().num_rows(), 4);
    ASSERT_EQ(t.ignored_count(), 1);
    ASSERT_EQ(t.generator_total(), 5);
}

TEST(tracked_tableau, compact_preserves_entropies) {
    CircuitConfig config;
    config.L = 6;
    config.p = 0.3;
    config.initial_state = InitialStateKind::BellReference;
    std::mt19937_64 regions(4);
    for (std::uint64_t seed = 0; seed < 10; seed++) {
        TrackedTableau t(config.initial_state, 2 * config.L);
        CircuitSampler sampler(config, seed);
        for (int layer = 0; layer < 12; layer++) {
            apply_layer(t, sampler.next_layer());
            std::vector<Region> probes{Region(), Region::sites(0, 6)};
            for (int k = 0; k < 10; k++) {
                std::vector<std::size_t> qubits;
                for (std::size_t q = 0; q < t.num_tracked_qubits(); q++) {
                    if (regions() & 1) {
                        qubits.push_back(q);
                    }
                }
                probes.emplace_back(qubits);
            }
            std::vector<std::size_t> joint_before;
            std::vector<std::int64_t> cond_before;
            for (const auto &r : probes) {
                joint_before.push_back(joint_entropy_with_apparatus(t, r));
                cond_before.push_back(conditional_entropy(t, r));
            }
            std::size_t total = t.generator_total();
            t.compact();
            ASSERT_EQ(t.generator_total(), total);
            ASSERT_EQ(rank(t.rows()), t.rows().num_rows());
            ASSERT_LE(t.rows().num_rows(), 2 * t.num_tracked_qubits());
            ASSERT_LE(t.generator_total(), t.num_tracked_qubits() + t.n_apparatus());
            ASSERT_EQ(t.n_apparatus(), t.n_environment());
            for (std::size_t k = 0; k < probes.size(); k++) {
                ASSERT_EQ(joint_entropy_with_apparatus(t, probes[k]), joint_before[k]);
                ASSERT_EQ(conditional_entropy(t, probes[k]), cond_before[k]);
            }
        }
    }
}

TEST(tracked_tableau, transduction_changes_generator_count_by_pivots) {
    CircuitConfig config;
    config.L = 8;
    config.p = 0.0;
    std::mt19937_64 rng(5);
    TrackedTableau t(InitialStateKind::PureProduct, 16);
    CircuitSampler sampler(config, 1);
    for (int layer = 0; layer < 20; layer++) {
        apply_layer(t, sampler.next_layer());
        t.compact();
        std::size_t site = rng() % 8;
        BitMatrix probe = t.rows();
        probe.zero_columns(ColumnWindow{2 * site + 1}.column_mask(probe.num_cols()));
        std::size_t pivots = rank(probe, ColumnWindow{2 * site});
        std::size_t before = t.generator_total();
        t.transduce_site(site);
        ASSERT_EQ(t.generator_total(), before - pivots + 2);
    }
}

TEST(tracked_tableau, dump_format) {
    TrackedTableau t(InitialStateKind::PureProduct, 2);
    t.transduce_site(0);
    t.compact();
    ASSERT_EQ(t.dump(), "K=2 M=3 rows=2 ignored=1 n_apparatus=1 n_environment=1\n0100\n0001\n");
}
