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

#ifndef QDC_FULL_TABLEAU_H
#define QDC_FULL_TABLEAU_H

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qdc/circuit.h"
#include "qdc/gf2.h"
#include "qdc/observables.h"
#include "qdc/tracked_tableau.h"

namespace qdc {

enum class QubitRole {
    System,
    Reference,
    Apparatus,
    Environment,
};

inline constexpr std::size_t kDefaultQubitCap = 2000;

/// Brute-force stabilizer state that keeps every apparatus and environment qubit.
///
/// Qubits are numbered system first, then reference (if any), then one
/// (apparatus, environment) pair per transduction in event order. Nothing is ever
/// traced out, so any region entropy is available.
class FullTableau {
   public:
    FullTableau(InitialStateKind kind, std::size_t n_system, std::size_t qubit_cap = kDefaultQubitCap);

    InitialStateKind kind() const {
        return kind_;
    }
    std::size_t n_system() const {
        return n_system_;
    }
    std::size_t n_sites() const {
        return n_system_ / 2;
    }
    std::size_t n_reference() const {
        return n_reference_;
    }
    std::size_t num_qubits() const {
        return roles_.size();
    }
    std::size_t qubit_cap() const {
        return qubit_cap_;
    }
    const std::vector<QubitRole> &roles() const {
        return roles_;
    }
    const BitMatrix &rows() const {
        return rows_;
    }
    std::size_t n_apparatus() const;
    std::size_t n_environment() const;

    Region qubits_with_role(QubitRole role) const;
    Region all_qubits() const;

    void apply_gate(const SymplecticGate &gate, std::span<const std::size_t> qubits);

    /// Appends a fresh |0> apparatus qubit and a fresh |0> environment qubit, then
    /// swaps b with the apparatus qubit and a with the environment qubit.
    ///
    /// Throws std::length_error when the qubit cap would be exceeded.
    void transduce_site(std::size_t site);

    /// S(R) = |R| - (M - rank of the rows restricted to the complement of R).
    std::size_t entropy(const Region &region) const;

    /// S(R) computed by tracing out the complement of R explicitly with
    /// row_reduce_window and counting the surviving generators.
    std::size_t entropy_by_tracing(const Region &region) const;

   private:
    std::size_t add_fresh_qubit(QubitRole role);

    InitialStateKind kind_;
    std::size_t n_system_;
    std::size_t n_reference_;
    std::size_t qubit_cap_;
    std::vector<QubitRole> roles_;
    BitMatrix rows_;
};

/// Fast repeated queries of S(P u C) for a fixed conditioning set C (all apparatus or
/// all environment qubits) and variable P inside system u reference.
///
/// The other one of apparatus/environment is eliminated once up front; each query is
/// then a rank over at most 2 |system u reference| columns.
class ConditionedEntropies {
   public:
    ConditionedEntropies(const FullTableau &state, QubitRole conditioning);

    /// S(P u C).
    std::size_t joint(const Region &p) const;
    /// S(P | C) = S(P u C) - S(C).
    std::int64_t conditional(const Region &p) const;

   private:
    std::size_t n_variable_;
    std::size_t n_conditioning_;
    std::size_t generators_;
    std::size_t rank_fixed_;
    std::size_t empty_joint_;
    BitMatrix remainder_;
};

/// The same named observables as evaluate_observables, computed from explicit
/// apparatus entropies.
ObservableValues evaluate_observables_full(const FullTableau &state, const ObservableSet &set);
ObservableValues evaluate_observables_full(
    const FullTableau &state, const ConditionedEntropies &given_apparatus, const ObservableSet &set);

/// Replays the seeded circuit of `config` on a FullTableau and calls `on_snapshot`
/// at every layer the config schedules.
void evolve_full(
    const CircuitConfig &config, std::uint64_t trajectory_index,
    const std::function<void(std::size_t layer, const FullTableau &state)> &on_snapshot,
    std::size_t qubit_cap = kDefaultQubitCap);

/// evolve_full with the config's observables recorded at each snapshot.
TrajectoryRecord oracle_trajectory(
    const CircuitConfig &config, std::uint64_t trajectory_index, std::size_t qubit_cap = kDefaultQubitCap);

struct SymmetryViolation {
    std::size_t layer = 0;
    std::string region;
    std::int64_t lhs = 0;
    std::int64_t rhs = 0;
};

struct SymmetryReport {
    std::size_t checks = 0;
    std::vector<SymmetryViolation> violations;

    void merge(const SymmetryReport &other);
};

/// Random site-aligned regions: each system site (and, with a reference, each
/// reference site) is included with probability 1/2.
Region random_site_region(const FullTableau &state, std::mt19937_64 &rng);

/// Checks S(P u A) = S(P u E) for P = {} and `trials` random site-aligned regions.
SymmetryReport check_ie_symmetry(
    const FullTableau &state, std::size_t trials, std::mt19937_64 &rng, std::size_t layer = 0);
SymmetryReport check_ie_symmetry(
    const FullTableau &state, const ConditionedEntropies &with_apparatus,
    const ConditionedEntropies &with_environment, std::size_t trials, std::mt19937_64 &rng, std::size_t layer = 0);

/// Checks S(P_S, P_S'; A) = S(P_S^c, P_S'^c; A) for P = full system and `trials`
/// random site-aligned regions. Requires a BellReference state.
SymmetryReport check_complement_symmetry(
    const FullTableau &state, std::size_t trials, std::mt19937_64 &rng, std::size_t layer = 0);
SymmetryReport check_complement_symmetry(
    const FullTableau &state, const ConditionedEntropies &with_apparatus, std::size_t trials, std::mt19937_64 &rng,
    std::size_t layer = 0);

}  // namespace qdc

#endif
