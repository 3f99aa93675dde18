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

#ifndef QDC_TRACKED_TABLEAU_H
#define QDC_TRACKED_TABLEAU_H

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "qdc/gf2.h"

namespace qdc {

enum class InitialStateKind {
    PureProduct,
    MaximallyMixed,
    BellReference,
};

/// "product", "mixed" or "bell".
std::string_view initial_state_name(InitialStateKind kind);
InitialStateKind parse_initial_state(std::string_view name);

/// Stabilizer state of system (and optional reference) qubits coupled to an apparatus
/// whose support is never stored.
///
/// Only the restrictions of the generators to the tracked qubits are kept. Generators
/// whose tracked restriction vanished live entirely on the apparatus; they are kept as
/// a count so the total generator number M stays exact.
///
/// Qubit layout: site s owns system qubits a = 2s and b = 2s + 1. With a reference,
/// the reference partner of system qubit q is q + n_system.
class TrackedTableau {
   public:
    TrackedTableau(InitialStateKind kind, std::size_t n_system);

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
    std::size_t num_tracked_qubits() const {
        return n_system_ + n_reference_;
    }
    std::size_t n_apparatus() const {
        return n_apparatus_;
    }
    std::size_t n_environment() const {
        return n_environment_;
    }
    std::size_t ignored_count() const {
        return ignored_count_;
    }
    const BitMatrix &rows() const {
        return rows_;
    }

    /// |tracked rows| + ignored generators.
    std::size_t generator_total() const {
        return rows_.num_rows() + ignored_count_;
    }

    void apply_two_qubit_gate(const SymplecticGate &gate, std::size_t q1, std::size_t q2);

    /// Applies a gate to distinct system qubits. Reference qubits never evolve.
    void apply_gate(const SymplecticGate &gate, std::span<const std::size_t> qubits);

    /// Noisy transduction of one site: b moves into the apparatus, a is discarded
    /// into the environment, and both are replaced by fresh |0> qubits.
    void transduce_site(std::size_t site);

    /// Eliminates over all tracked columns, dropping rows that become zero into the
    /// ignored count.
    void compact();

    /// Text dump: a header line with K, M and the counters, then one bitstring per row.
    std::string dump() const;

   private:
    void check_system_qubit(std::size_t q) const;

    InitialStateKind kind_;
    std::size_t n_system_;
    std::size_t n_reference_;
    std::size_t n_apparatus_ = 0;
    std::size_t n_environment_ = 0;
    std::size_t ignored_count_ = 0;
    BitMatrix rows_;
};

}  // namespace qdc

#endif
