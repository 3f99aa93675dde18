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

#ifndef QDC_OBSERVABLES_H
#define QDC_OBSERVABLES_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qdc/tracked_tableau.h"

namespace qdc {

/// A sorted set of tracked-qubit indices.
class Region {
   public:
    Region() = default;
    explicit Region(std::vector<std::size_t> qubits);

    /// Both qubits of sites [begin, end).
    static Region sites(std::size_t begin, std::size_t end);
    /// Reference partners of both qubits of sites [begin, end).
    static Region reference_sites(std::size_t n_system, std::size_t begin, std::size_t end);
    /// Both qubits of each listed site, offset by `qubit_offset`.
    static Region from_sites(std::span<const std::size_t> sites, std::size_t qubit_offset = 0);

    /// Quarter n in 1..4 of an L-site chain: sites [(n-1)L/4, nL/4).
    static Region quarter(std::size_t L, std::size_t n);

    Region operator|(const Region &other) const;
    /// Members of [0, universe) not in this region.
    Region complement(std::size_t universe) const;

    std::span<const std::size_t> qubits() const {
        return qubits_;
    }
    std::size_t size() const {
        return qubits_.size();
    }
    bool empty() const {
        return qubits_.empty();
    }
    std::string str() const;

    bool operator==(const Region &other) const = default;

   private:
    std::vector<std::size_t> qubits_;
};

/// S(P u A) in bits.
std::size_t joint_entropy_with_apparatus(const TrackedTableau &t, const Region &p);

/// S(P | A) = S(P u A) - S(A) in bits. Signed: only IE-symmetric dynamics guarantee
/// it is nonnegative.
std::int64_t conditional_entropy(const TrackedTableau &t, const Region &p);

/// 4 S(R1|A) - 2 S(R1 u R2|A) - S(R1 u R3|A) over the four site quarters.
std::int64_t tripartite_I3(const TrackedTableau &t);

/// Channel capacity from the initial system state to the final system and apparatus.
/// Requires a MaximallyMixed or BellReference initial state.
std::int64_t coherent_information(const TrackedTableau &t);

/// (x, S(P_x | A)) where P_x holds sites 0..x-1.
std::vector<std::pair<std::size_t, std::int64_t>> entropy_profile(
    const TrackedTableau &t, std::span<const std::size_t> xs);

/// Which named observables to evaluate at a snapshot.
///
/// Names: "cond_entropy_quarter", "I3", "coherent_info", "profile:x" (one per x),
/// "profile" (every x in 0..L).
struct ObservableSet {
    bool cond_entropy_quarter = false;
    bool I3 = false;
    bool coherent_info = false;
    bool full_profile = false;
    std::vector<std::size_t> profile_xs;

    /// Comma-separated list of names.
    static ObservableSet parse(std::string_view spec);
    std::string str() const;

    /// The concrete profile x values for a chain of L sites.
    std::vector<std::size_t> resolved_profile(std::size_t L) const;

    bool operator==(const ObservableSet &other) const = default;
};

using ObservableValues = std::vector<std::pair<std::string, std::int64_t>>;

std::string profile_name(std::size_t x);

/// Evaluates the requested observables in a fixed order: cond_entropy_quarter, I3,
/// coherent_info, then profile entries in ascending x.
ObservableValues evaluate_observables(const TrackedTableau &t, const ObservableSet &set);

}  // namespace qdc

#endif
