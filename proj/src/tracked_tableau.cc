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

#include <sstream>
#include <stdexcept>

using namespace qdc;

std::string_view qdc::initial_state_name(InitialStateKind kind) {
    switch (kind) {
        case InitialStateKind::PureProduct:
            return "product";
        case InitialStateKind::MaximallyMixed:
            return "mixed";
        case InitialStateKind::BellReference:
            return "bell";
    }
    return "?";
}

InitialStateKind qdc::parse_initial_state(std::string_view name) {
    if (name == "product") {
        return InitialStateKind::PureProduct;
    }
    if (name == "mixed") {
        return InitialStateKind::MaximallyMixed;
    }
    if (name == "bell") {
        return InitialStateKind::BellReference;
    }
    throw std::invalid_argument("unknown initial state '" + std::string(name) + "' (expected product|mixed|bell)");
}

TrackedTableau::TrackedTableau(InitialStateKind kind, std::size_t n_system)
    : kind_(kind),
      n_system_(n_system),
      n_reference_(kind == InitialStateKind::BellReference ? n_system : 0) {
    if (n_system == 0 || n_system % 2 != 0) {
        throw std::invalid_argument("TrackedTableau: n_system must be even and positive");
    }
    std::size_t cols = 2 * num_tracked_qubits();
    rows_ = BitMatrix(0, cols);
    switch (kind) {
        case InitialStateKind::PureProduct:
            for (std::size_t q = 0; q < n_system_; q++) {
                rows_.set(rows_.append_zero_row(), 2 * q + 1, true);
            }
            break;
        case InitialStateKind::MaximallyMixed:
            break;
        case InitialStateKind::BellReference:
            for (std::size_t q = 0; q < n_system_; q++) {
                std::size_t partner = q + n_system_;
                std::size_t xx = rows_.append_zero_row();
                rows_.set(xx, 2 * q, true);
                rows_.set(xx, 2 * partner, true);
                std::size_t zz = rows_.append_zero_row();
                rows_.set(zz, 2 * q + 1, true);
                rows_.set(zz, 2 * partner + 1, true);
            }
            break;
    }
}

void TrackedTableau::check_system_qubit(std::size_t q) const {
    if (q >= n_system_) {
        throw std::invalid_argument(
            "TrackedTableau: qubit " + std::to_string(q) + " is not a system qubit (n_system=" +
            std::to_string(n_system_) + ")");
    }
}

void TrackedTableau::apply_two_qubit_gate(const SymplecticGate &gate, std::size_t q1, std::size_t q2) {
    std::size_t qubits[2] = {q1, q2};
    apply_gate(gate, qubits);
}

void TrackedTableau::apply_gate(const SymplecticGate &gate, std::span<const std::size_t> qubits) {
    for (std::size_t q : qubits) {
        check_system_qubit(q);
    }
    ColumnWindow window(std::vector<std::size_t>(qubits.begin(), qubits.end()));
    if (gate.arity() != window.size()) {
        throw std::invalid_argument("TrackedTableau::apply_gate: gate arity does not match qubit count");
    }
    qdc::apply_gate(rows_, gate, window);
}

void TrackedTableau::transduce_site(std::size_t site) {
    if (site >= n_sites()) {
        throw std::invalid_argument(
            "TrackedTableau::transduce_site: site " + std::to_string(site) + " out of range (L=" +
            std::to_string(n_sites()) + ")");
    }
    std::size_t a = 2 * site;
    std::size_t b = 2 * site + 1;

    // b goes to the apparatus: its support is no longer tracked. Rows that become zero
    // are apparatus-only generators and are counted by the next compact().
    rows_.zero_columns(ColumnWindow{b}.column_mask(rows_.num_cols()));
    n_apparatus_++;

    // a goes to the environment, which is traced out: drop the generators touching it.
    auto pivots = row_reduce_window(rows_, ColumnWindow{a});
    rows_.remove_rows_unordered(std::move(pivots));
    n_environment_++;

    rows_.set(rows_.append_zero_row(), 2 * a + 1, true);
    rows_.set(rows_.append_zero_row(), 2 * b + 1, true);
}

void TrackedTableau::compact() {
    std::size_t before = rows_.num_rows();
    std::size_t r = echelonize(rows_);
    rows_.truncate_rows(r);
    ignored_count_ += before - r;
}

std::string TrackedTableau::dump() const {
    std::ostringstream out;
    out << "K=" << num_tracked_qubits() << " M=" << generator_total() << " rows=" << rows_.num_rows()
        << " ignored=" << ignored_count_ << " n_apparatus=" << n_apparatus_ << " n_environment=" << n_environment_
        << '\n';
    out << rows_.str();
    return out.str();
}
