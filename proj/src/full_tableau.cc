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

#include "qdc/full_tableau.h"

#include <algorithm>
#include <stdexcept>

using namespace qdc;

namespace {

void check_region(const FullTableau &state, const Region &region) {
    if (!region.empty() && region.qubits().back() >= state.num_qubits()) {
        throw std::invalid_argument(
            "region " + region.str() + " exceeds the " + std::to_string(state.num_qubits()) + " oracle qubits");
    }
}

std::vector<Word> mask_of(std::span<const std::size_t> qubits, std::size_t num_cols) {
    std::vector<Word> mask(words_for_bits(num_cols), 0);
    for (std::size_t q : qubits) {
        mask[2 * q / kWordBits] |= Word{3} << (2 * q % kWordBits);
    }
    return mask;
}

}  // namespace

FullTableau::FullTableau(InitialStateKind kind, std::size_t n_system, std::size_t qubit_cap)
    : kind_(kind),
      n_system_(n_system),
      n_reference_(kind == InitialStateKind::BellReference ? n_system : 0),
      qubit_cap_(qubit_cap) {
    if (n_system == 0 || n_system % 2 != 0) {
        throw std::invalid_argument("FullTableau: n_system must be even and positive");
    }
    if (n_system_ + n_reference_ > qubit_cap_) {
        throw std::length_error("FullTableau: initial qubits already exceed the qubit cap");
    }
    roles_.assign(n_system_, QubitRole::System);
    roles_.resize(n_system_ + n_reference_, QubitRole::Reference);
    rows_ = BitMatrix(0, 2 * roles_.size());
    if (kind == InitialStateKind::PureProduct) {
        for (std::size_t q = 0; q < n_system_; q++) {
            rows_.set(rows_.append_zero_row(), 2 * q + 1, true);
        }
    } else if (kind == InitialStateKind::BellReference) {
        for (std::size_t q = 0; q < n_system_; q++) {
            std::size_t partner = n_system_ + q;
            std::size_t xx = rows_.append_zero_row();
            rows_.set(xx, 2 * q, true);
            rows_.set(xx, 2 * partner, true);
            std::size_t zz = rows_.append_zero_row();
            rows_.set(zz, 2 * q + 1, true);
            rows_.set(zz, 2 * partner + 1, true);
        }
    }
}

std::size_t FullTableau::n_apparatus() const {
    return static_cast<std::size_t>(std::count(roles_.begin(), roles_.end(), QubitRole::Apparatus));
}

std::size_t FullTableau::n_environment() const {
    return static_cast<std::size_t>(std::count(roles_.begin(), roles_.end(), QubitRole::Environment));
}

Region FullTableau::qubits_with_role(QubitRole role) const {
    std::vector<std::size_t> qubits;
    for (std::size_t q = 0; q < roles_.size(); q++) {
        if (roles_[q] == role) {
            qubits.push_back(q);
        }
    }
    return Region(std::move(qubits));
}

Region FullTableau::all_qubits() const {
    return Region::sites(0, 0).complement(num_qubits());
}

void FullTableau::apply_gate(const SymplecticGate &gate, std::span<const std::size_t> qubits) {
    for (std::size_t q : qubits) {
        if (q >= num_qubits()) {
            throw std::invalid_argument("FullTableau::apply_gate: qubit out of range");
        }
    }
    qdc::apply_gate(rows_, gate, ColumnWindow(std::vector<std::size_t>(qubits.begin(), qubits.end())));
}

std::size_t FullTableau::add_fresh_qubit(QubitRole role) {
    if (num_qubits() + 1 > qubit_cap_) {
        throw std::length_error(
            "FullTableau: qubit cap of " + std::to_string(qubit_cap_) +
            " exceeded; reduce L, T or p, or raise the cap");
    }
    std::size_t q = roles_.size();
    roles_.push_back(role);
    rows_.resize_columns(2 * roles_.size());
    rows_.set(rows_.append_zero_row(), 2 * q + 1, true);
    return q;
}

void FullTableau::transduce_site(std::size_t site) {
    if (site >= n_sites()) {
        throw std::invalid_argument("FullTableau::transduce_site: site out of range");
    }
    if (num_qubits() + 2 > qubit_cap_) {
        throw std::length_error(
            "FullTableau: qubit cap of " + std::to_string(qubit_cap_) +
            " exceeded; reduce L, T or p, or raise the cap");
    }
    std::size_t a = 2 * site;
    std::size_t b = 2 * site + 1;
    std::size_t apparatus = add_fresh_qubit(QubitRole::Apparatus);
    std::size_t environment = add_fresh_qubit(QubitRole::Environment);
    const SymplecticGate swap = SymplecticGate::swap();
    qdc::apply_gate(rows_, swap, ColumnWindow{b, apparatus});
    qdc::apply_gate(rows_, swap, ColumnWindow{a, environment});
}

std::size_t FullTableau::entropy(const Region &region) const {
    check_region(*this, region);
    auto outside = region.complement(num_qubits());
    std::size_t r = rank_masked(rows_, mask_of(outside.qubits(), rows_.num_cols()));
    std::size_t generators = rank(rows_);
    return region.size() - (generators - r);
}

std::size_t FullTableau::entropy_by_tracing(const Region &region) const {
    check_region(*this, region);
    BitMatrix copy = rows_;
    echelonize(copy);
    copy.truncate_rows(rank(rows_));
    auto outside = region.complement(num_qubits());
    std::vector<std::size_t> outside_qubits(outside.qubits().begin(), outside.qubits().end());
    auto pivots = row_reduce_window(copy, ColumnWindow(std::move(outside_qubits)));
    std::size_t survivors = copy.num_rows() - pivots.size();
    return region.size() - survivors;
}

ConditionedEntropies::ConditionedEntropies(const FullTableau &state, QubitRole conditioning) {
    if (conditioning != QubitRole::Apparatus && conditioning != QubitRole::Environment) {
        throw std::invalid_argument("ConditionedEntropies: condition on the apparatus or the environment");
    }
    QubitRole other = conditioning == QubitRole::Apparatus ? QubitRole::Environment : QubitRole::Apparatus;
    n_variable_ = state.n_system() + state.n_reference();
    n_conditioning_ = state.qubits_with_role(conditioning).size();
    generators_ = state.rows().num_rows();

    // Conditioning columns never enter a rank, so they are dropped. Forward elimination
    // on the traced-out side leaves rank_fixed_ independent rows there; the rest vanish
    // on it, so rank over (V \ P) u other = rank_fixed + rank of the rest over V \ P.
    BitMatrix work = state.rows();
    auto other_qubits = state.qubits_with_role(other);
    auto other_mask = mask_of(other_qubits.qubits(), work.num_cols());
    auto keep = other_mask;
    for (std::size_t q = 0; q < n_variable_; q++) {
        keep[2 * q / kWordBits] |= Word{3} << (2 * q % kWordBits);
    }
    for (std::size_t r = 0; r < work.num_rows(); r++) {
        auto row = work.row(r);
        for (std::size_t k = 0; k < row.size(); k++) {
            row[k] &= keep[k];
        }
    }
    rank_fixed_ = eliminate_masked(work, other_mask);
    remainder_ = BitMatrix(0, 2 * n_variable_);
    for (std::size_t r = rank_fixed_; r < work.num_rows(); r++) {
        if (work.row_is_zero(r)) {
            continue;
        }
        std::size_t out = remainder_.append_zero_row();
        auto src = work.row(r);
        auto dst = remainder_.row(out);
        std::copy_n(src.begin(), dst.size(), dst.begin());
        std::size_t tail = (2 * n_variable_) % kWordBits;
        if (tail) {
            dst.back() &= (Word{1} << tail) - 1;
        }
    }
    remainder_.truncate_rows(echelonize(remainder_));
    empty_joint_ = joint(Region());
}

std::size_t ConditionedEntropies::joint(const Region &p) const {
    if (!p.empty() && p.qubits().back() >= n_variable_) {
        throw std::invalid_argument("ConditionedEntropies: region must lie in system u reference");
    }
    auto outside = p.complement(n_variable_);
    std::size_t r = rank_fixed_ + rank_masked(remainder_, mask_of(outside.qubits(), remainder_.num_cols()));
    return p.size() + n_conditioning_ - (generators_ - r);
}

std::int64_t ConditionedEntropies::conditional(const Region &p) const {
    return static_cast<std::int64_t>(joint(p)) - static_cast<std::int64_t>(empty_joint_);
}

ObservableValues qdc::evaluate_observables_full(const FullTableau &state, const ObservableSet &set) {
    return evaluate_observables_full(state, ConditionedEntropies(state, QubitRole::Apparatus), set);
}

ObservableValues qdc::evaluate_observables_full(
    const FullTableau &state, const ConditionedEntropies &given_apparatus, const ObservableSet &set) {
    std::size_t L = state.n_sites();
    ObservableValues out;
    if (set.cond_entropy_quarter) {
        out.emplace_back("cond_entropy_quarter", given_apparatus.conditional(Region::sites(0, L / 4)));
    }
    if (set.I3) {
        if (L % 4 != 0) {
            throw std::invalid_argument("evaluate_observables_full: I3 needs L divisible by 4");
        }
        Region r1 = Region::quarter(L, 1);
        std::int64_t s1 = given_apparatus.conditional(r1);
        std::int64_t s12 = given_apparatus.conditional(r1 | Region::quarter(L, 2));
        std::int64_t s13 = given_apparatus.conditional(r1 | Region::quarter(L, 3));
        out.emplace_back("I3", 4 * s1 - 2 * s12 - s13);
    }
    if (set.coherent_info) {
        Region system = Region::sites(0, L);
        switch (state.kind()) {
            case InitialStateKind::PureProduct:
                throw std::invalid_argument("evaluate_observables_full: coherent_info undefined for product states");
            case InitialStateKind::MaximallyMixed:
                out.emplace_back("coherent_info", given_apparatus.conditional(system));
                break;
            case InitialStateKind::BellReference: {
                Region with_reference = system | Region::reference_sites(state.n_system(), 0, L);
                out.emplace_back(
                    "coherent_info", static_cast<std::int64_t>(given_apparatus.joint(system)) -
                                         static_cast<std::int64_t>(given_apparatus.joint(with_reference)));
                break;
            }
        }
    }
    for (std::size_t x : set.resolved_profile(L)) {
        if (x > L) {
            throw std::invalid_argument("evaluate_observables_full: profile x exceeds L");
        }
        out.emplace_back(profile_name(x), given_apparatus.conditional(Region::sites(0, x)));
    }
    return out;
}

void qdc::evolve_full(
    const CircuitConfig &config, std::uint64_t trajectory_index,
    const std::function<void(std::size_t, const FullTableau &)> &on_snapshot, std::size_t qubit_cap) {
    config.validate();
    FullTableau state(config.initial_state, 2 * config.L, qubit_cap);
    if (config.snapshot_at(0)) {
        on_snapshot(0, state);
    }
    CircuitSampler sampler(config, trajectory_index);
    for (std::size_t layer = 1; layer <= config.layers(); layer++) {
        apply_layer(state, sampler.next_layer());
        if (config.snapshot_at(layer)) {
            on_snapshot(layer, state);
        }
    }
}

TrajectoryRecord qdc::oracle_trajectory(const CircuitConfig &config, std::uint64_t trajectory_index, std::size_t qubit_cap) {
    TrajectoryRecord record;
    record.config = config;
    record.trajectory_index = trajectory_index;
    evolve_full(
        config, trajectory_index,
        [&](std::size_t layer, const FullTableau &state) {
            record.snapshots.push_back({layer, evaluate_observables_full(state, config.observables), 0.0});
            record.transductions = state.n_apparatus();
        },
        qubit_cap);
    return record;
}

void SymmetryReport::merge(const SymmetryReport &other) {
    checks += other.checks;
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

Region qdc::random_site_region(const FullTableau &state, std::mt19937_64 &rng) {
    std::vector<std::size_t> sites;
    std::vector<std::size_t> reference_sites;
    for (std::size_t s = 0; s < state.n_sites(); s++) {
        if (rng() & 1) {
            sites.push_back(s);
        }
    }
    Region region = Region::from_sites(sites);
    if (state.n_reference() > 0) {
        for (std::size_t s = 0; s < state.n_sites(); s++) {
            if (rng() & 1) {
                reference_sites.push_back(s);
            }
        }
        region = region | Region::from_sites(reference_sites, state.n_system());
    }
    return region;
}

SymmetryReport qdc::check_ie_symmetry(
    const FullTableau &state, std::size_t trials, std::mt19937_64 &rng, std::size_t layer) {
    return check_ie_symmetry(
        state, ConditionedEntropies(state, QubitRole::Apparatus), ConditionedEntropies(state, QubitRole::Environment),
        trials, rng, layer);
}

SymmetryReport qdc::check_ie_symmetry(
    const FullTableau &state, const ConditionedEntropies &with_apparatus,
    const ConditionedEntropies &with_environment, std::size_t trials, std::mt19937_64 &rng, std::size_t layer) {
    SymmetryReport report;
    for (std::size_t k = 0; k <= trials; k++) {
        Region p = k == 0 ? Region() : random_site_region(state, rng);
        auto lhs = static_cast<std::int64_t>(with_apparatus.joint(p));
        auto rhs = static_cast<std::int64_t>(with_environment.joint(p));
        report.checks++;
        if (lhs != rhs) {
            report.violations.push_back({layer, p.str(), lhs, rhs});
        }
    }
    return report;
}

SymmetryReport qdc::check_complement_symmetry(
    const FullTableau &state, std::size_t trials, std::mt19937_64 &rng, std::size_t layer) {
    if (state.kind() != InitialStateKind::BellReference) {
        throw std::invalid_argument("check_complement_symmetry: needs a BellReference state");
    }
    return check_complement_symmetry(state, ConditionedEntropies(state, QubitRole::Apparatus), trials, rng, layer);
}

SymmetryReport qdc::check_complement_symmetry(
    const FullTableau &state, const ConditionedEntropies &with_apparatus, std::size_t trials, std::mt19937_64 &rng,
    std::size_t layer) {
    if (state.kind() != InitialStateKind::BellReference) {
        throw std::invalid_argument("check_complement_symmetry: needs a BellReference state");
    }
    std::size_t n_variable = state.n_system() + state.n_reference();
    SymmetryReport report;
    for (std::size_t k = 0; k <= trials; k++) {
        Region p = k == 0 ? Region::sites(0, state.n_sites()) : random_site_region(state, rng);
        Region q = p.complement(n_variable);
        auto lhs = static_cast<std::int64_t>(with_apparatus.joint(p));
        auto rhs = static_cast<std::int64_t>(with_apparatus.joint(q));
        report.checks++;
        if (lhs != rhs) {
            report.violations.push_back({layer, p.str(), lhs, rhs});
        }
    }
    return report;
}
