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

#include "qdc/observables.h"

#include <algorithm>
#include <charconv>
#include <stdexcept>

using namespace qdc;

namespace {

void check_region(const TrackedTableau &t, const Region &p) {
    if (!p.empty() && p.qubits().back() >= t.num_tracked_qubits()) {
        throw std::invalid_argument(
            "region " + p.str() + " exceeds the " + std::to_string(t.num_tracked_qubits()) + " tracked qubits");
    }
}

// Mask of the tracked columns outside p.
std::vector<Word> complement_mask(const TrackedTableau &t, const Region &p) {
    std::size_t cols = t.rows().num_cols();
    auto mask = ColumnWindow::range(0, t.num_tracked_qubits()).column_mask(cols);
    for (std::size_t q : p.qubits()) {
        mask[2 * q / kWordBits] &= ~(Word{3} << (2 * q % kWordBits));
    }
    return mask;
}

std::size_t rank_outside(const TrackedTableau &t, const Region &p) {
    return rank_masked(t.rows(), complement_mask(t, p));
}

std::size_t parse_count(std::string_view text, std::string_view context) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw std::invalid_argument("bad number '" + std::string(text) + "' in " + std::string(context));
    }
    return value;
}

}  // namespace

Region::Region(std::vector<std::size_t> qubits) : qubits_(std::move(qubits)) {
    std::sort(qubits_.begin(), qubits_.end());
    qubits_.erase(std::unique(qubits_.begin(), qubits_.end()), qubits_.end());
}

Region Region::sites(std::size_t begin, std::size_t end) {
    std::vector<std::size_t> qubits;
    for (std::size_t s = begin; s < end; s++) {
        qubits.push_back(2 * s);
        qubits.push_back(2 * s + 1);
    }
    return Region(std::move(qubits));
}

Region Region::reference_sites(std::size_t n_system, std::size_t begin, std::size_t end) {
    std::vector<std::size_t> qubits;
    for (std::size_t s = begin; s < end; s++) {
        qubits.push_back(n_system + 2 * s);
        qubits.push_back(n_system + 2 * s + 1);
    }
    return Region(std::move(qubits));
}

Region Region::from_sites(std::span<const std::size_t> sites, std::size_t qubit_offset) {
    std::vector<std::size_t> qubits;
    for (std::size_t s : sites) {
        qubits.push_back(qubit_offset + 2 * s);
        qubits.push_back(qubit_offset + 2 * s + 1);
    }
    return Region(std::move(qubits));
}

Region Region::quarter(std::size_t L, std::size_t n) {
    if (L % 4 != 0 || n < 1 || n > 4) {
        throw std::invalid_argument("Region::quarter: need L divisible by 4 and n in 1..4");
    }
    return sites((n - 1) * L / 4, n * L / 4);
}

Region Region::operator|(const Region &other) const {
    std::vector<std::size_t> merged;
    std::set_union(
        qubits_.begin(), qubits_.end(), other.qubits_.begin(), other.qubits_.end(), std::back_inserter(merged));
    return Region(std::move(merged));
}

Region Region::complement(std::size_t universe) const {
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (std::size_t q = 0; q < universe; q++) {
        while (k < qubits_.size() && qubits_[k] < q) {
            k++;
        }
        if (k == qubits_.size() || qubits_[k] != q) {
            out.push_back(q);
        }
    }
    return Region(std::move(out));
}

std::string Region::str() const {
    std::string out = "{";
    for (std::size_t k = 0; k < qubits_.size(); k++) {
        if (k) {
            out += ',';
        }
        out += std::to_string(qubits_[k]);
    }
    return out + "}";
}

std::size_t qdc::joint_entropy_with_apparatus(const TrackedTableau &t, const Region &p) {
    check_region(t, p);
    // Generators supported on P u A are the kernel of the restriction to the tracked
    // qubits outside P; apparatus-only generators are inside generator_total().
    std::size_t supported = t.generator_total() - rank_outside(t, p);
    return p.size() + t.n_apparatus() - supported;
}

std::int64_t qdc::conditional_entropy(const TrackedTableau &t, const Region &p) {
    check_region(t, p);
    auto full = static_cast<std::int64_t>(rank(t.rows()));
    return static_cast<std::int64_t>(p.size() + rank_outside(t, p)) - full;
}

std::int64_t qdc::tripartite_I3(const TrackedTableau &t) {
    std::size_t L = t.n_sites();
    if (L % 4 != 0) {
        throw std::invalid_argument("tripartite_I3: L=" + std::to_string(L) + " is not divisible by 4");
    }
    Region r1 = Region::quarter(L, 1);
    std::int64_t s1 = conditional_entropy(t, r1);
    std::int64_t s12 = conditional_entropy(t, r1 | Region::quarter(L, 2));
    std::int64_t s13 = conditional_entropy(t, r1 | Region::quarter(L, 3));
    return 4 * s1 - 2 * s12 - s13;
}

std::int64_t qdc::coherent_information(const TrackedTableau &t) {
    switch (t.kind()) {
        case InitialStateKind::PureProduct:
            throw std::invalid_argument("coherent_information: undefined for a pure product initial state");
        case InitialStateKind::MaximallyMixed:
            return static_cast<std::int64_t>(t.n_system()) - static_cast<std::int64_t>(rank(t.rows()));
        case InitialStateKind::BellReference: {
            Region system = Region::sites(0, t.n_sites());
            Region everything = Region::sites(0, t.num_tracked_qubits() / 2);
            return static_cast<std::int64_t>(joint_entropy_with_apparatus(t, system)) -
                   static_cast<std::int64_t>(joint_entropy_with_apparatus(t, everything));
        }
    }
    return 0;
}

std::vector<std::pair<std::size_t, std::int64_t>> qdc::entropy_profile(
    const TrackedTableau &t, std::span<const std::size_t> xs) {
    auto full = static_cast<std::int64_t>(rank(t.rows()));
    std::vector<std::pair<std::size_t, std::int64_t>> out;
    for (std::size_t x : xs) {
        if (x > t.n_sites()) {
            throw std::invalid_argument(
                "entropy_profile: x=" + std::to_string(x) + " exceeds L=" + std::to_string(t.n_sites()));
        }
        Region p = Region::sites(0, x);
        out.emplace_back(x, static_cast<std::int64_t>(p.size() + rank_outside(t, p)) - full);
    }
    return out;
}

ObservableSet ObservableSet::parse(std::string_view spec) {
    ObservableSet set;
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t end = spec.find(',', start);
        if (end == std::string_view::npos) {
            end = spec.size();
        }
        std::string_view name = spec.substr(start, end - start);
        while (!name.empty() && name.front() == ' ') {
            name.remove_prefix(1);
        }
        while (!name.empty() && name.back() == ' ') {
            name.remove_suffix(1);
        }
        if (name == "cond_entropy_quarter") {
            set.cond_entropy_quarter = true;
        } else if (name == "I3") {
            set.I3 = true;
        } else if (name == "coherent_info") {
            set.coherent_info = true;
        } else if (name == "profile") {
            set.full_profile = true;
        } else if (name.starts_with("profile:")) {
            set.profile_xs.push_back(parse_count(name.substr(8), "observable list"));
        } else if (!name.empty()) {
            throw std::invalid_argument("unknown observable '" + std::string(name) + "'");
        }
        start = end + 1;
    }
    std::sort(set.profile_xs.begin(), set.profile_xs.end());
    set.profile_xs.erase(std::unique(set.profile_xs.begin(), set.profile_xs.end()), set.profile_xs.end());
    return set;
}

std::string ObservableSet::str() const {
    std::vector<std::string> names;
    if (cond_entropy_quarter) {
        names.emplace_back("cond_entropy_quarter");
    }
    if (I3) {
        names.emplace_back("I3");
    }
    if (coherent_info) {
        names.emplace_back("coherent_info");
    }
    if (full_profile) {
        names.emplace_back("profile");
    }
    for (std::size_t x : profile_xs) {
        names.push_back(profile_name(x));
    }
    std::string out;
    for (std::size_t k = 0; k < names.size(); k++) {
        out += (k ? "," : "") + names[k];
    }
    return out;
}

std::vector<std::size_t> ObservableSet::resolved_profile(std::size_t L) const {
    if (full_profile) {
        std::vector<std::size_t> all;
        for (std::size_t x = 0; x <= L; x++) {
            all.push_back(x);
        }
        return all;
    }
    return profile_xs;
}

std::string qdc::profile_name(std::size_t x) {
    return "profile:" + std::to_string(x);
}

ObservableValues qdc::evaluate_observables(const TrackedTableau &t, const ObservableSet &set) {
    ObservableValues out;
    std::size_t L = t.n_sites();
    if (set.cond_entropy_quarter) {
        out.emplace_back("cond_entropy_quarter", conditional_entropy(t, Region::sites(0, L / 4)));
    }
    if (set.I3) {
        out.emplace_back("I3", tripartite_I3(t));
    }
    if (set.coherent_info) {
        out.emplace_back("coherent_info", coherent_information(t));
    }
    auto xs = set.resolved_profile(L);
    for (auto [x, s] : entropy_profile(t, xs)) {
        out.emplace_back(profile_name(x), s);
    }
    return out;
}
