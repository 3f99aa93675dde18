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


#include "qdc/gf2.h"

#include <array>
#include <random>
#include <set>

#include "gtest/gtest.h"

using namespace qdc;

namespace {

BitMatrix random_matrix(std::mt19937_64 &rng, std::size_t rows, std::size_t cols) {
    BitMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; r++) {
        for (std::size_t c = 0; c < cols; c++) {
            m.set(r, c, rng() & 1);
        }
    }
    return m;
}

// Every XOR combination of the rows, restricted to `cols`, as bitstrings.
std::set<std::vector<bool>> span_of(const BitMatrix &m, const std::vector<std::size_t> &cols) {
    std::set<std::vector<bool>> out;
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << m.num_rows()); subset++) {
        std::vector<bool> v(cols.size(), false);
        for (std::size_t r = 0; r < m.num_rows(); r++) {
            if ((subset >> r) & 1) {
                for (std::size_t k = 0; k < cols.size(); k++) {
                    v[k] = v[k] ^ m.get(r, cols[k]);
                }
            }
        }
        out.insert(v);
    }
    return out;
}

std::vector<std::size_t> all_columns(std::size_t n) {
    std::vector<std::size_t> cols(n);
    for (std::size_t c = 0; c < n; c++) {
        cols[c] = c;
    }
    return cols;
}

std::size_t brute_force_rank(const BitMatrix &m, const std::vector<std::size_t> &cols) {
    std::size_t size = span_of(m, cols).size();
    std::size_t r = 0;
    while ((std::size_t{1} << r) < size) {
        r++;
    }
    return r;
}

std::vector<std::size_t> window_columns(const ColumnWindow &w) {
    std::vector<std::size_t> cols;
    for (std::size_t q : w.qubits()) {
        cols.push_back(2 * q);
        cols.push_back(2 * q + 1);
    }
    return cols;
}

// Random element of the Clifford group generated by single-qubit maps and CNOTs.
SymplecticGate random_gate(std::mt19937_64 &rng, std::size_t arity) {
    const auto &singles = single_qubit_symplectics();
    SymplecticGate g(arity);
    for (int step = 0; step < 24; step++) {
        std::size_t a = rng() % arity;
        std::array<std::size_t, 1> one{a};
        g = g.then(singles[rng() % singles.size()].embed(arity, one));
        if (arity > 1) {
            std::size_t b = (a + 1 + rng() % (arity - 1)) % arity;
            std::array<std::size_t, 2> pair{a, b};
            g = g.then(SymplecticGate::cnot().embed(arity, pair));
        }
    }
    return g;
}

}  // namespace

TEST(bit_row, string_round_trip) {
    auto r = BitRow::from_string("0110010");
    ASSERT_EQ(r.size(), 7);
    ASSERT_EQ(r.str(), "0110010");
    ASSERT_TRUE(r.get(1));
    ASSERT_FALSE(r.get(0));
    ASSERT_EQ(r.popcount(), 3);
    ASSERT_THROW(BitRow::from_string("01x"), std::invalid_argument);
    ASSERT_THROW(r.get(7), std::out_of_range);
}

TEST(bit_row, xor_is_entrywise) {
    auto a = BitRow::from_string("1100");
    a ^= BitRow::from_string("0110");
    ASSERT_EQ(a, BitRow::from_string("1010"));
    a ^= a;
    ASSERT_TRUE(a.is_zero());
}

TEST(bit_matrix, tail_bits_stay_zero_across_resizes) {
    BitMatrix m = BitMatrix::from_strings({"1111", "0101"});
    m.resize_columns(130);
    ASSERT_EQ(m.num_cols(), 130);
    ASSERT_EQ(m.row_copy(0).popcount(), 4);
    m.set(1, 129, true);
    m.resize_columns(6);
    ASSERT_EQ(m.row_copy(1).str(), "010100");
    ASSERT_EQ(m.row(1)[0], 0b1010u);
}

TEST(bit_matrix, remove_rows_keeps_order) {
    BitMatrix m = BitMatrix::from_strings({"1000", "0100", "0010", "0001"});
    m.remove_rows({1, 3});
    ASSERT_EQ(m, BitMatrix::from_strings({"1000", "0010"}));
}

TEST(bit_matrix, remove_rows_unordered_keeps_the_set) {
    BitMatrix m = BitMatrix::from_strings({"1000", "0100", "0010", "0001", "1111"});
    m.remove_rows_unordered({0, 3});
    std::set<std::string> rows;
    for (const auto &r : m.to_rows()) {
        rows.insert(r.str());
    }
    ASSERT_EQ(rows, (std::set<std::string>{"0100", "0010", "1111"}));
}

TEST(bit_matrix, zero_columns) {
    BitMatrix m = BitMatrix::from_strings({"1111", "1011"});
    m.zero_columns(ColumnWindow{1}.column_mask(4));
    ASSERT_EQ(m, BitMatrix::from_strings({"1100", "1000"}));
}

TEST(column_window, rejects_duplicates_and_out_of_range) {
    ASSERT_THROW(ColumnWindow({1, 1}), std::invalid_argument);
    ASSERT_THROW(ColumnWindow{3}.column_mask(6), std::out_of_range);
    ASSERT_EQ(ColumnWindow::range(2, 5).size(), 3);
}

TEST(rank, identity) {
    BitMatrix m = BitMatrix::from_strings({"1000", "0100", "0010", "0001"});
    ASSERT_EQ(rank(m), 4);
    ASSERT_EQ(rank(m, ColumnWindow{0, 1}), 4);
}

TEST(rank, dependent_third_row) {
    BitMatrix m = BitMatrix::from_strings({"1100", "0110", "1010"});
    ASSERT_EQ(rank(m, ColumnWindow{0, 1}), 2);
    ASSERT_EQ(rank(m), 2);
}

TEST(rank, does_not_modify_input) {
    BitMatrix m = BitMatrix::from_strings({"1100", "0110", "1010"});
    BitMatrix copy = m;
    (void)rank(m, ColumnWindow{1});
    ASSERT_EQ(m, copy);
}

TEST(rank, window_out_of_range) {
    BitMatrix m = BitMatrix::from_strings({"1100"});
    ASSERT_THROW(rank(m, ColumnWindow{2}), std::out_of_range);
}

TEST(rank, matches_span_enumeration) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; trial++) {
        BitMatrix m = random_matrix(rng, 8, 8);
        ASSERT_EQ(rank(m), brute_force_rank(m, all_columns(8)));
        ColumnWindow w{1, 3};
        ASSERT_EQ(rank(m, w), brute_force_rank(m, window_columns(w)));
    }
}

TEST(rank, wide_matrices_match_span_enumeration) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; trial++) {
        BitMatrix m = random_matrix(rng, 10, 200);
        ColumnWindow w{0, 31, 32, 33, 99};
        ASSERT_EQ(rank(m), brute_force_rank(m, all_columns(200)));
        ASSERT_EQ(rank(m, w), brute_force_rank(m, window_columns(w)));
    }
}

TEST(row_reduce_window, already_reduced) {
    BitMatrix m = BitMatrix::from_strings({"0100", "0001"});
    auto pivots = row_reduce_window(m, ColumnWindow{0});
    ASSERT_EQ(pivots, std::vector<std::size_t>{0});
    ASSERT_EQ(m, BitMatrix::from_strings({"0100", "0001"}));
}

TEST(row_reduce_window, clears_shared_x) {
    BitMatrix m = BitMatrix::from_strings({"1010", "1001"});
    auto pivots = row_reduce_window(m, ColumnWindow{0});
    ASSERT_EQ(pivots.size(), 1);
    std::size_t other = 1 - pivots[0];
    ASSERT_EQ(m.row_copy(other).str(), "0011");
}

TEST(row_reduce_window, preserves_span_and_isolates_pivots) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; trial++) {
        BitMatrix m = random_matrix(rng, 12, 10);
        BitMatrix before = m;
        ColumnWindow w{1, 4};
        std::size_t expected_rank = rank(m, w);
        auto pivots = row_reduce_window(m, w);
        ASSERT_EQ(span_of(m, all_columns(10)), span_of(before, all_columns(10)));
        ASSERT_EQ(pivots.size(), expected_rank);
        ASSERT_LE(pivots.size(), w.num_columns());
        std::set<std::size_t> pivot_set(pivots.begin(), pivots.end());
        auto cols = window_columns(w);
        for (std::size_t r = 0; r < m.num_rows(); r++) {
            if (pivot_set.count(r) == 0) {
                for (std::size_t c : cols) {
                    ASSERT_FALSE(m.get(r, c));
                }
            }
        }
        BitMatrix only_pivots(0, 10);
        for (std::size_t r : pivots) {
            only_pivots.append_row(m.row_copy(r));
        }
        ASSERT_EQ(rank(only_pivots, w), pivots.size());
        ASSERT_EQ(rank(m), rank(before));
    }
}

TEST(eliminate_masked, zeroes_tail_on_mask_and_preserves_span) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 30; trial++) {
        BitMatrix m = random_matrix(rng, 11, 70);
        BitMatrix before = m;
        ColumnWindow w{3, 0, 31};
        auto mask = w.column_mask(m.num_cols());
        std::size_t r = eliminate_masked(m, mask);
        ASSERT_EQ(r, rank(before, w));
        ASSERT_EQ(rank(m, w), r);
        for (std::size_t k = r; k < m.num_rows(); k++) {
            for (std::size_t c : window_columns(w)) {
                ASSERT_FALSE(m.get(k, c));
            }
        }
        ASSERT_EQ(rank(m), rank(before));
        BitMatrix both = before;
        for (std::size_t k = 0; k < m.num_rows(); k++) {
            both.append_row(m.row_copy(k));
        }
        ASSERT_EQ(rank(both), rank(before));
    }
}

TEST(row_reduce_window, idempotent) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; trial++) {
        BitMatrix m = random_matrix(rng, 9, 12);
        ColumnWindow w{0, 2, 5};
        auto first = row_reduce_window(m, w);
        BitMatrix once = m;
        auto second = row_reduce_window(m, w);
        ASSERT_EQ(m, once);
        ASSERT_EQ(first, second);
    }
}

TEST(echelonize, returns_rank_and_zero_tail) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; trial++) {
        BitMatrix m = random_matrix(rng, 10, 6);
        BitMatrix before = m;
        std::size_t r = echelonize(m);
        ASSERT_EQ(r, rank(before));
        for (std::size_t k = r; k < m.num_rows(); k++) {
            ASSERT_TRUE(m.row_is_zero(k));
        }
        ASSERT_EQ(span_of(m, all_columns(6)), span_of(before, all_columns(6)));
    }
}

TEST(symplectic_gate, cnot_convention) {
    BitMatrix m = BitMatrix::from_strings({"1000", "0001", "0100", "0010"});
    apply_gate(m, SymplecticGate::cnot(), ColumnWindow{0, 1});
    // X_c -> X_c X_t, Z_t -> Z_c Z_t, Z_c and X_t are fixed.
    ASSERT_EQ(m, BitMatrix::from_strings({"1010", "0101", "0100", "0010"}));
}

TEST(symplectic_gate, swap_exchanges_qubits) {
    BitMatrix m = BitMatrix::from_strings({"1001"});
    apply_gate(m, SymplecticGate::swap(), ColumnWindow{0, 1});
    ASSERT_EQ(m.row_copy(0).str(), "0110");
}

TEST(symplectic_gate, window_order_picks_control) {
    BitMatrix m = BitMatrix::from_strings({"001000"});
    apply_gate(m, SymplecticGate::cnot(), ColumnWindow{1, 0});
    ASSERT_EQ(m.row_copy(0).str(), "101000");
}

TEST(symplectic_gate, rejects_non_symplectic) {
    ASSERT_THROW(SymplecticGate::from_strings({"1000", "0100", "0010", "1001"}), std::invalid_argument);
    ASSERT_THROW(SymplecticGate::from_strings({"1000", "0110", "0010", "0001"}), std::invalid_argument);
}

TEST(symplectic_gate, arity_mismatch) {
    BitMatrix m(2, 8);
    ASSERT_THROW(apply_gate(m, SymplecticGate::cnot(), ColumnWindow{0}), std::invalid_argument);
    ASSERT_THROW(apply_gate(m, SymplecticGate::cnot(), ColumnWindow{0, 4}), std::out_of_range);
}

TEST(symplectic_gate, inverse_restores_rows) {
    std::mt19937_64 rng(10);
    for (std::size_t arity = 1; arity <= SymplecticGate::kMaxArity; arity++) {
        for (int trial = 0; trial < 10; trial++) {
            SymplecticGate g = random_gate(rng, arity);
            ASSERT_EQ(g.then(g.inverse()), SymplecticGate(arity));
            BitMatrix m = random_matrix(rng, 7, 140);
            BitMatrix before = m;
            std::vector<std::size_t> qubits{66, 3, 40, 12};
            qubits.resize(arity);
            ColumnWindow w(qubits);
            apply_gate(m, g, w);
            apply_gate(m, g.inverse(), w);
            ASSERT_EQ(m, before);
        }
    }
}

TEST(symplectic_gate, preserves_rank_and_commutation) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; trial++) {
        BitMatrix m = random_matrix(rng, 8, 16);
        BitMatrix before = m;
        SymplecticGate g = random_gate(rng, 4);
        apply_gate(m, g, ColumnWindow{1, 2, 3, 4});
        ASSERT_EQ(rank(m), rank(before));
        for (std::size_t i = 0; i < m.num_rows(); i++) {
            for (std::size_t j = 0; j < m.num_rows(); j++) {
                ASSERT_EQ(symplectic_product(m.row(i), m.row(j)), symplectic_product(before.row(i), before.row(j)));
            }
        }
    }
}

TEST(symplectic_gate, contiguous_window_matches_scattered_window) {
    std::mt19937_64 rng(12);
    // Qubit q of the first layout sits at perm[q] in the second.
    std::array<std::size_t, 12> perm{3, 0, 7, 2, 9, 1, 11, 6, 4, 10, 5, 8};
    for (int trial = 0; trial < 20; trial++) {
        BitMatrix m = random_matrix(rng, 5, 24);
        BitMatrix moved(5, 24);
        for (std::size_t r = 0; r < 5; r++) {
            for (std::size_t q = 0; q < 12; q++) {
                moved.set(r, 2 * perm[q], m.get(r, 2 * q));
                moved.set(r, 2 * perm[q] + 1, m.get(r, 2 * q + 1));
            }
        }
        SymplecticGate g = random_gate(rng, 4);
        apply_gate(m, g, ColumnWindow{4, 5, 6, 7});
        apply_gate(moved, g, ColumnWindow{perm[4], perm[5], perm[6], perm[7]});
        for (std::size_t r = 0; r < 5; r++) {
            for (std::size_t q = 0; q < 12; q++) {
                ASSERT_EQ(moved.get(r, 2 * perm[q]), m.get(r, 2 * q));
                ASSERT_EQ(moved.get(r, 2 * perm[q] + 1), m.get(r, 2 * q + 1));
            }
        }
    }
}

TEST(symplectic_gate, then_is_application_order) {
    BitMatrix m = BitMatrix::from_strings({"1000"});
    SymplecticGate both = SymplecticGate::cnot().then(SymplecticGate::swap());
    BitMatrix step = m;
    apply_gate(step, SymplecticGate::cnot(), ColumnWindow{0, 1});
    apply_gate(step, SymplecticGate::swap(), ColumnWindow{0, 1});
    apply_gate(m, both, ColumnWindow{0, 1});
    ASSERT_EQ(m, step);
}

TEST(symplectic_gate, tensor_and_block_diagonal) {
    const auto &singles = single_qubit_symplectics();
    SymplecticGate g = singles[0].tensor(singles[5]);
    ASSERT_TRUE(g.is_block_diagonal());
    ASSERT_FALSE(SymplecticGate::cnot().is_block_diagonal());
    ASSERT_TRUE(g.is_symplectic());
}

TEST(single_qubit_symplectics, six_invertible_matrices) {
    // Independent enumeration: all 16 2x2 matrices with nonzero determinant.
    std::vector<std::uint8_t> expected;
    for (std::uint8_t pattern = 0; pattern < 16; pattern++) {
        int a = pattern & 1;
        int b = (pattern >> 1) & 1;
        int c = (pattern >> 2) & 1;
        int d = (pattern >> 3) & 1;
        if (((a & d) ^ (b & c)) == 1) {
            expected.push_back(pattern);
        }
    }
    auto gates = enumerate_single_qubit_symplectics();
    ASSERT_EQ(gates.size(), 6);
    ASSERT_EQ(expected.size(), 6);
    for (std::size_t k = 0; k < gates.size(); k++) {
        ASSERT_EQ(gates[k].row(0) | (gates[k].row(1) << 2), expected[k]);
        ASSERT_TRUE(gates[k].is_symplectic());
    }
    ASSERT_EQ(gates[2], SymplecticGate(1));
    ASSERT_EQ(&single_qubit_symplectics(), &single_qubit_symplectics());
}
