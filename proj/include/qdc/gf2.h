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

#ifndef QDC_GF2_H
#define QDC_GF2_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdc {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for_bits(std::size_t num_bits) {
    return (num_bits + kWordBits - 1) / kWordBits;
}

/// A fixed-length vector over GF(2).
///
/// Stabilizer rows use the interleaved convention: column 2q holds the X support of
/// qubit q and column 2q+1 holds its Z support.
class BitRow {
   public:
    BitRow() = default;
    explicit BitRow(std::size_t num_bits);

    /// Parses a string of '0'/'1' characters (column 0 first). Other characters throw.
    static BitRow from_string(std::string_view bits);

    std::size_t size() const {
        return num_bits_;
    }
    bool get(std::size_t col) const;
    void set(std::size_t col, bool value);
    bool is_zero() const;
    std::size_t popcount() const;

    std::span<Word> words() {
        return words_;
    }
    std::span<const Word> words() const {
        return words_;
    }

    BitRow &operator^=(const BitRow &other);
    bool operator==(const BitRow &other) const = default;

    std::string str() const;

   private:
    std::size_t num_bits_ = 0;
    std::vector<Word> words_;
};

/// A dense row-major GF(2) matrix with every row packed into machine words.
///
/// Bits beyond num_cols() in the final word of a row are always zero.
class BitMatrix {
   public:
    BitMatrix() = default;
    BitMatrix(std::size_t num_rows, std::size_t num_cols);

    static BitMatrix from_rows(std::span<const BitRow> rows, std::size_t num_cols);
    static BitMatrix from_strings(std::initializer_list<std::string_view> rows);

    std::size_t num_rows() const {
        return num_rows_;
    }
    std::size_t num_cols() const {
        return num_cols_;
    }
    std::size_t words_per_row() const {
        return stride_;
    }

    std::span<Word> row(std::size_t r) {
        return {data_.data() + r * stride_, stride_};
    }
    std::span<const Word> row(std::size_t r) const {
        return {data_.data() + r * stride_, stride_};
    }
    BitRow row_copy(std::size_t r) const;
    std::vector<BitRow> to_rows() const;

    bool get(std::size_t r, std::size_t c) const {
        return (data_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1;
    }
    void set(std::size_t r, std::size_t c, bool value);

    bool row_is_zero(std::size_t r) const;

    /// Appends a zero row and returns its index.
    std::size_t append_zero_row();
    std::size_t append_row(const BitRow &row);

    /// row[dst] ^= row[src].
    void xor_row_into(std::size_t src, std::size_t dst);
    void swap_rows(std::size_t a, std::size_t b);

    /// Removes the given rows. Remaining rows keep their relative order.
    void remove_rows(std::vector<std::size_t> indices);
    /// Removes the given rows by moving the last rows into their slots.
    void remove_rows_unordered(std::vector<std::size_t> indices);
    void truncate_rows(std::size_t count);

    /// Grows (or shrinks) the column count. New columns are zero.
    void resize_columns(std::size_t num_cols);

    void zero_columns(std::span<const Word> mask);

    bool operator==(const BitMatrix &other) const = default;

    std::string str() const;

   private:
    std::size_t num_rows_ = 0;
    std::size_t num_cols_ = 0;
    std::size_t stride_ = 0;
    std::vector<Word> data_;
};

/// An ordered set of qubits, addressing columns {2q, 2q+1} for each member q.
class ColumnWindow {
   public:
    ColumnWindow() = default;
    explicit ColumnWindow(std::vector<std::size_t> qubits);
    ColumnWindow(std::initializer_list<std::size_t> qubits) : ColumnWindow(std::vector<std::size_t>(qubits)) {
    }

    static ColumnWindow range(std::size_t begin, std::size_t end);

    std::span<const std::size_t> qubits() const {
        return qubits_;
    }
    std::size_t size() const {
        return qubits_.size();
    }
    std::size_t num_columns() const {
        return 2 * qubits_.size();
    }

    /// Column mask over a matrix with `num_cols` columns. Throws std::out_of_range
    /// if a qubit does not fit.
    std::vector<Word> column_mask(std::size_t num_cols) const;

   private:
    std::vector<std::size_t> qubits_;
};

/// The phase-free action of a Clifford gate on up to four qubits: a 2k x 2k GF(2)
/// matrix acting on row restrictions by right multiplication.
///
/// Row i of the matrix (stored as a bitmask) is the image of basis vector i. Basis
/// index 2j is X on local qubit j and 2j+1 is Z on local qubit j.
class SymplecticGate {
   public:
    static constexpr std::size_t kMaxArity = 4;

    /// Identity gate of the given arity.
    explicit SymplecticGate(std::size_t arity = 1);

    /// Throws std::invalid_argument unless the matrix preserves the symplectic form.
    static SymplecticGate from_rows(std::size_t arity, std::span<const std::uint8_t> rows);
    static SymplecticGate from_strings(std::initializer_list<std::string_view> rows);

    /// CNOT with local qubit 0 as control and local qubit 1 as target.
    static SymplecticGate cnot();
    static SymplecticGate swap();

    std::size_t arity() const {
        return arity_;
    }
    std::size_t dim() const {
        return 2 * arity_;
    }
    std::uint8_t row(std::size_t i) const {
        return rows_[i];
    }
    bool get(std::size_t i, std::size_t j) const {
        return (rows_[i] >> j) & 1;
    }

    /// Image of the row vector v (bit i = component i) under v -> v * M.
    std::uint8_t apply(std::uint8_t v) const;

    /// The gate that applies *this first and then `next`.
    SymplecticGate then(const SymplecticGate &next) const;

    /// *this on the low local qubits, `high` on the qubits after them.
    SymplecticGate tensor(const SymplecticGate &high) const;

    /// Places this gate on `positions` of a wider identity gate.
    SymplecticGate embed(std::size_t arity, std::span<const std::size_t> positions) const;

    SymplecticGate inverse() const;

    bool is_symplectic() const;
    bool is_block_diagonal() const;

    bool operator==(const SymplecticGate &other) const = default;

    std::string str() const;

   private:
    std::size_t arity_;
    std::array<std::uint8_t, 2 * kMaxArity> rows_{};
};

/// GF(2) rank of the rows restricted to the window's columns. The input is not modified.
std::size_t rank(const BitMatrix &rows, const ColumnWindow &window);

/// Rank of the rows restricted to the columns set in `mask` (one word per row word).
std::size_t rank_masked(const BitMatrix &rows, std::span<const Word> mask);

/// Full-width rank.
std::size_t rank(const BitMatrix &rows);

/// Forward elimination on the columns set in `mask`, using whole-row operations and
/// row swaps. Rows at index >= the returned rank vanish on the masked columns; the row
/// space is unchanged.
std::size_t eliminate_masked(BitMatrix &rows, std::span<const Word> mask);

/// Reduces the rows so that only the returned pivot rows touch the window, with
/// linearly independent restrictions there. The row space is unchanged.
///
/// Pivots are chosen lowest column first, then lowest row index; the restriction to
/// the window ends in reduced echelon form, so the operation is idempotent.
std::vector<std::size_t> row_reduce_window(BitMatrix &rows, const ColumnWindow &window);

/// Forward elimination over every column with row swaps. Returns the rank; rows at
/// index >= rank are zero afterwards.
std::size_t echelonize(BitMatrix &rows);

/// Replaces each row's restriction to the window by (restriction * gate).
void apply_gate(BitMatrix &rows, const SymplecticGate &gate, const ColumnWindow &window);

/// u Lambda v^T where Lambda pairs the X and Z columns of every qubit.
bool symplectic_product(std::span<const Word> u, std::span<const Word> v);

/// The 6 invertible 2x2 matrices over GF(2), ordered by their packed bit pattern
/// (row 0 in bits 0-1, row 1 in bits 2-3), ascending. The identity is at index 2.
const std::vector<SymplecticGate> &single_qubit_symplectics();
std::vector<SymplecticGate> enumerate_single_qubit_symplectics();

}  // namespace qdc

#endif
