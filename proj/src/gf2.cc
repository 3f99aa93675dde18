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

#include <algorithm>
#include <bit>
#include <functional>
#include <stdexcept>

using namespace qdc;

namespace {

constexpr Word kXBits = 0x5555555555555555ULL;

Word tail_mask(std::size_t num_cols) {
    std::size_t r = num_cols % kWordBits;
    return r == 0 ? ~Word{0} : ((Word{1} << r) - 1);
}

std::uint8_t swap_xz(std::uint8_t v) {
    return static_cast<std::uint8_t>(((v & 0x55) << 1) | ((v & 0xAA) >> 1));
}

bool parity8(std::uint8_t v) {
    return std::popcount(static_cast<unsigned>(v)) & 1;
}

// Forward elimination over the masked columns of a flat row buffer. Rows at index >=
// the returned rank end up zero on the masked columns. Every row must already be zero
// outside the mask.
std::size_t eliminate(Word *data, std::size_t num_rows, std::size_t stride, std::span<const Word> mask) {
    std::size_t rank = 0;
    for (std::size_t w = 0; w < stride && rank < num_rows; w++) {
        Word m = mask[w];
        while (m && rank < num_rows) {
            Word bit = m & (~m + 1);
            m &= m - 1;
            std::size_t pivot = num_rows;
            for (std::size_t r = rank; r < num_rows; r++) {
                if (data[r * stride + w] & bit) {
                    pivot = r;
                    break;
                }
            }
            if (pivot == num_rows) {
                continue;
            }
            Word *top = data + rank * stride;
            if (pivot != rank) {
                Word *p = data + pivot * stride;
                for (std::size_t k = w; k < stride; k++) {
                    std::swap(top[k], p[k]);
                }
            }
            for (std::size_t r = pivot + 1; r < num_rows; r++) {
                Word *row = data + r * stride;
                if (row[w] & bit) {
                    for (std::size_t k = w; k < stride; k++) {
                        row[k] ^= top[k];
                    }
                }
            }
            rank++;
        }
    }
    return rank;
}

std::vector<Word> full_mask(std::size_t num_cols) {
    std::vector<Word> mask(words_for_bits(num_cols), ~Word{0});
    if (!mask.empty()) {
        mask.back() = tail_mask(num_cols);
    }
    return mask;
}

}  // namespace

BitRow::BitRow(std::size_t num_bits) : num_bits_(num_bits), words_(words_for_bits(num_bits), 0) {
}

BitRow BitRow::from_string(std::string_view bits) {
    BitRow result(bits.size());
    for (std::size_t k = 0; k < bits.size(); k++) {
        if (bits[k] == '1') {
            result.set(k, true);
        } else if (bits[k] != '0') {
            throw std::invalid_argument("BitRow::from_string: expected only '0' and '1' in \"" + std::string(bits) + "\"");
        }
    }
    return result;
}

bool BitRow::get(std::size_t col) const {
    if (col >= num_bits_) {
        throw std::out_of_range("BitRow::get: column out of range");
    }
    return (words_[col / kWordBits] >> (col % kWordBits)) & 1;
}

void BitRow::set(std::size_t col, bool value) {
    if (col >= num_bits_) {
        throw std::out_of_range("BitRow::set: column out of range");
    }
    Word bit = Word{1} << (col % kWordBits);
    if (value) {
        words_[col / kWordBits] |= bit;
    } else {
        words_[col / kWordBits] &= ~bit;
    }
}

bool BitRow::is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
}

std::size_t BitRow::popcount() const {
    std::size_t total = 0;
    for (Word w : words_) {
        total += std::popcount(w);
    }
    return total;
}

BitRow &BitRow::operator^=(const BitRow &other) {
    if (other.num_bits_ != num_bits_) {
        throw std::invalid_argument("BitRow::operator^=: length mismatch");
    }
    for (std::size_t k = 0; k < words_.size(); k++) {
        words_[k] ^= other.words_[k];
    }
    return *this;
}

std::string BitRow::str() const {
    std::string out(num_bits_, '0');
    for (std::size_t k = 0; k < num_bits_; k++) {
        if (get(k)) {
            out[k] = '1';
        }
    }
    return out;
}

BitMatrix::BitMatrix(std::size_t num_rows, std::size_t num_cols)
    : num_rows_(num_rows), num_cols_(num_cols), stride_(words_for_bits(num_cols)), data_(num_rows * stride_, 0) {
}

BitMatrix BitMatrix::from_rows(std::span<const BitRow> rows, std::size_t num_cols) {
    BitMatrix result(0, num_cols);
    for (const auto &r : rows) {
        result.append_row(r);
    }
    return result;
}

BitMatrix BitMatrix::from_strings(std::initializer_list<std::string_view> rows) {
    std::size_t num_cols = rows.size() == 0 ? 0 : rows.begin()->size();
    BitMatrix result(0, num_cols);
    for (auto s : rows) {
        result.append_row(BitRow::from_string(s));
    }
    return result;
}

BitRow BitMatrix::row_copy(std::size_t r) const {
    BitRow result(num_cols_);
    std::copy_n(data_.begin() + r * stride_, stride_, result.words().begin());
    return result;
}

std::vector<BitRow> BitMatrix::to_rows() const {
    std::vector<BitRow> result;
    result.reserve(num_rows_);
    for (std::size_t r = 0; r < num_rows_; r++) {
        result.push_back(row_copy(r));
    }
    return result;
}

void BitMatrix::set(std::size_t r, std::size_t c, bool value) {
    if (r >= num_rows_ || c >= num_cols_) {
        throw std::out_of_range("BitMatrix::set: index out of range");
    }
    Word bit = Word{1} << (c % kWordBits);
    Word &w = data_[r * stride_ + c / kWordBits];
    w = value ? (w | bit) : (w & ~bit);
}

bool BitMatrix::row_is_zero(std::size_t r) const {
    auto words = row(r);
    return std::all_of(words.begin(), words.end(), [](Word w) { return w == 0; });
}

std::size_t BitMatrix::append_zero_row() {
    data_.resize(data_.size() + stride_, 0);
    return num_rows_++;
}

std::size_t BitMatrix::append_row(const BitRow &row) {
    if (row.size() != num_cols_) {
        throw std::invalid_argument(
            "BitMatrix::append_row: row has " + std::to_string(row.size()) + " columns, expected " +
            std::to_string(num_cols_));
    }
    std::size_t r = append_zero_row();
    std::copy(row.words().begin(), row.words().end(), data_.begin() + r * stride_);
    return r;
}

void BitMatrix::xor_row_into(std::size_t src, std::size_t dst) {
    const Word *s = data_.data() + src * stride_;
    Word *d = data_.data() + dst * stride_;
    for (std::size_t k = 0; k < stride_; k++) {
        d[k] ^= s[k];
    }
}

void BitMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) {
        return;
    }
    std::swap_ranges(
        data_.begin() + a * stride_, data_.begin() + (a + 1) * stride_, data_.begin() + b * stride_);
}

void BitMatrix::remove_rows(std::vector<std::size_t> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    if (indices.empty()) {
        return;
    }
    if (indices.back() >= num_rows_) {
        throw std::out_of_range("BitMatrix::remove_rows: row index out of range");
    }
    std::size_t out = indices.front();
    std::size_t next = 0;
    for (std::size_t r = indices.front(); r < num_rows_; r++) {
        if (next < indices.size() && indices[next] == r) {
            next++;
            continue;
        }
        std::copy_n(data_.begin() + r * stride_, stride_, data_.begin() + out * stride_);
        out++;
    }
    truncate_rows(out);
}

void BitMatrix::remove_rows_unordered(std::vector<std::size_t> indices) {
    std::sort(indices.begin(), indices.end(), std::greater<>());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    for (std::size_t r : indices) {
        if (r >= num_rows_) {
            throw std::out_of_range("BitMatrix::remove_rows_unordered: row index out of range");
        }
        swap_rows(r, num_rows_ - 1);
        truncate_rows(num_rows_ - 1);
    }
}

void BitMatrix::truncate_rows(std::size_t count) {
    if (count < num_rows_) {
        num_rows_ = count;
        data_.resize(num_rows_ * stride_);
    }
}

void BitMatrix::resize_columns(std::size_t num_cols) {
    std::size_t new_stride = words_for_bits(num_cols);
    if (new_stride != stride_) {
        std::vector<Word> data(num_rows_ * new_stride, 0);
        std::size_t keep = std::min(stride_, new_stride);
        for (std::size_t r = 0; r < num_rows_; r++) {
            std::copy_n(data_.begin() + r * stride_, keep, data.begin() + r * new_stride);
        }
        data_ = std::move(data);
        stride_ = new_stride;
    }
    if (num_cols < num_cols_ && stride_ > 0) {
        Word tail = tail_mask(num_cols);
        for (std::size_t r = 0; r < num_rows_; r++) {
            data_[r * stride_ + stride_ - 1] &= tail;
        }
    }
    num_cols_ = num_cols;
}

void BitMatrix::zero_columns(std::span<const Word> mask) {
    for (std::size_t k = 0; k < stride_; k++) {
        if (!mask[k]) {
            continue;
        }
        for (std::size_t r = 0; r < num_rows_; r++) {
            data_[r * stride_ + k] &= ~mask[k];
        }
    }
}

std::string BitMatrix::str() const {
    std::string out;
    for (std::size_t r = 0; r < num_rows_; r++) {
        out += row_copy(r).str();
        out += '\n';
    }
    return out;
}

ColumnWindow::ColumnWindow(std::vector<std::size_t> qubits) : qubits_(std::move(qubits)) {
    auto sorted = qubits_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("ColumnWindow: qubit indices must be distinct");
    }
}

ColumnWindow ColumnWindow::range(std::size_t begin, std::size_t end) {
    std::vector<std::size_t> qubits;
    for (std::size_t q = begin; q < end; q++) {
        qubits.push_back(q);
    }
    return ColumnWindow(std::move(qubits));
}

std::vector<Word> ColumnWindow::column_mask(std::size_t num_cols) const {
    std::vector<Word> mask(words_for_bits(num_cols), 0);
    for (std::size_t q : qubits_) {
        if (2 * q + 1 >= num_cols) {
            throw std::out_of_range(
                "ColumnWindow: qubit " + std::to_string(q) + " outside a row of " + std::to_string(num_cols) +
                " columns");
        }
        mask[2 * q / kWordBits] |= Word{3} << (2 * q % kWordBits);
    }
    return mask;
}

SymplecticGate::SymplecticGate(std::size_t arity) : arity_(arity) {
    if (arity == 0 || arity > kMaxArity) {
        throw std::invalid_argument("SymplecticGate: arity must be in [1, 4]");
    }
    for (std::size_t i = 0; i < dim(); i++) {
        rows_[i] = static_cast<std::uint8_t>(1u << i);
    }
}

SymplecticGate SymplecticGate::from_rows(std::size_t arity, std::span<const std::uint8_t> rows) {
    SymplecticGate result(arity);
    if (rows.size() != result.dim()) {
        throw std::invalid_argument("SymplecticGate::from_rows: expected 2*arity rows");
    }
    std::uint8_t limit = static_cast<std::uint8_t>((1u << result.dim()) - 1);
    for (std::size_t i = 0; i < rows.size(); i++) {
        if (rows[i] & ~limit) {
            throw std::invalid_argument("SymplecticGate::from_rows: row has bits outside the gate");
        }
        result.rows_[i] = rows[i];
    }
    if (!result.is_symplectic()) {
        throw std::invalid_argument("SymplecticGate::from_rows: matrix does not preserve the symplectic form");
    }
    return result;
}

SymplecticGate SymplecticGate::from_strings(std::initializer_list<std::string_view> rows) {
    std::vector<std::uint8_t> packed;
    for (auto s : rows) {
        if (s.size() != rows.size()) {
            throw std::invalid_argument("SymplecticGate::from_strings: matrix must be square");
        }
        packed.push_back(static_cast<std::uint8_t>(BitRow::from_string(s).words()[0]));
    }
    if (packed.size() % 2 != 0) {
        throw std::invalid_argument("SymplecticGate::from_strings: dimension must be even");
    }
    return from_rows(packed.size() / 2, packed);
}

SymplecticGate SymplecticGate::cnot() {
    // x_t ^= x_c; z_c ^= z_t.
    static const SymplecticGate gate = from_strings({
        "1010",
        "0100",
        "0010",
        "0101",
    });
    return gate;
}

SymplecticGate SymplecticGate::swap() {
    static const SymplecticGate gate = from_strings({
        "0010",
        "0001",
        "1000",
        "0100",
    });
    return gate;
}

std::uint8_t SymplecticGate::apply(std::uint8_t v) const {
    std::uint8_t out = 0;
    for (std::size_t i = 0; i < dim(); i++) {
        if ((v >> i) & 1) {
            out ^= rows_[i];
        }
    }
    return out;
}

SymplecticGate SymplecticGate::then(const SymplecticGate &next) const {
    if (next.arity_ != arity_) {
        throw std::invalid_argument("SymplecticGate::then: arity mismatch");
    }
    SymplecticGate result(arity_);
    for (std::size_t i = 0; i < dim(); i++) {
        result.rows_[i] = next.apply(rows_[i]);
    }
    return result;
}

SymplecticGate SymplecticGate::tensor(const SymplecticGate &high) const {
    SymplecticGate result(arity_ + high.arity_);
    std::size_t shift = dim();
    for (std::size_t i = 0; i < dim(); i++) {
        result.rows_[i] = rows_[i];
    }
    for (std::size_t i = 0; i < high.dim(); i++) {
        result.rows_[shift + i] = static_cast<std::uint8_t>(high.rows_[i] << shift);
    }
    return result;
}

SymplecticGate SymplecticGate::embed(std::size_t arity, std::span<const std::size_t> positions) const {
    if (positions.size() != arity_) {
        throw std::invalid_argument("SymplecticGate::embed: need one position per gate qubit");
    }
    SymplecticGate result(arity);
    for (std::size_t p : positions) {
        if (p >= arity) {
            throw std::invalid_argument("SymplecticGate::embed: position out of range");
        }
    }
    ColumnWindow distinct_check(std::vector<std::size_t>(positions.begin(), positions.end()));
    for (std::size_t j = 0; j < arity_; j++) {
        for (std::size_t half = 0; half < 2; half++) {
            std::uint8_t local = rows_[2 * j + half];
            std::uint8_t wide = 0;
            for (std::size_t m = 0; m < arity_; m++) {
                wide |= static_cast<std::uint8_t>(((local >> (2 * m)) & 3) << (2 * positions[m]));
            }
            result.rows_[2 * positions[j] + half] = wide;
        }
    }
    return result;
}

SymplecticGate SymplecticGate::inverse() const {
    // For symplectic M, M^-1 = Lambda M^T Lambda.
    SymplecticGate result(arity_);
    for (std::size_t i = 0; i < dim(); i++) {
        std::uint8_t r = 0;
        for (std::size_t j = 0; j < dim(); j++) {
            if (get(j ^ 1, i ^ 1)) {
                r |= static_cast<std::uint8_t>(1u << j);
            }
        }
        result.rows_[i] = r;
    }
    return result;
}

bool SymplecticGate::is_symplectic() const {
    for (std::size_t i = 0; i < dim(); i++) {
        for (std::size_t j = 0; j < dim(); j++) {
            bool product = parity8(static_cast<std::uint8_t>(rows_[i] & swap_xz(rows_[j])));
            bool expected = (i ^ 1) == j;
            if (product != expected) {
                return false;
            }
        }
    }
    return true;
}

bool SymplecticGate::is_block_diagonal() const {
    for (std::size_t i = 0; i < dim(); i++) {
        std::uint8_t own = static_cast<std::uint8_t>(3u << (2 * (i / 2)));
        if (rows_[i] & ~own) {
            return false;
        }
    }
    return true;
}

std::string SymplecticGate::str() const {
    std::string out;
    for (std::size_t i = 0; i < dim(); i++) {
        for (std::size_t j = 0; j < dim(); j++) {
            out += get(i, j) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

std::size_t qdc::rank_masked(const BitMatrix &rows, std::span<const Word> mask) {
    std::size_t stride = rows.words_per_row();
    if (mask.size() != stride) {
        throw std::invalid_argument("rank_masked: mask width does not match the matrix");
    }
    std::vector<Word> scratch;
    scratch.reserve(rows.num_rows() * stride);
    std::size_t n = 0;
    for (std::size_t r = 0; r < rows.num_rows(); r++) {
        auto src = rows.row(r);
        Word any = 0;
        for (std::size_t k = 0; k < stride; k++) {
            any |= src[k] & mask[k];
        }
        if (!any) {
            continue;
        }
        for (std::size_t k = 0; k < stride; k++) {
            scratch.push_back(src[k] & mask[k]);
        }
        n++;
    }
    return eliminate(scratch.data(), n, stride, mask);
}

std::size_t qdc::rank(const BitMatrix &rows, const ColumnWindow &window) {
    return rank_masked(rows, window.column_mask(rows.num_cols()));
}

std::size_t qdc::rank(const BitMatrix &rows) {
    return rank_masked(rows, full_mask(rows.num_cols()));
}

std::size_t qdc::eliminate_masked(BitMatrix &rows, std::span<const Word> mask) {
    std::size_t stride = rows.words_per_row();
    if (mask.size() != stride) {
        throw std::invalid_argument("eliminate_masked: mask width does not match the matrix");
    }
    std::size_t n = rows.num_rows();
    if (n == 0) {
        return 0;
    }
    Word *data = rows.row(0).data();
    std::size_t rank = 0;
    for (std::size_t w = 0; w < stride && rank < n; w++) {
        Word m = mask[w];
        while (m && rank < n) {
            Word bit = m & (~m + 1);
            m &= m - 1;
            std::size_t pivot = n;
            for (std::size_t r = rank; r < n; r++) {
                if (data[r * stride + w] & bit) {
                    pivot = r;
                    break;
                }
            }
            if (pivot == n) {
                continue;
            }
            Word *top = data + rank * stride;
            if (pivot != rank) {
                std::swap_ranges(top, top + stride, data + pivot * stride);
            }
            for (std::size_t r = pivot + 1; r < n; r++) {
                Word *row = data + r * stride;
                if (row[w] & bit) {
                    for (std::size_t k = 0; k < stride; k++) {
                        row[k] ^= top[k];
                    }
                }
            }
            rank++;
        }
    }
    return rank;
}

std::vector<std::size_t> qdc::row_reduce_window(BitMatrix &rows, const ColumnWindow &window) {
    auto mask = window.column_mask(rows.num_cols());
    std::vector<std::size_t> pivots;
    std::vector<bool> is_pivot(rows.num_rows(), false);
    for (std::size_t w = 0; w < mask.size(); w++) {
        Word m = mask[w];
        while (m) {
            Word bit = m & (~m + 1);
            m &= m - 1;
            std::size_t pivot = rows.num_rows();
            for (std::size_t r = 0; r < rows.num_rows(); r++) {
                if (!is_pivot[r] && (rows.row(r)[w] & bit)) {
                    pivot = r;
                    break;
                }
            }
            if (pivot == rows.num_rows()) {
                continue;
            }
            is_pivot[pivot] = true;
            pivots.push_back(pivot);
            for (std::size_t r = 0; r < rows.num_rows(); r++) {
                if (r != pivot && (rows.row(r)[w] & bit)) {
                    rows.xor_row_into(pivot, r);
                }
            }
        }
    }
    return pivots;
}

std::size_t qdc::echelonize(BitMatrix &rows) {
    if (rows.num_rows() == 0) {
        return 0;
    }
    auto mask = full_mask(rows.num_cols());
    return eliminate(rows.row(0).data(), rows.num_rows(), rows.words_per_row(), mask);
}

void qdc::apply_gate(BitMatrix &rows, const SymplecticGate &gate, const ColumnWindow &window) {
    if (gate.arity() != window.size()) {
        throw std::invalid_argument(
            "apply_gate: gate acts on " + std::to_string(gate.arity()) + " qubits but the window has " +
            std::to_string(window.size()));
    }
    auto qubits = window.qubits();
    for (std::size_t q : qubits) {
        if (2 * q + 1 >= rows.num_cols()) {
            throw std::out_of_range("apply_gate: window qubit " + std::to_string(q) + " out of range");
        }
    }

    std::size_t dim = gate.dim();
    std::array<std::uint8_t, 256> table{};
    for (std::size_t v = 1; v < (std::size_t{1} << dim); v++) {
        table[v] = table[v & (v - 1)] ^ gate.row(static_cast<std::size_t>(std::countr_zero(v)));
    }

    bool contiguous = true;
    for (std::size_t j = 1; j < qubits.size(); j++) {
        contiguous &= qubits[j] == qubits[0] + j;
    }
    std::size_t first_col = 2 * qubits[0];
    if (contiguous && first_col % kWordBits + dim <= kWordBits) {
        std::size_t w = first_col / kWordBits;
        std::size_t shift = first_col % kWordBits;
        Word low = (Word{1} << dim) - 1;
        for (std::size_t r = 0; r < rows.num_rows(); r++) {
            Word &word = rows.row(r)[w];
            Word v = (word >> shift) & low;
            if (v) {
                word = (word & ~(low << shift)) | (Word{table[v]} << shift);
            }
        }
        return;
    }

    for (std::size_t r = 0; r < rows.num_rows(); r++) {
        auto row = rows.row(r);
        std::size_t v = 0;
        for (std::size_t j = 0; j < qubits.size(); j++) {
            std::size_t c = 2 * qubits[j];
            v |= ((row[c / kWordBits] >> (c % kWordBits)) & 3) << (2 * j);
        }
        if (!v) {
            continue;
        }
        std::size_t out = table[v];
        for (std::size_t j = 0; j < qubits.size(); j++) {
            std::size_t c = 2 * qubits[j];
            Word &word = row[c / kWordBits];
            word = (word & ~(Word{3} << (c % kWordBits))) | (Word((out >> (2 * j)) & 3) << (c % kWordBits));
        }
    }
}

bool qdc::symplectic_product(std::span<const Word> u, std::span<const Word> v) {
    if (u.size() != v.size()) {
        throw std::invalid_argument("symplectic_product: length mismatch");
    }
    Word acc = 0;
    for (std::size_t k = 0; k < u.size(); k++) {
        Word swapped = ((v[k] & kXBits) << 1) | ((v[k] >> 1) & kXBits);
        acc ^= u[k] & swapped;
    }
    return std::popcount(acc) & 1;
}

std::vector<SymplecticGate> qdc::enumerate_single_qubit_symplectics() {
    std::vector<SymplecticGate> result;
    for (unsigned pattern = 0; pattern < 16; pattern++) {
        std::uint8_t r0 = pattern & 3;
        std::uint8_t r1 = (pattern >> 2) & 3;
        // Invertible iff both rows are nonzero and distinct.
        if (r0 == 0 || r1 == 0 || r0 == r1) {
            continue;
        }
        std::array<std::uint8_t, 2> rows{r0, r1};
        result.push_back(SymplecticGate::from_rows(1, rows));
    }
    return result;
}

const std::vector<SymplecticGate> &qdc::single_qubit_symplectics() {
    static const std::vector<SymplecticGate> gates = enumerate_single_qubit_symplectics();
    return gates;
}
