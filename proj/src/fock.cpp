// Copyright 2026 The impc Authors
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

#include "impc/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace impc {

namespace {

std::uint64_t bit(int mode) { return std::uint64_t{1} << mode; }

// Mask of modes strictly between a and b.
std::uint64_t between_mask(int a, int b) {
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    if (hi - lo <= 1) {
        return 0;
    }
    return (bit(hi) - 1) & ~(bit(lo + 1) - 1);
}

double jw_sign(std::uint64_t state, int a, int b) {
    return (std::popcount(state & between_mask(a, b)) & 1) ? -1.0 : 1.0;
}

void check_mode(const SectorBasis& basis, int mode) {
    if (mode < 0 || mode >= basis.mode_count()) {
        throw std::out_of_range("mode " + std::to_string(mode) + " outside [0, " +
                                std::to_string(basis.mode_count()) + ")");
    }
}

// Visits every nonzero <s'| c^dag_a c_b |s> as (index(s'), index(s), sign, s).
template <typename F>
void for_each_hop(const SectorBasis& basis, int a, int b, F&& visit) {
    const std::uint64_t from = bit(b);
    const std::uint64_t to = bit(a);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const std::uint64_t s = basis.state(i);
        if (!(s & from) || (s & to)) {
            continue;
        }
        const std::uint64_t target = (s ^ from) | to;
        visit(basis.index_of(target), i, jw_sign(s, a, b), s);
    }
}

}  // namespace

ModeLayout::ModeLayout(int columns, int half_width) : columns_(columns), half_width_(half_width) {
    if (columns < 1 || half_width < 0) {
        throw std::invalid_argument("layout needs columns >= 1 and half width >= 0");
    }
    if (mode_count() > 62) {
        throw std::invalid_argument("layout has " + std::to_string(mode_count()) +
                                    " modes; at most 62 are supported");
    }
}

int ModeLayout::ordinal(ModeIndex m) const {
    if (m.column < 1 || m.column > columns_ || m.ring < -half_width_ || m.ring > half_width_) {
        throw std::out_of_range("mode (" + std::to_string(m.column) + ", " +
                                std::to_string(m.ring) + ") outside layout");
    }
    return (m.column - 1) * ring_size() + (m.ring + half_width_);
}

ModeIndex ModeLayout::mode(int ordinal) const {
    if (ordinal < 0 || ordinal >= mode_count()) {
        throw std::out_of_range("mode ordinal outside layout");
    }
    return ModeIndex{ordinal / ring_size() + 1, ordinal % ring_size() - half_width_};
}

int ModeLayout::wrap(int ring) const {
    const int d = ring_size();
    int shifted = (ring + half_width_) % d;
    if (shifted < 0) {
        shifted += d;
    }
    return shifted - half_width_;
}

SectorBasis::SectorBasis(int mode_count, int particles)
    : mode_count_(mode_count), particles_(particles) {
    if (mode_count < 0 || mode_count > 62 || particles < 0 || particles > mode_count) {
        throw std::invalid_argument("basis needs 0 <= particles <= modes <= 62");
    }
    // C(mode_count, particles) with an early exit once the guard is exceeded.
    double count = 1.0;
    for (int i = 1; i <= particles; ++i) {
        count = count * (mode_count - particles + i) / i;
        if (count > static_cast<double>(kMaxSectorDimension)) {
            throw std::length_error("sector dimension exceeds " +
                                    std::to_string(kMaxSectorDimension) + " states");
        }
    }
    states_.reserve(static_cast<std::size_t>(std::llround(count)));
    if (particles == 0) {
        states_.push_back(0);
        return;
    }
    // Gosper's hack enumerates masks of fixed popcount in ascending order.
    const std::uint64_t limit = bit(mode_count);
    std::uint64_t s = bit(particles) - 1;
    while (s < limit) {
        states_.push_back(s);
        const std::uint64_t c = s & (~s + 1);
        const std::uint64_t r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
}

std::size_t SectorBasis::index_of(std::uint64_t mask) const {
    auto it = std::lower_bound(states_.begin(), states_.end(), mask);
    if (it == states_.end() || *it != mask) {
        throw std::out_of_range("occupation pattern is not in the sector");
    }
    return static_cast<std::size_t>(it - states_.begin());
}

bool SectorBasis::contains(std::uint64_t mask) const {
    return std::binary_search(states_.begin(), states_.end(), mask);
}

SectorBasis build_basis(int mode_count, int particles) { return SectorBasis(mode_count, particles); }

void SparseHermitian::Builder::add(std::size_t row, std::size_t col, Complex value) {
    if (row >= dimension_ || col >= dimension_) {
        throw std::out_of_range("matrix element outside operator dimension");
    }
    if (row > col) {
        std::swap(row, col);
        value = std::conj(value);
    }
    if (row == col) {
        value = Complex(value.real(), 0.0);
    }
    entries_[{row, col}] += value;
}

SparseHermitian SparseHermitian::Builder::build() && {
    SparseHermitian out(dimension_);
    out.entries_.reserve(entries_.size());
    for (const auto& [key, value] : entries_) {
        if (value != Complex(0.0, 0.0)) {
            out.entries_.push_back(Entry{key.first, key.second, value});
        }
    }
    return out;
}

DenseMatrix SparseHermitian::to_dense() const {
    const auto n = static_cast<Eigen::Index>(dimension_);
    DenseMatrix m = DenseMatrix::Zero(n, n);
    for (const auto& e : entries_) {
        const auto r = static_cast<Eigen::Index>(e.row);
        const auto c = static_cast<Eigen::Index>(e.col);
        m(r, c) = e.value;
        m(c, r) = std::conj(e.value);
    }
    return m;
}

StateVector SparseHermitian::apply(const StateVector& v) const {
    if (static_cast<std::size_t>(v.size()) != dimension_) {
        throw std::invalid_argument("vector dimension does not match operator");
    }
    StateVector out = StateVector::Zero(v.size());
    for (const auto& e : entries_) {
        const auto r = static_cast<Eigen::Index>(e.row);
        const auto c = static_cast<Eigen::Index>(e.col);
        out(r) += e.value * v(c);
        if (r != c) {
            out(c) += std::conj(e.value) * v(r);
        }
    }
    return out;
}

SparseHermitian& SparseHermitian::operator+=(const SparseHermitian& other) {
    if (other.dimension_ != dimension_) {
        throw std::invalid_argument("cannot add operators of different dimension");
    }
    Builder b(dimension_);
    for (const auto& e : entries_) {
        b.add(e.row, e.col, e.value);
    }
    for (const auto& e : other.entries_) {
        b.add(e.row, e.col, e.value);
    }
    *this = std::move(b).build();
    return *this;
}

SparseHermitian SparseHermitian::scaled(double factor) const {
    SparseHermitian out = *this;
    for (auto& e : out.entries_) {
        e.value *= factor;
    }
    return out;
}

SparseHermitian operator+(SparseHermitian lhs, const SparseHermitian& rhs) {
    lhs += rhs;
    return lhs;
}

double unitarity_defect(const DenseMatrix& m) {
    const DenseMatrix d = m.adjoint() * m - DenseMatrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff();
}

Unitary::Unitary(DenseMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
        throw std::invalid_argument("unitary must be square");
    }
    if (matrix_.rows() > 0 && unitarity_defect() > kUnitaryTolerance) {
        throw std::domain_error("matrix is not unitary (defect " +
                                std::to_string(unitarity_defect()) + ")");
    }
}

Unitary Unitary::identity(std::size_t dimension) {
    const auto n = static_cast<Eigen::Index>(dimension);
    return Unitary(DenseMatrix::Identity(n, n));
}

double Unitary::unitarity_defect() const { return impc::unitarity_defect(matrix_); }

Unitary Unitary::operator*(const Unitary& rhs) const { return Unitary(matrix_ * rhs.matrix_); }

SparseHermitian hopping_term(const SectorBasis& basis, int a, int b, Complex amp) {
    check_mode(basis, a);
    check_mode(basis, b);
    if (a == b) {
        throw std::invalid_argument("hopping needs two distinct modes");
    }
    SparseHermitian::Builder out(basis.size());
    for_each_hop(basis, a, b, [&](std::size_t row, std::size_t col, double sign, std::uint64_t) {
        out.add(row, col, sign * amp);
    });
    return std::move(out).build();
}

SparseHermitian hopping_term(const SectorBasis& basis, const ModeLayout& layout, ModeIndex a,
                             ModeIndex b, Complex amp) {
    return hopping_term(basis, layout.ordinal(a), layout.ordinal(b), amp);
}

SparseHermitian number_term(const SectorBasis& basis, int a, double weight) {
    check_mode(basis, a);
    SparseHermitian::Builder out(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis.state(i) & bit(a)) {
            out.add(i, i, weight);
        }
    }
    return std::move(out).build();
}

SparseHermitian number_term(const SectorBasis& basis, const ModeLayout& layout, ModeIndex a,
                            double weight) {
    return number_term(basis, layout.ordinal(a), weight);
}

SparseHermitian impurity_term(const SectorBasis& basis, int a, int b,
                              std::span<const int> density_modes, Complex amp) {
    check_mode(basis, a);
    check_mode(basis, b);
    if (a == b) {
        throw std::invalid_argument("impurity hop needs two distinct modes");
    }
    std::uint64_t density = 0;
    for (int p : density_modes) {
        check_mode(basis, p);
        if (p == a || p == b) {
            throw std::invalid_argument("impurity density modes overlap the hop modes");
        }
        density |= bit(p);
    }
    SparseHermitian::Builder out(basis.size());
    for_each_hop(basis, a, b, [&](std::size_t row, std::size_t col, double sign, std::uint64_t s) {
        // The hop leaves the density modes untouched, so either side's count works.
        const double factor = 1.0 - 2.0 * std::popcount(s & density);
        out.add(row, col, sign * factor * amp);
    });
    return std::move(out).build();
}

SparseHermitian impurity_term(const SectorBasis& basis, const ModeLayout& layout, ModeIndex a,
                              ModeIndex b, std::span<const ModeIndex> density_modes, Complex amp) {
    std::vector<int> ordinals;
    ordinals.reserve(density_modes.size());
    for (const auto& m : density_modes) {
        ordinals.push_back(layout.ordinal(m));
    }
    return impurity_term(basis, layout.ordinal(a), layout.ordinal(b), ordinals, amp);
}

}  // namespace impc
