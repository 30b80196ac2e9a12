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

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace impc {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

/// Largest sector the basis builder will enumerate.
inline constexpr std::size_t kMaxSectorDimension = 2'000'000;

/// A fermionic mode on the cylinder: column j in [1, N], ring position r in
/// [-M, M]. Systems without a ring use r = 0 and M = 0.
struct ModeIndex {
    int column = 1;
    int ring = 0;

    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// Column-major flattening of (column, ring) modes. The flattened ordinal
/// (j - 1)(2M + 1) + (r + M) is the global Jordan-Wigner order used by every
/// operator builder.
class ModeLayout {
  public:
    ModeLayout(int columns, int half_width);

    static ModeLayout single_ring(int columns) { return ModeLayout(columns, 0); }

    int columns() const { return columns_; }
    int half_width() const { return half_width_; }
    int ring_size() const { return 2 * half_width_ + 1; }
    int mode_count() const { return columns_ * ring_size(); }

    int ordinal(ModeIndex mode) const;
    ModeIndex mode(int ordinal) const;

    /// Maps any integer ring coordinate back into [-M, M] (period 2M + 1).
    int wrap(int ring) const;

  private:
    int columns_;
    int half_width_;
};

/// Occupation-number basis of a fixed particle-number sector. Bit i of a state
/// mask is the occupation of the mode with ordinal i.
class SectorBasis {
  public:
    SectorBasis(int mode_count, int particles);

    int mode_count() const { return mode_count_; }
    int particles() const { return particles_; }
    std::size_t size() const { return states_.size(); }

    std::span<const std::uint64_t> states() const { return states_; }
    std::uint64_t state(std::size_t i) const { return states_[i]; }

    /// Ordinal of `mask` in the basis; throws std::out_of_range if the mask is
    /// not a member of the sector.
    std::size_t index_of(std::uint64_t mask) const;
    bool contains(std::uint64_t mask) const;

  private:
    int mode_count_;
    int particles_;
    std::vector<std::uint64_t> states_;
};

SectorBasis build_basis(int mode_count, int particles);

/// Hermitian operator stored as its upper triangle (row <= col), one entry per
/// position, sorted by (row, col). Diagonal entries are real.
class SparseHermitian {
  public:
    struct Entry {
        std::size_t row;
        std::size_t col;
        Complex value;
    };

    /// Accumulates matrix elements in any order. Lower-triangle elements are
    /// folded onto the upper triangle by conjugation, so callers only ever add
    /// one of the two Hermitian partners. Sums are formed in insertion order.
    class Builder {
      public:
        explicit Builder(std::size_t dimension) : dimension_(dimension) {}
        void add(std::size_t row, std::size_t col, Complex value);
        SparseHermitian build() &&;

      private:
        std::size_t dimension_;
        std::map<std::pair<std::size_t, std::size_t>, Complex> entries_;
    };

    explicit SparseHermitian(std::size_t dimension = 0) : dimension_(dimension) {}

    std::size_t dimension() const { return dimension_; }
    std::span<const Entry> entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    DenseMatrix to_dense() const;
    StateVector apply(const StateVector& v) const;

    SparseHermitian& operator+=(const SparseHermitian& other);
    SparseHermitian scaled(double factor) const;

  private:
    std::size_t dimension_;
    std::vector<Entry> entries_;
};

SparseHermitian operator+(SparseHermitian lhs, const SparseHermitian& rhs);

/// Dense unitary. Construction checks ||U^dag U - I||_max <= kUnitaryTolerance.
class Unitary {
  public:
    static constexpr double kUnitaryTolerance = 1e-10;

    explicit Unitary(DenseMatrix matrix);
    static Unitary identity(std::size_t dimension);

    const DenseMatrix& matrix() const { return matrix_; }
    std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }

    /// ||U^dag U - I||_max.
    double unitarity_defect() const;

    Unitary operator*(const Unitary& rhs) const;

  private:
    DenseMatrix matrix_;
};

double unitarity_defect(const DenseMatrix& m);

// Operator builders. Mode arguments are global ordinals in [0, mode_count);
// the ModeIndex overloads flatten through a layout first.

/// amp * c^dag_a c_b + conj(amp) * c^dag_b c_a, with the Jordan-Wigner sign
/// (-1)^(number of occupied modes strictly between a and b).
SparseHermitian hopping_term(const SectorBasis& basis, int a, int b, Complex amp);
SparseHermitian hopping_term(const SectorBasis& basis, const ModeLayout& layout, ModeIndex a,
                             ModeIndex b, Complex amp);

/// weight * n_a.
SparseHermitian number_term(const SectorBasis& basis, int a, double weight);
SparseHermitian number_term(const SectorBasis& basis, const ModeLayout& layout, ModeIndex a,
                            double weight);

/// (amp * c^dag_a c_b + h.c.) * (1 - 2 sum_p n_p) for density modes p disjoint
/// from {a, b}.
SparseHermitian impurity_term(const SectorBasis& basis, int a, int b,
                              std::span<const int> density_modes, Complex amp);
SparseHermitian impurity_term(const SectorBasis& basis, const ModeLayout& layout, ModeIndex a,
                              ModeIndex b, std::span<const ModeIndex> density_modes, Complex amp);

}  // namespace impc
