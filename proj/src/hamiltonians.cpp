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

#include "impc/hamiltonians.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

namespace impc {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<TimeDependentHamiltonian::Term> schedule_terms(
    const std::shared_ptr<const PulseSchedule>& schedule,
    const std::shared_ptr<const FourierTable>& table, const SectorBasis& basis,
    CoefficientKind kind) {
    if (basis.mode_count() != schedule->circuit().n_modes()) {
        throw std::invalid_argument("basis mode count does not match the schedule's circuit");
    }
    std::vector<TimeDependentHamiltonian::Term> terms;
    for (const auto& op : schedule->operators()) {
        TimeDependentHamiltonian::Term term;
        term.op = operator_matrix(op, basis);
        term.coefficient = [schedule, table, op, kind](double t) {
            return coefficient_function(*schedule, op, t, kind, table.get());
        };
        terms.push_back(std::move(term));
    }
    return terms;
}

void check_columns(const FourierTable& table, int columns) {
    if (columns < 3) {
        throw std::invalid_argument("cylinder needs at least 3 columns");
    }
    for (const auto& op : table.operators()) {
        validate(op, columns);
    }
}

// Forward (c^dag_j c_{j+1} direction) single-particle matrices of Fourier mode
// m. Adding the adjoint gives the Hermitian couplings. The pair
// c^dag_{j,r} c_{j+1,r+m} carries (1/P) int e^{+i w m t} f dt = conj(a(m)),
// so the interaction frame phase e^{-i w m t} rebuilds f^[M](t).
struct ForwardCouplings {
    DenseMatrix quadratic;
    DenseMatrix impurity;
};

ForwardCouplings forward_couplings(const FourierTable& table, const ModeLayout& layout, int m) {
    const int n = layout.mode_count();
    const int half = layout.half_width();
    ForwardCouplings out{DenseMatrix::Zero(n, n), DenseMatrix::Zero(n, n)};
    const int columns = layout.columns();
    for (int j = 1; j <= columns - 2; ++j) {
        const Complex f = std::conj(table.coefficient(Hop{j}, m));
        if (f == Complex(0.0, 0.0)) {
            continue;
        }
        for (int r = -half; r <= half; ++r) {
            const int a = layout.ordinal({j, r});
            const int b = layout.ordinal({j + 1, layout.wrap(r + m)});
            out.quadratic(a, b) += f;
        }
    }
    const Complex g = std::conj(table.coefficient(Impurity{}, m));
    if (g != Complex(0.0, 0.0)) {
        for (int r = -half; r <= half; ++r) {
            const int a = layout.ordinal({columns - 2, r});
            const int b = layout.ordinal({columns, layout.wrap(r + m)});
            out.impurity(a, b) += g;
        }
    }
    return out;
}

DenseMatrix column_rotation(const ModeLayout& layout) {
    const DenseMatrix f = ring_fourier_matrix(layout.half_width());
    const int d = layout.ring_size();
    DenseMatrix w = DenseMatrix::Zero(layout.mode_count(), layout.mode_count());
    for (int j = 0; j < layout.columns(); ++j) {
        w.block(j * d, j * d, d, d) = f;
    }
    return w;
}

void append(SparseHermitian::Builder& out, const SparseHermitian& term) {
    for (const auto& e : term.entries()) {
        out.add(e.row, e.col, e.value);
    }
}

void add_matrix_terms(SparseHermitian::Builder& out, const SectorBasis& basis, const DenseMatrix& x) {
    const int n = static_cast<int>(x.rows());
    for (int a = 0; a < n; ++a) {
        if (x(a, a) != Complex(0.0, 0.0)) {
            append(out, number_term(basis, a, x(a, a).real()));
        }
        for (int b = a + 1; b < n; ++b) {
            if (x(a, b) != Complex(0.0, 0.0)) {
                append(out, hopping_term(basis, a, b, x(a, b)));
            }
        }
    }
}

}  // namespace

TimeDependentHamiltonian::TimeDependentHamiltonian(std::size_t dimension, double period,
                                                   Smoothness smoothness, std::vector<Term> terms,
                                                   std::vector<double> breakpoints)
    : dimension_(dimension),
      period_(period),
      smoothness_(smoothness),
      terms_(std::move(terms)),
      breakpoints_(std::move(breakpoints)) {
    dense_.reserve(terms_.size());
    for (const auto& term : terms_) {
        if (term.op.dimension() != dimension_) {
            throw std::invalid_argument("term dimension does not match the Hamiltonian");
        }
        dense_.push_back(term.op.to_dense());
    }
}

SparseHermitian TimeDependentHamiltonian::operator()(double t) const {
    SparseHermitian::Builder out(dimension_);
    for (const auto& term : terms_) {
        const double a = term.coefficient(t);
        if (a == 0.0) {
            continue;
        }
        for (const auto& e : term.op.entries()) {
            out.add(e.row, e.col, a * e.value);
        }
    }
    return std::move(out).build();
}

DenseMatrix TimeDependentHamiltonian::dense(double t) const {
    const auto n = static_cast<Eigen::Index>(dimension_);
    DenseMatrix h = DenseMatrix::Zero(n, n);
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        const double a = terms_[i].coefficient(t);
        if (a != 0.0) {
            h += a * dense_[i];
        }
    }
    return h;
}

std::vector<double> TimeDependentHamiltonian::coefficients(double t) const {
    std::vector<double> out;
    out.reserve(terms_.size());
    for (const auto& term : terms_) {
        out.push_back(term.coefficient(t));
    }
    return out;
}

TimeDependentHamiltonian build_H_BC(const PulseSchedule& schedule, const SectorBasis& basis) {
    auto shared = std::make_shared<const PulseSchedule>(schedule);
    return TimeDependentHamiltonian(basis.size(), schedule.period(), Smoothness::Piecewise,
                                    schedule_terms(shared, nullptr, basis, CoefficientKind::Bc),
                                    schedule.slot_boundaries());
}

TimeDependentHamiltonian build_H_diff(const PulseSchedule& schedule, const SectorBasis& basis) {
    auto shared = std::make_shared<const PulseSchedule>(schedule);
    return TimeDependentHamiltonian(basis.size(), schedule.period(), Smoothness::Smooth,
                                    schedule_terms(shared, nullptr, basis, CoefficientKind::Diff));
}

TimeDependentHamiltonian build_H_tr(const PulseSchedule& schedule, const FourierTable& table,
                                    const SectorBasis& basis) {
    if (std::abs(table.period() - schedule.period()) > 1e-12 * schedule.period()) {
        throw std::invalid_argument("Fourier table period does not match the schedule");
    }
    auto shared = std::make_shared<const PulseSchedule>(schedule);
    auto shared_table = std::make_shared<const FourierTable>(table);
    return TimeDependentHamiltonian(basis.size(), schedule.period(), Smoothness::Smooth,
                                    schedule_terms(shared, shared_table, basis, CoefficientKind::Trunc));
}

HamiltonianSpec::HamiltonianSpec(ModeLayout layout_)
    : layout(layout_),
      static_part(DenseMatrix::Zero(layout_.mode_count(), layout_.mode_count())),
      quadratic(DenseMatrix::Zero(layout_.mode_count(), layout_.mode_count())),
      impurity_hop(DenseMatrix::Zero(layout_.mode_count(), layout_.mode_count())) {}

void HamiltonianSpec::validate(double tol) const {
    const int n = layout.mode_count();
    for (const DenseMatrix* x : {&static_part, &quadratic, &impurity_hop}) {
        if (x->rows() != n || x->cols() != n) {
            throw std::invalid_argument("coefficient matrix does not match the layout");
        }
        if ((*x - x->adjoint()).cwiseAbs().maxCoeff() > tol) {
            throw std::invalid_argument("coefficient matrix is not Hermitian");
        }
    }
    if (impurity_hop.diagonal().cwiseAbs().maxCoeff() > 0.0) {
        throw std::invalid_argument("impurity hop must not have diagonal entries");
    }
    if (density_column) {
        const int d = layout.ring_size();
        const int first = (*density_column - 1) * d;
        if (*density_column < 1 || *density_column > layout.columns()) {
            throw std::invalid_argument("density column outside layout");
        }
        if (impurity_hop.middleRows(first, d).cwiseAbs().maxCoeff() > 0.0 ||
            impurity_hop.middleCols(first, d).cwiseAbs().maxCoeff() > 0.0) {
            throw std::invalid_argument("impurity hop touches the density column");
        }
    }
}

SparseHermitian assemble(const HamiltonianSpec& spec, const SectorBasis& basis, unsigned parts) {
    if (basis.mode_count() != spec.layout.mode_count()) {
        throw std::invalid_argument("basis does not span the spec's modes");
    }
    spec.validate();
    SparseHermitian::Builder out(basis.size());
    if (parts & kStaticPart) {
        add_matrix_terms(out, basis, spec.static_part);
    }
    if (parts & kQuadraticPart) {
        add_matrix_terms(out, basis, spec.quadratic);
    }
    if ((parts & kImpurityPart) && spec.impurity_hop.cwiseAbs().maxCoeff() > 0.0) {
        std::vector<int> density;
        if (spec.density_column) {
            for (int r = -spec.layout.half_width(); r <= spec.layout.half_width(); ++r) {
                density.push_back(spec.layout.ordinal({*spec.density_column, r}));
            }
        }
        const int n = spec.layout.mode_count();
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                const Complex amp = spec.impurity_hop(a, b);
                if (amp != Complex(0.0, 0.0)) {
                    append(out, impurity_term(basis, a, b, density, amp));
                }
            }
        }
    }
    return std::move(out).build();
}

HamiltonianSpec cylinder_spec(const FourierTable& table, int columns) {
    check_columns(table, columns);
    const ModeLayout layout(columns, table.truncation());
    HamiltonianSpec spec(layout);
    const int half = layout.half_width();
    const double omega = 2.0 * kPi / table.period();
    for (int j = 1; j <= columns; ++j) {
        for (int r = -half; r <= half; ++r) {
            const int a = layout.ordinal({j, r});
            spec.static_part(a, a) = omega * r;
        }
    }
    for (int m = -half; m <= half; ++m) {
        const auto fwd = forward_couplings(table, layout, m);
        spec.quadratic += fwd.quadratic;
        spec.impurity_hop += fwd.impurity;
    }
    spec.quadratic += DenseMatrix(spec.quadratic.adjoint());
    spec.impurity_hop += DenseMatrix(spec.impurity_hop.adjoint());
    spec.density_column = columns - 1;
    return spec;
}

SparseHermitian build_H_ind(int columns, const FourierTable& table, const SectorBasis& basis) {
    const int expected = columns * (2 * table.truncation() + 1);
    if (basis.mode_count() != expected) {
        throw std::invalid_argument("basis spans " + std::to_string(basis.mode_count()) +
                                    " modes but the cylinder has " + std::to_string(expected));
    }
    return assemble(cylinder_spec(table, columns), basis);
}

DenseMatrix ring_fourier_matrix(int half_width) {
    const int d = 2 * half_width + 1;
    DenseMatrix f(d, d);
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int k = -half_width; k <= half_width; ++k) {
        for (int r = -half_width; r <= half_width; ++r) {
            // Reduce k r mod d before forming the angle.
            const int phase = ((k * r) % d + d) % d;
            f(k + half_width, r + half_width) =
                norm * std::exp(Complex(0.0, 2.0 * kPi * phase / d));
        }
    }
    return f;
}

HamiltonianSpec momentum_transform(const HamiltonianSpec& spec, Rotation rotation) {
    const DenseMatrix w = column_rotation(spec.layout);
    const DenseMatrix left = rotation == Rotation::Forward ? DenseMatrix(w.adjoint()) : w;
    const DenseMatrix right = rotation == Rotation::Forward ? w : DenseMatrix(w.adjoint());
    HamiltonianSpec out(spec.layout);
    auto rotate = [&](const DenseMatrix& x) -> DenseMatrix {
        DenseMatrix y = left * x * right;
        // Restore exact Hermiticity after rounding.
        return 0.5 * (y + DenseMatrix(y.adjoint()));
    };
    out.static_part = rotate(spec.static_part);
    out.quadratic = rotate(spec.quadratic);
    out.impurity_hop = rotate(spec.impurity_hop);
    out.impurity_hop.diagonal().setZero();
    out.density_column = spec.density_column;
    if (spec.density_column) {
        // Columns are rotated independently, so K keeps its column-block support.
        const int d = spec.layout.ring_size();
        const int first = (*spec.density_column - 1) * d;
        out.impurity_hop.middleRows(first, d).setZero();
        out.impurity_hop.middleCols(first, d).setZero();
    }
    return out;
}

SparseHermitian conserved_charge(const SectorBasis& basis, const ModeLayout& layout, int k) {
    if (basis.mode_count() != layout.mode_count()) {
        throw std::invalid_argument("basis does not span the layout");
    }
    SparseHermitian::Builder out(basis.size());
    for (int j = 1; j <= layout.columns(); ++j) {
        append(out, number_term(basis, layout, {j, k}, 1.0));
    }
    return std::move(out).build();
}

DenseMatrix k0_embedding(const SectorBasis& small, const SectorBasis& big, const ModeLayout& layout) {
    if (small.mode_count() != layout.columns() || big.mode_count() != layout.mode_count() ||
        small.particles() != big.particles()) {
        throw std::invalid_argument("k = 0 embedding needs matching columns and particle numbers");
    }
    DenseMatrix e = DenseMatrix::Zero(static_cast<Eigen::Index>(big.size()),
                                      static_cast<Eigen::Index>(small.size()));
    for (std::size_t i = 0; i < small.size(); ++i) {
        const std::uint64_t s = small.state(i);
        std::uint64_t mask = 0;
        for (int j = 1; j <= layout.columns(); ++j) {
            if (s & (std::uint64_t{1} << (j - 1))) {
                mask |= std::uint64_t{1} << layout.ordinal({j, 0});
            }
        }
        e(static_cast<Eigen::Index>(big.index_of(mask)), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return e;
}

StateVector embed_k0(const StateVector& state, const SectorBasis& small, const SectorBasis& big,
                     const ModeLayout& layout) {
    if (static_cast<std::size_t>(state.size()) != small.size()) {
        throw std::invalid_argument("state does not live on the small basis");
    }
    return k0_embedding(small, big, layout) * state;
}

HamiltonianSpec interaction_frame_spec(const FourierTable& table, int columns, double t) {
    check_columns(table, columns);
    const ModeLayout layout(columns, table.truncation());
    const DenseMatrix w = column_rotation(layout);
    HamiltonianSpec spec(layout);
    const int half = layout.half_width();
    for (int m = -half; m <= half; ++m) {
        const auto fwd = forward_couplings(table, layout, m);
        const Complex phase = std::exp(Complex(0.0, -2.0 * kPi * m * t / table.period()));
        spec.quadratic += phase * (w.adjoint() * fwd.quadratic * w);
        spec.impurity_hop += phase * (w.adjoint() * fwd.impurity * w);
    }
    spec.quadratic += DenseMatrix(spec.quadratic.adjoint());
    spec.impurity_hop += DenseMatrix(spec.impurity_hop.adjoint());
    spec.impurity_hop.diagonal().setZero();
    spec.density_column = columns - 1;
    return spec;
}

}  // namespace impc
