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

#include "impc/propagators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace impc {

namespace {

constexpr double kPi = std::numbers::pi;

DenseMatrix expm_dense(const DenseMatrix& h, double duration) {
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("Hermitian eigendecomposition failed");
    }
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    Eigen::VectorXcd phases(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        phases(i) = std::exp(Complex(0.0, -duration * lambda(i)));
    }
    const DenseMatrix& v = eig.eigenvectors();
    return v * phases.asDiagonal() * v.adjoint();
}

std::vector<double> segment_edges(const TimeDependentHamiltonian& h, double t0, double t1) {
    std::vector<double> edges{t0};
    for (double b : h.breakpoints()) {
        if (b > t0 && b < t1) {
            edges.push_back(b);
        }
    }
    edges.push_back(t1);
    return edges;
}

DenseMatrix step(const TimeDependentHamiltonian& h, double t, double dt, Scheme scheme) {
    switch (scheme) {
        case Scheme::Midpoint:
            return expm_dense(h.dense(t + 0.5 * dt), dt);
        case Scheme::Magnus4: {
            const double s3 = std::sqrt(3.0);
            const double a1 = (3.0 - 2.0 * s3) / 12.0;
            const double a2 = (3.0 + 2.0 * s3) / 12.0;
            const DenseMatrix h1 = h.dense(t + (0.5 - s3 / 6.0) * dt);
            const DenseMatrix h2 = h.dense(t + (0.5 + s3 / 6.0) * dt);
            const DenseMatrix first = expm_dense(a2 * h1 + a1 * h2, dt);
            const DenseMatrix second = expm_dense(a1 * h1 + a2 * h2, dt);
            return second * first;
        }
    }
    throw std::logic_error("unhandled scheme");
}

DenseMatrix fixed_grid(const TimeDependentHamiltonian& h, double t0, double t1, long steps,
                       Scheme scheme) {
    const auto n = static_cast<Eigen::Index>(h.dimension());
    DenseMatrix u = DenseMatrix::Identity(n, n);
    const auto edges = segment_edges(h, t0, t1);
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
        const double a = edges[s];
        const double dt = (edges[s + 1] - a) / static_cast<double>(steps);
        for (long k = 0; k < steps; ++k) {
            u = step(h, a + static_cast<double>(k) * dt, dt, scheme) * u;
        }
    }
    return u;
}

double distance_at(const DenseMatrix& a, const DenseMatrix& b, double phi) {
    return spectral_norm(a - std::exp(Complex(0.0, phi)) * b);
}

}  // namespace

Unitary expm_hermitian(const SparseHermitian& h, double duration) {
    return Unitary(expm_dense(h.to_dense(), duration));
}

Unitary expm_hermitian(const DenseMatrix& h, double duration) {
    if (h.rows() != h.cols()) {
        throw std::invalid_argument("generator must be square");
    }
    return Unitary(expm_dense(h, duration));
}

int scheme_order(Scheme scheme) { return scheme == Scheme::Midpoint ? 2 : 4; }

Propagation timeordered(const TimeDependentHamiltonian& h, double t0, double t1,
                        const PropagatorOptions& opts) {
    if (!(t1 >= t0)) {
        throw std::invalid_argument("propagation needs t1 >= t0");
    }
    if (opts.initial_steps < 1 || !(opts.tol > 0.0)) {
        throw std::invalid_argument("invalid propagator options");
    }
    if (t1 == t0) {
        return Propagation{Unitary::identity(h.dimension()), 0, 0.0};
    }
    const double denom = std::pow(2.0, scheme_order(opts.scheme)) - 1.0;
    long n = opts.initial_steps;
    DenseMatrix coarse = fixed_grid(h, t0, t1, n, opts.scheme);
    while (true) {
        if (2 * n > opts.max_steps) {
            throw ConvergenceError("time-ordered propagation did not reach tolerance");
        }
        DenseMatrix fine = fixed_grid(h, t0, t1, 2 * n, opts.scheme);
        const double estimate = spectral_norm(fine - coarse) / denom;
        if (estimate <= opts.tol) {
            return Propagation{Unitary(std::move(fine)), 2 * n, estimate};
        }
        coarse = std::move(fine);
        n *= 2;
    }
}

Unitary propagate_fixed(const TimeDependentHamiltonian& h, double t0, double t1, long steps,
                        Scheme scheme) {
    if (steps < 1 || !(t1 >= t0)) {
        throw std::invalid_argument("fixed-grid propagation needs steps >= 1 and t1 >= t0");
    }
    return Unitary(fixed_grid(h, t0, t1, steps, scheme));
}

Unitary piecewise_exact(const PulseSchedule& schedule, const SectorBasis& basis) {
    return circuit_unitary(schedule.circuit(), basis);
}

double spectral_norm(const DenseMatrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::BDCSVD<DenseMatrix> svd(m);
    return svd.singularValues()(0);
}

Distance unitary_distance(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("distance needs equally sized matrices");
    }
    Distance out;
    out.raw = spectral_norm(a - b);
    const Complex overlap = (b.adjoint() * a).trace();
    double best_phi = std::abs(overlap) > 0.0 ? std::arg(overlap) : 0.0;
    double best = distance_at(a, b, best_phi);
    constexpr int kGrid = 64;
    for (int i = 0; i < kGrid; ++i) {
        const double phi = -kPi + 2.0 * kPi * i / kGrid;
        const double d = distance_at(a, b, phi);
        if (d < best) {
            best = d;
            best_phi = phi;
        }
    }
    // Golden-section refinement around the best candidate.
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = best_phi - 2.0 * kPi / kGrid;
    double hi = best_phi + 2.0 * kPi / kGrid;
    double x1 = hi - g * (hi - lo);
    double x2 = lo + g * (hi - lo);
    double f1 = distance_at(a, b, x1);
    double f2 = distance_at(a, b, x2);
    for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = distance_at(a, b, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = distance_at(a, b, x2);
        }
    }
    for (auto [x, f] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
        if (f < best) {
            best = f;
            best_phi = x;
        }
    }
    out.phase_optimized = std::min(best, out.raw);
    out.phase = best == out.phase_optimized ? std::remainder(best_phi, 2.0 * kPi) : 0.0;
    return out;
}

}  // namespace impc
