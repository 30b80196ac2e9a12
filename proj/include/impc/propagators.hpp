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

#include "impc/fock.hpp"
#include "impc/hamiltonians.hpp"
#include "impc/pulses.hpp"
#include "impc/quadrature.hpp"

namespace impc {

/// exp(-i duration H) through a Hermitian eigendecomposition.
Unitary expm_hermitian(const SparseHermitian& h, double duration);
Unitary expm_hermitian(const DenseMatrix& h, double duration);

enum class Scheme {
    Midpoint,  // exponential midpoint rule, order 2
    Magnus4,   // commutator-free Magnus, two exponentials per step, order 4
};

int scheme_order(Scheme scheme);

struct PropagatorOptions {
    double tol = 1e-9;
    Scheme scheme = Scheme::Magnus4;
    long initial_steps = 8;
    long max_steps = 1L << 22;
};

struct Propagation {
    Unitary unitary;
    /// Steps per breakpoint segment used for the returned unitary.
    long steps = 0;
    /// Step-doubling estimate ||U_2n - U_n|| / (2^p - 1).
    double error_estimate = 0.0;
};

/// Time-ordered propagator of H from t0 to t1. Steps never straddle the
/// Hamiltonian's breakpoints. Step counts double until the error estimate is
/// below opts.tol; throws ConvergenceError past opts.max_steps.
Propagation timeordered(const TimeDependentHamiltonian& h, double t0, double t1,
                        const PropagatorOptions& opts = {});

/// Same integrator on a fixed grid of `steps` steps per segment.
Unitary propagate_fixed(const TimeDependentHamiltonian& h, double t0, double t1, long steps,
                        Scheme scheme = Scheme::Magnus4);

/// Product of the exact gate exponentials of the schedule's circuit.
Unitary piecewise_exact(const PulseSchedule& schedule, const SectorBasis& basis);

double spectral_norm(const DenseMatrix& m);

struct Distance {
    double raw = 0.0;
    /// min over phi of ||A - e^{i phi} B||.
    double phase_optimized = 0.0;
    double phase = 0.0;
};

/// Spectral-norm distances between two equally sized matrices. Throws
/// std::invalid_argument on a shape mismatch.
Distance unitary_distance(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace impc
