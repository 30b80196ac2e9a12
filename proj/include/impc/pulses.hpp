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

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "impc/circuit.hpp"
#include "impc/fock.hpp"

namespace impc {

inline constexpr double kDefaultTailTolerance = 1e-14;

/// Gaussian pulse h(t) = X / (sqrt(2 pi) c) exp(-(t - t_mu)^2 / (2 c^2)),
/// centred in the mu-th of S equal slots of [0, P). The amplitude X is chosen
/// so that the pulse restricted to its slot has area theta / 2.
struct GaussianPulse {
    int index = 0;
    double theta = 0.0;
    double center = 0.0;
    double width = 0.0;
    double amplitude = 0.0;
    double period = 0.0;
};

double pulse_value(const GaussianPulse& p, double t);

/// Periodic extension sum_l h(t + l P), truncated once the Gaussian tail of the
/// omitted images is below `tail_tol`.
double pulse_extended(const GaussianPulse& p, double t, double tail_tol = kDefaultTailTolerance);

/// Number of image periods kept on each side by pulse_extended.
int extension_images(const GaussianPulse& p, double tail_tol = kDefaultTailTolerance);

/// Pulse realisation of a circuit: one Gaussian per instruction, all sharing
/// the width c and the total time P.
class PulseSchedule {
  public:
    PulseSchedule(Circuit circuit, double period, double width);

    const Circuit& circuit() const { return circuit_; }
    int slots() const { return static_cast<int>(pulses_.size()); }
    double period() const { return period_; }
    double width() const { return width_; }
    const std::vector<GaussianPulse>& pulses() const { return pulses_; }
    const OperatorId& op_of(int mu) const;

    /// Slot mu covers the half-open interval [mu P / S, (mu + 1) P / S).
    std::pair<double, double> slot(int mu) const;
    /// Slot containing t, or nothing when t lies outside [0, P).
    std::optional<int> slot_at(double t) const;
    /// Interior slot boundaries mu P / S, mu = 1 .. S - 1.
    std::vector<double> slot_boundaries() const;

    /// Distinct operators in first-use order.
    std::vector<OperatorId> operators() const;

  private:
    Circuit circuit_;
    double period_;
    double width_;
    std::vector<GaussianPulse> pulses_;
};

/// X_mu = theta / (2 erf(P / (2 sqrt(2) S c))).
double pulse_amplitude(double theta, int slots, double period, double width);

/// Coefficients a(m), m in [-M, M], per operator, using
/// a(m) = (1/P) int_0^P e^{-i 2 pi m t / P} f(t) dt and reconstruction
/// f(t) ~ sum_m e^{+i 2 pi m t / P} a(m).
class FourierTable {
  public:
    FourierTable(int truncation, double period);

    int truncation() const { return truncation_; }
    double period() const { return period_; }

    /// Zero for operators without a row.
    Complex coefficient(const OperatorId& op, int m) const;
    void add(const OperatorId& op, int m, Complex value);

    std::vector<OperatorId> operators() const;
    const std::map<OperatorId, std::vector<Complex>>& rows() const { return rows_; }

    /// max |a(-m) - conj(a(m))| over all rows.
    double conjugate_symmetry_defect() const;

  private:
    int truncation_;
    double period_;
    std::map<OperatorId, std::vector<Complex>> rows_;
};

Complex fourier_coefficient_closed(const GaussianPulse& p, int m);

/// Adaptive quadrature of the defining integral over one period of the
/// extended pulse. Throws ConvergenceError when `tol` is not reached.
Complex fourier_coefficient_quadrature(const GaussianPulse& p, int m, double tol);

FourierTable build_fourier_table(const PulseSchedule& schedule, int truncation);

/// sum_{|m| <= M} e^{i 2 pi m t / P} a_mu(m) for a single pulse.
double pulse_truncated(const GaussianPulse& p, double t, int truncation);

enum class CoefficientKind {
    Bc,     // slot-windowed pulses
    Diff,   // periodic extensions, no windows
    Trunc,  // Fourier partial sums from a table
};

/// Coefficient function of `op` at time t. Bc is zero outside [0, P); Trunc
/// requires `table` and throws std::invalid_argument without one.
double coefficient_function(const PulseSchedule& schedule, const OperatorId& op, double t,
                            CoefficientKind kind, const FourierTable* table = nullptr,
                            double tail_tol = kDefaultTailTolerance);

}  // namespace impc
