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

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "impc/circuit.hpp"
#include "impc/fock.hpp"
#include "impc/propagators.hpp"
#include "impc/pulses.hpp"

namespace impc {

enum class AreaConstant {
    Proof,      // Y theta (S / 2) (1 / erf - 1)
    Statement,  // same with an extra factor P
};

/// Y theta_max (S / 2) (1 / erf(P / (2 sqrt(2) S c)) - 1).
double e_area_bound(double y, double theta_max, int slots, double period, double width,
                    AreaConstant constant = AreaConstant::Proof);

/// Y theta_max S P / (2 pi a) / erf(P / (2 sqrt(2) S c)) e^{a^2 / 2c^2} e^{-2 pi M a / P}.
double e_fourier_bound(double y, double theta_max, int slots, double period, double width,
                       double shift, int truncation);

/// (X / P) e^{a^2 / 2c^2} e^{-2 pi m a / P}.
double fourier_coeff_bound(double amplitude, double period, double width, double shift, int m);

struct SelectedParameters {
    double shift = 0.0;  // a
    /// Exponent with S^{2 alpha} = 8 ln(Y theta S / eps + 1); NaN at S = 1.
    double alpha = 0.0;
    double width = 0.0;  // c
    int truncation = 0;  // M_min
};

/// a = P / (2S), c = P / (2 sqrt(2) S sqrt(L)) with L = ln(Y theta S / eps + 1),
/// M_min = ceil((S / pi) (2L + ln S + ln(2 / pi))), at least 1.
SelectedParameters select_parameters(double y, double theta_max, int slots, double period,
                                     double epsilon);

/// Largest spectral norm among the circuit's distinct operators on the full
/// Fock space of its modes.
double max_operator_norm(const Circuit& circuit);

struct ErrorBudget {
    double y = 0.0;
    double theta_max = 0.0;
    int slots = 0;
    double period = 0.0;
    double width = 0.0;
    double shift = 0.0;
    double alpha = 0.0;
    int truncation = 0;
    std::optional<double> epsilon;
    double e_area = 0.0;
    double e_fourier = 0.0;
    double e_total = 0.0;
};

ErrorBudget error_budget(const Circuit& circuit, double period, double width, int truncation,
                         std::optional<double> shift = std::nullopt,
                         std::optional<double> epsilon = std::nullopt);

/// sum_mu int_0^P |h_mu^ext - 1_mu h_mu| dt.
double l1_area(const PulseSchedule& schedule, double tol = 1e-12);
/// sum_mu int_0^P |h_mu^ext - h_mu^[M]| dt.
double l1_fourier(const PulseSchedule& schedule, int truncation, double tol = 1e-12);
/// int_0^P ||A(t) - B(t)|| dt with the spectral norm, split at both
/// Hamiltonians' breakpoints.
double norm_integral(const TimeDependentHamiltonian& a, const TimeDependentHamiltonian& b,
                     double tol = 1e-8);

struct PipelineConfig {
    double period = 0.0;
    double width = 0.0;
    int truncation = 0;
    double tol = 1e-9;
    int particles = 2;
    std::optional<double> shift;
    std::optional<double> epsilon;
    Scheme scheme = Scheme::Magnus4;
    /// Largest cylinder sector the pipeline will diagonalise.
    std::size_t max_cylinder_dimension = 4000;
};

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct PipelineReport {
    PipelineConfig config;
    ErrorBudget budget;
    std::size_t circuit_dimension = 0;
    std::size_t cylinder_dimension = 0;
    int cylinder_modes = 0;
    long steps_diff = 0;
    long steps_tr = 0;
    double d_circ_diff = 0.0;
    double d_diff_tr = 0.0;
    double d_circ_tr = 0.0;
    double d_tr_ind = 0.0;
    double d_circ_ind = 0.0;
    double d_tr_ind_phase = 0.0;
    double leakage = 0.0;
    double l1_area = 0.0;
    double l1_fourier = 0.0;
    double norm_area = 0.0;
    double norm_fourier = 0.0;
    /// max_k ||[H, N_k]||_max for the rotated B + impurity part and for the
    /// full rotated H_ind.
    double commutator_frame = 0.0;
    double commutator_full = 0.0;
    /// max over sampled t of ||E^dag H_frame(t) E - H_tr(t)||.
    double frame_identity = 0.0;
    std::vector<Check> checks;

    bool passed() const;
};

/// Runs the full chain circuit -> H_BC -> H_diff -> H_tr -> H_ind on `circuit`.
PipelineReport measure_pipeline(const Circuit& circuit, const PipelineConfig& config);

nlohmann::json to_json(const PipelineReport& report);

struct SweepPoint {
    int truncation = 0;
    double distance = 0.0;
    double bound = 0.0;
};

struct SweepReport {
    double period = 0.0;
    double width = 0.0;
    double shift = 0.0;
    int particles = 0;
    long steps = 0;
    std::vector<SweepPoint> points;
    /// Least-squares slope of ln(distance) against M over the fit window.
    double slope = 0.0;
    double slope_all = 0.0;
    double analytic_slope = 0.0;
    int window_lo = 0;
    int window_hi = 0;
    bool monotone = false;
    bool bounded = false;
};

/// Distances ||U_diff - U_tr^[M]|| for each M in `truncations` (ascending).
/// All propagators share one fixed grid sized by an adaptive run on H_diff.
/// The fit window is centred where the Gaussian coefficient decay has the
/// fixed-a slope -2 pi a / P.
SweepReport m_sweep(const Circuit& circuit, double period, double width,
                    const std::vector<int>& truncations, double tol, int particles = 2,
                    std::optional<double> shift = std::nullopt);

nlohmann::json to_json(const SweepReport& report);

}  // namespace impc
