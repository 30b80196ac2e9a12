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

#include "impc/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "impc/hamiltonians.hpp"
#include "impc/quadrature.hpp"

namespace impc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double slot_erf(int slots, double period, double width) {
    return std::erf(period / (2.0 * std::sqrt(2.0) * slots * width));
}

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
}

double hermitian_norm(const DenseMatrix& h) {
    if (h.size() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double binomial(int n, int k) {
    double out = 1.0;
    for (int i = 1; i <= k; ++i) {
        out = out * (n - k + i) / i;
    }
    return out;
}

std::string format_le(double measured, double bound) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6e <= %.6e", measured, bound);
    return buf;
}

Check make_check(std::string name, double measured, double bound) {
    return Check{std::move(name), measured <= bound, format_le(measured, bound)};
}

// Least-squares slope of ln(d) against M.
double fit_slope(const std::vector<SweepPoint>& points) {
    if (points.size() < 2) {
        return kNaN;
    }
    double sx = 0.0, sy = 0.0;
    for (const auto& p : points) {
        sx += p.truncation;
        sy += std::log(p.distance);
    }
    const double n = static_cast<double>(points.size());
    const double mx = sx / n, my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& p : points) {
        sxy += (p.truncation - mx) * (std::log(p.distance) - my);
        sxx += (p.truncation - mx) * (p.truncation - mx);
    }
    return sxy / sxx;
}

// max_k max_ab |H_ab| |n_k(b) - n_k(a)|, the max-norm of [H, N_k].
double max_commutator(const SparseHermitian& h, const SectorBasis& basis, const ModeLayout& layout) {
    double worst = 0.0;
    for (int k = -layout.half_width(); k <= layout.half_width(); ++k) {
        std::uint64_t mask = 0;
        for (int j = 1; j <= layout.columns(); ++j) {
            mask |= std::uint64_t{1} << layout.ordinal({j, k});
        }
        for (const auto& e : h.entries()) {
            const int na = std::popcount(basis.state(e.row) & mask);
            const int nb = std::popcount(basis.state(e.col) & mask);
            worst = std::max(worst, std::abs(e.value) * std::abs(nb - na));
        }
    }
    return worst;
}

}  // namespace

double e_area_bound(double y, double theta_max, int slots, double period, double width,
                    AreaConstant constant) {
    if (slots == 0 || theta_max == 0.0 || y == 0.0) {
        return 0.0;
    }
    require_positive(period, "P");
    require_positive(width, "c");
    const double bound = y * theta_max * 0.5 * slots * (1.0 / slot_erf(slots, period, width) - 1.0);
    return constant == AreaConstant::Statement ? period * bound : bound;
}

double e_fourier_bound(double y, double theta_max, int slots, double period, double width,
                       double shift, int truncation) {
    if (slots == 0 || theta_max == 0.0 || y == 0.0) {
        return 0.0;
    }
    require_positive(period, "P");
    require_positive(width, "c");
    require_positive(shift, "a");
    return y * theta_max * slots * period / (2.0 * kPi * shift) / slot_erf(slots, period, width) *
           std::exp(shift * shift / (2.0 * width * width) - 2.0 * kPi * truncation * shift / period);
}

double fourier_coeff_bound(double amplitude, double period, double width, double shift, int m) {
    require_positive(period, "P");
    require_positive(width, "c");
    if (shift < 0.0) {
        throw std::invalid_argument("a must be non-negative");
    }
    return std::abs(amplitude) / period *
           std::exp(shift * shift / (2.0 * width * width) - 2.0 * kPi * m * shift / period);
}

SelectedParameters select_parameters(double y, double theta_max, int slots, double period,
                                     double epsilon) {
    require_positive(epsilon, "epsilon");
    require_positive(period, "P");
    require_positive(y, "Y");
    require_positive(theta_max, "theta_max");
    if (slots < 1) {
        throw std::invalid_argument("parameter selection needs at least one slot");
    }
    const double s = slots;
    const double log_term = std::log(y * theta_max * s / epsilon + 1.0);
    SelectedParameters out;
    out.shift = period / (2.0 * s);
    out.alpha = slots > 1 ? std::log(8.0 * log_term) / (2.0 * std::log(s)) : kNaN;
    // P / S^{alpha + 1} with S^alpha = 2 sqrt(2 L), valid also at S = 1.
    out.width = period / (2.0 * std::sqrt(2.0) * s * std::sqrt(log_term));
    const double m = s / kPi * (2.0 * log_term + std::log(s) + std::log(2.0 / kPi));
    out.truncation = std::max(1, static_cast<int>(std::ceil(m)));
    return out;
}

double max_operator_norm(const Circuit& circuit) {
    // Each generator acts on at most three neighbouring modes, so its norm on
    // the full Fock space equals the norm of the same generator on 3 modes.
    double worst = 0.0;
    std::vector<OperatorId> seen;
    for (const auto& ins : circuit.instructions()) {
        const bool is_hop = std::holds_alternative<Hop>(ins.op);
        const OperatorId local = is_hop ? OperatorId{Hop{1}} : OperatorId{Impurity{}};
        if (std::find(seen.begin(), seen.end(), local) != seen.end()) {
            continue;
        }
        seen.push_back(local);
        for (int n = 0; n <= 3; ++n) {
            const SectorBasis basis(3, n);
            worst = std::max(worst, hermitian_norm(operator_matrix(local, basis).to_dense()));
        }
    }
    return worst;
}

ErrorBudget error_budget(const Circuit& circuit, double period, double width, int truncation,
                         std::optional<double> shift, std::optional<double> epsilon) {
    require_positive(period, "P");
    require_positive(width, "c");
    if (truncation < 0) {
        throw std::invalid_argument("M must be non-negative");
    }
    ErrorBudget b;
    b.y = max_operator_norm(circuit);
    b.theta_max = circuit.max_abs_angle();
    b.slots = static_cast<int>(circuit.size());
    b.period = period;
    b.width = width;
    b.truncation = truncation;
    b.epsilon = epsilon;
    b.shift = shift ? *shift : (b.slots > 0 ? period / (2.0 * b.slots) : kNaN);
    b.alpha = b.slots > 1 ? std::log(period / width) / std::log(static_cast<double>(b.slots)) - 1.0
                          : kNaN;
    b.e_area = e_area_bound(b.y, b.theta_max, b.slots, period, width);
    b.e_fourier = e_fourier_bound(b.y, b.theta_max, b.slots, period, width, b.shift, truncation);
    b.e_total = b.e_area + b.e_fourier;
    return b;
}

double l1_area(const PulseSchedule& schedule, double tol) {
    const int s = schedule.slots();
    double total = 0.0;
    for (const auto& p : schedule.pulses()) {
        const auto [lo, hi] = schedule.slot(p.index);
        auto integrand = [&, lo = lo, hi = hi](double t) {
            const double windowed = (t >= lo && t < hi) ? pulse_value(p, t) : 0.0;
            return std::abs(pulse_extended(p, t) - windowed);
        };
        std::vector<double> breaks{lo, hi};
        for (double k : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
            breaks.push_back(p.center + k * p.width);
        }
        total += integrate_adaptive<double>(integrand, 0.0, schedule.period(), tol / s, breaks).value;
    }
    return total;
}

double l1_fourier(const PulseSchedule& schedule, int truncation, double tol) {
    const int s = schedule.slots();
    double total = 0.0;
    for (const auto& p : schedule.pulses()) {
        auto integrand = [&](double t) {
            return std::abs(pulse_extended(p, t) - pulse_truncated(p, t, truncation));
        };
        std::vector<double> breaks;
        for (double k : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
            breaks.push_back(p.center + k * p.width);
        }
        total += integrate_adaptive<double>(integrand, 0.0, schedule.period(), tol / s, breaks,
                                            200000)
                     .value;
    }
    return total;
}

double norm_integral(const TimeDependentHamiltonian& a, const TimeDependentHamiltonian& b,
                     double tol) {
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("Hamiltonians act on different sectors");
    }
    std::vector<double> breaks = a.breakpoints();
    breaks.insert(breaks.end(), b.breakpoints().begin(), b.breakpoints().end());
    auto integrand = [&](double t) { return hermitian_norm(a.dense(t) - b.dense(t)); };
    return integrate_adaptive<double>(integrand, 0.0, a.period(), tol, breaks, 200000).value;
}

bool PipelineReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

PipelineReport measure_pipeline(const Circuit& circuit, const PipelineConfig& config) {
    require_positive(config.period, "P");
    require_positive(config.width, "c");
    require_positive(config.tol, "tol");
    if (config.truncation < 0) {
        throw std::invalid_argument("M must be non-negative");
    }
    const int n_modes = circuit.n_modes();
    if (config.particles < 0 || config.particles > n_modes) {
        throw std::invalid_argument("particle number outside [0, N]");
    }
    const ModeLayout layout(n_modes, config.truncation);
    const double cylinder_size = binomial(layout.mode_count(), config.particles);
    if (cylinder_size > static_cast<double>(config.max_cylinder_dimension)) {
        throw std::length_error("cylinder sector dimension " + std::to_string(cylinder_size) +
                                " exceeds the guard " +
                                std::to_string(config.max_cylinder_dimension));
    }

    PipelineReport r;
    r.config = config;
    r.budget = error_budget(circuit, config.period, config.width, config.truncation, config.shift,
                            config.epsilon);

    const PulseSchedule schedule(circuit, config.period, config.width);
    const SectorBasis small(n_modes, config.particles);
    const FourierTable table = build_fourier_table(schedule, config.truncation);
    r.circuit_dimension = small.size();

    const Unitary u_circ = piecewise_exact(schedule, small);
    const auto h_bc = build_H_BC(schedule, small);
    const auto h_diff = build_H_diff(schedule, small);
    const auto h_tr = build_H_tr(schedule, table, small);
    PropagatorOptions opts;
    opts.tol = config.tol;
    opts.scheme = config.scheme;
    const Propagation p_diff = timeordered(h_diff, 0.0, config.period, opts);
    const Propagation p_tr = timeordered(h_tr, 0.0, config.period, opts);
    r.steps_diff = p_diff.steps;
    r.steps_tr = p_tr.steps;

    r.d_circ_diff = unitary_distance(u_circ.matrix(), p_diff.unitary.matrix()).raw;
    r.d_diff_tr = unitary_distance(p_diff.unitary.matrix(), p_tr.unitary.matrix()).raw;
    r.d_circ_tr = unitary_distance(u_circ.matrix(), p_tr.unitary.matrix()).raw;

    r.l1_area = l1_area(schedule);
    r.l1_fourier = l1_fourier(schedule, config.truncation);
    r.norm_area = norm_integral(h_bc, h_diff);
    r.norm_fourier = norm_integral(h_diff, h_tr);

    const SectorBasis big(layout.mode_count(), config.particles);
    r.cylinder_modes = layout.mode_count();
    r.cylinder_dimension = big.size();
    const HamiltonianSpec rotated = momentum_transform(cylinder_spec(table, n_modes));
    const SparseHermitian h_full = assemble(rotated, big);
    const SparseHermitian h_frame = assemble(rotated, big, kQuadraticPart | kImpurityPart);
    r.commutator_full = max_commutator(h_full, big, layout);
    r.commutator_frame = max_commutator(h_frame, big, layout);

    const DenseMatrix embed = k0_embedding(small, big, layout);
    for (int i = 0; i < 10; ++i) {
        const double t = (i + 0.5) * config.period / 10.0;
        const DenseMatrix frame = assemble(interaction_frame_spec(table, n_modes, t), big).to_dense();
        const DenseMatrix reduced = embed.adjoint() * frame * embed;
        r.frame_identity = std::max(r.frame_identity, spectral_norm(reduced - h_tr.dense(t)));
    }

    const Unitary u_ind = expm_hermitian(h_full, config.period);
    const DenseMatrix image = u_ind.matrix() * embed;
    const DenseMatrix restricted = embed.adjoint() * image;
    r.leakage = spectral_norm(image - embed * restricted);
    const Distance tr_ind = unitary_distance(p_tr.unitary.matrix(), restricted);
    r.d_tr_ind = tr_ind.raw;
    r.d_tr_ind_phase = tr_ind.phase_optimized;
    r.d_circ_ind = unitary_distance(u_circ.matrix(), restricted).raw;

    const ErrorBudget& b = r.budget;
    const double slack = 10.0 * config.tol;
    r.checks.push_back(make_check("area_l1_within_bound", b.y * r.l1_area, b.e_area + 1e-8));
    r.checks.push_back(make_check("area_norm_integral_within_bound", r.norm_area, b.e_area + 1e-8));
    r.checks.push_back(
        make_check("fourier_norm_integral_within_bound", r.norm_fourier, b.e_fourier + 1e-8));
    r.checks.push_back(make_check("circ_diff_within_area_bound", r.d_circ_diff, b.e_area + 1e-6));
    r.checks.push_back(make_check("diff_tr_within_fourier_bound", r.d_diff_tr, b.e_fourier + slack));
    r.checks.push_back(
        make_check("triangle", r.d_circ_tr, r.d_circ_diff + r.d_diff_tr + 1e-10));
    r.checks.push_back(make_check("momentum_conservation", r.commutator_frame, 1e-12));
    r.checks.push_back(make_check("frame_identity", r.frame_identity, 1e-10));
    r.checks.push_back(make_check("sector_leakage", r.leakage, 1e-9));
    r.checks.push_back(make_check("cylinder_matches_truncated", r.d_tr_ind, 1e-7));
    r.checks.push_back(make_check("circ_ind_within_total_bound", r.d_circ_ind, b.e_total + slack));
    if (config.epsilon) {
        const double eps = *config.epsilon;
        Check target = make_check("target_epsilon", r.d_circ_ind, eps);
        if (!target.pass) {
            target.detail += "; cylinder evolution misses the requested accuracy";
        }
        r.checks.push_back(std::move(target));
        r.checks.push_back(make_check("area_half_budget", b.e_area, eps / 2.0));
        r.checks.push_back(make_check("fourier_half_budget", b.e_fourier, eps / 2.0));
    }
    return r;
}

nlohmann::json to_json(const PipelineReport& r) {
    using nlohmann::json;
    const ErrorBudget& b = r.budget;
    json parameters = {
        {"P", b.period},
        {"c", b.width},
        {"M", b.truncation},
        {"S", b.slots},
        {"a", b.shift},
        {"alpha", b.alpha},
        {"Y", b.y},
        {"theta_max", b.theta_max},
        {"tol", r.config.tol},
        {"particles", r.config.particles},
        {"scheme", r.config.scheme == Scheme::Midpoint ? "midpoint" : "magnus4"},
        {"epsilon", b.epsilon ? json(*b.epsilon) : json(nullptr)},
    };
    json dimensions = {
        {"circuit_sector", r.circuit_dimension},
        {"cylinder_modes", r.cylinder_modes},
        {"cylinder_sector", r.cylinder_dimension},
    };
    json bounds = {{"e_area", b.e_area}, {"e_fourier", b.e_fourier}, {"e_total", b.e_total}};
    json measured = {
        {"d_circ_diff", r.d_circ_diff},
        {"d_diff_tr", r.d_diff_tr},
        {"d_circ_tr", r.d_circ_tr},
        {"d_tr_ind", r.d_tr_ind},
        {"d_tr_ind_phase_optimized", r.d_tr_ind_phase},
        {"d_circ_ind", r.d_circ_ind},
        {"leakage", r.leakage},
        {"l1_area", r.l1_area},
        {"l1_fourier", r.l1_fourier},
        {"norm_integral_area", r.norm_area},
        {"norm_integral_fourier", r.norm_fourier},
        {"commutator_frame", r.commutator_frame},
        {"commutator_full", r.commutator_full},
        {"frame_identity", r.frame_identity},
        {"steps_diff", r.steps_diff},
        {"steps_tr", r.steps_tr},
    };
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    return json{{"parameters", parameters}, {"dimensions", dimensions}, {"bounds", bounds},
                {"measured", measured},     {"checks", checks},         {"pass", r.passed()}};
}

SweepReport m_sweep(const Circuit& circuit, double period, double width,
                    const std::vector<int>& truncations, double tol, int particles,
                    std::optional<double> shift) {
    require_positive(period, "P");
    require_positive(width, "c");
    if (truncations.empty() || !std::is_sorted(truncations.begin(), truncations.end()) ||
        truncations.front() < 0) {
        throw std::invalid_argument("M list must be non-empty, ascending and non-negative");
    }
    if (circuit.empty()) {
        throw std::invalid_argument("M sweep needs a non-empty circuit");
    }
    const PulseSchedule schedule(circuit, period, width);
    const SectorBasis basis(circuit.n_modes(), particles);
    const auto h_diff = build_H_diff(schedule, basis);
    PropagatorOptions opts;
    opts.tol = tol;
    const Propagation p_diff = timeordered(h_diff, 0.0, period, opts);

    SweepReport out;
    out.period = period;
    out.width = width;
    out.particles = particles;
    out.steps = p_diff.steps;
    const ErrorBudget budget = error_budget(circuit, period, width, 0, shift);
    out.shift = budget.shift;
    out.analytic_slope = -2.0 * kPi * out.shift / period;

    const long steps = out.steps;
    std::vector<std::future<double>> jobs;
    for (int m : truncations) {
        jobs.push_back(std::async(std::launch::async, [&, m, steps] {
            const FourierTable table = build_fourier_table(schedule, m);
            const auto h_tr = build_H_tr(schedule, table, basis);
            const Unitary u_tr = propagate_fixed(h_tr, 0.0, period, steps);
            return unitary_distance(p_diff.unitary.matrix(), u_tr.matrix()).raw;
        }));
    }
    for (std::size_t i = 0; i < truncations.size(); ++i) {
        const int m = truncations[i];
        out.points.push_back(SweepPoint{m, jobs[i].get(),
                                        e_fourier_bound(budget.y, budget.theta_max, budget.slots,
                                                        period, width, out.shift, m)});
    }

    constexpr double kFloor = 1e-12;
    out.monotone = true;
    out.bounded = true;
    for (std::size_t i = 0; i < out.points.size(); ++i) {
        const auto& p = out.points[i];
        if (i > 0 && p.distance > out.points[i - 1].distance + kFloor) {
            out.monotone = false;
        }
        if (p.truncation >= 1 && p.distance > p.bound + 1e-8) {
            out.bounded = false;
        }
    }

    // ln|a(m)| = const - 2 pi^2 c^2 m^2 / P^2; its forward difference at M + 1
    // matches -2 pi a / P at M = a P / (2 pi c^2) - 3/2.
    const double tangent = out.shift * period / (2.0 * kPi * width * width) - 1.5;
    const int centre = static_cast<int>(std::lround(tangent));
    out.window_lo = std::max(centre - 2, truncations.front());
    out.window_hi = std::min(centre + 2, truncations.back());
    std::vector<SweepPoint> window, resolved;
    for (const auto& p : out.points) {
        if (p.distance > kFloor && p.truncation >= 1) {
            resolved.push_back(p);
            if (p.truncation >= out.window_lo && p.truncation <= out.window_hi) {
                window.push_back(p);
            }
        }
    }
    out.slope = fit_slope(window);
    out.slope_all = fit_slope(resolved);
    return out;
}

nlohmann::json to_json(const SweepReport& r) {
    using nlohmann::json;
    json points = json::array();
    for (const auto& p : r.points) {
        points.push_back({{"M", p.truncation}, {"distance", p.distance}, {"bound", p.bound}});
    }
    return json{
        {"parameters",
         {{"P", r.period}, {"c", r.width}, {"a", r.shift}, {"particles", r.particles}, {"steps", r.steps}}},
        {"points", points},
        {"slope", r.slope},
        {"slope_all", r.slope_all},
        {"analytic_slope", r.analytic_slope},
        {"window", {r.window_lo, r.window_hi}},
        {"monotone", r.monotone},
        {"bounded", r.bounded},
    };
}

}  // namespace impc
