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

#include "impc/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "impc/quadrature.hpp"

namespace impc {

namespace {

constexpr double kPi = std::numbers::pi;

double gaussian(const GaussianPulse& p, double offset) {
    return p.amplitude / (std::sqrt(2.0 * kPi) * p.width) *
           std::exp(-offset * offset / (2.0 * p.width * p.width));
}

// Upper bound on sum_{|l| >= n} of pulse images at distance >= |l| P.
double image_tail_bound(const GaussianPulse& p, int n) {
    const double x0 = n * p.period;
    const double peak = std::abs(p.amplitude) / (std::sqrt(2.0 * kPi) * p.width);
    const double first = peak * std::exp(-x0 * x0 / (2.0 * p.width * p.width));
    const double rest = std::abs(p.amplitude) / p.period * 0.5 *
                        std::erfc(x0 / (std::sqrt(2.0) * p.width));
    return 2.0 * (first + rest);
}

}  // namespace

double pulse_value(const GaussianPulse& p, double t) { return gaussian(p, t - p.center); }

int extension_images(const GaussianPulse& p, double tail_tol) {
    if (!(tail_tol > 0.0)) {
        throw std::invalid_argument("tail tolerance must be positive");
    }
    // Images |l| >= L + 2 sit at least (L + 1) P away from t in [0, P).
    int images = 0;
    while (image_tail_bound(p, images + 1) >= tail_tol) {
        if (++images > 100000) {
            throw std::invalid_argument("pulse too wide for a periodic extension");
        }
    }
    return images + 1;
}

double pulse_extended(const GaussianPulse& p, double t, double tail_tol) {
    const int images = extension_images(p, tail_tol);
    const double reduced = t - p.period * std::floor(t / p.period);
    const double offset = reduced - p.center;
    double sum = 0.0;
    // Nearest images first, summed symmetrically for a fixed rounding order.
    sum += gaussian(p, offset);
    for (int l = 1; l <= images; ++l) {
        sum += gaussian(p, offset + l * p.period) + gaussian(p, offset - l * p.period);
    }
    return sum;
}

double pulse_amplitude(double theta, int slots, double period, double width) {
    return theta / (2.0 * std::erf(period / (2.0 * std::sqrt(2.0) * slots * width)));
}

PulseSchedule::PulseSchedule(Circuit circuit, double period, double width)
    : circuit_(std::move(circuit)), period_(period), width_(width) {
    if (!(period > 0.0) || !(width > 0.0) || !std::isfinite(period) || !std::isfinite(width)) {
        throw std::invalid_argument("pulse schedules need P > 0 and c > 0");
    }
    const int s = static_cast<int>(circuit_.size());
    pulses_.reserve(circuit_.size());
    for (int mu = 0; mu < s; ++mu) {
        const double theta = circuit_.instructions()[static_cast<std::size_t>(mu)].theta;
        GaussianPulse p;
        p.index = mu;
        p.theta = theta;
        p.center = mu * period / s + period / (2.0 * s);
        p.width = width;
        p.amplitude = pulse_amplitude(theta, s, period, width);
        p.period = period;
        pulses_.push_back(p);
    }
}

const OperatorId& PulseSchedule::op_of(int mu) const {
    if (mu < 0 || mu >= slots()) {
        throw std::out_of_range("pulse index outside schedule");
    }
    return circuit_.instructions()[static_cast<std::size_t>(mu)].op;
}

std::pair<double, double> PulseSchedule::slot(int mu) const {
    const int s = slots();
    return {mu * period_ / s, (mu + 1) * period_ / s};
}

std::optional<int> PulseSchedule::slot_at(double t) const {
    const int s = slots();
    if (s == 0 || !(t >= 0.0) || !(t < period_)) {
        return std::nullopt;
    }
    int mu = std::clamp(static_cast<int>(std::floor(t * s / period_)), 0, s - 1);
    // Align with the boundaries exactly as slot() computes them.
    if (mu + 1 < s && t >= slot(mu + 1).first) {
        ++mu;
    } else if (mu > 0 && t < slot(mu).first) {
        --mu;
    }
    return mu;
}

std::vector<double> PulseSchedule::slot_boundaries() const {
    std::vector<double> out;
    for (int mu = 1; mu < slots(); ++mu) {
        out.push_back(slot(mu).first);
    }
    return out;
}

std::vector<OperatorId> PulseSchedule::operators() const {
    std::vector<OperatorId> out;
    for (const auto& ins : circuit_.instructions()) {
        if (std::find(out.begin(), out.end(), ins.op) == out.end()) {
            out.push_back(ins.op);
        }
    }
    return out;
}

FourierTable::FourierTable(int truncation, double period) : truncation_(truncation), period_(period) {
    if (truncation < 0) {
        throw std::invalid_argument("Fourier truncation order must be >= 0");
    }
    if (!(period > 0.0)) {
        throw std::invalid_argument("Fourier period must be positive");
    }
}

Complex FourierTable::coefficient(const OperatorId& op, int m) const {
    if (m < -truncation_ || m > truncation_) {
        throw std::out_of_range("Fourier mode outside [-M, M]");
    }
    auto it = rows_.find(op);
    if (it == rows_.end()) {
        return 0.0;
    }
    return it->second[static_cast<std::size_t>(m + truncation_)];
}

void FourierTable::add(const OperatorId& op, int m, Complex value) {
    if (m < -truncation_ || m > truncation_) {
        throw std::out_of_range("Fourier mode outside [-M, M]");
    }
    auto [it, inserted] = rows_.try_emplace(op, static_cast<std::size_t>(2 * truncation_ + 1));
    it->second[static_cast<std::size_t>(m + truncation_)] += value;
}

std::vector<OperatorId> FourierTable::operators() const {
    std::vector<OperatorId> out;
    for (const auto& [op, row] : rows_) {
        out.push_back(op);
    }
    return out;
}

double FourierTable::conjugate_symmetry_defect() const {
    double worst = 0.0;
    for (const auto& [op, row] : rows_) {
        for (int m = 0; m <= truncation_; ++m) {
            const Complex plus = row[static_cast<std::size_t>(truncation_ + m)];
            const Complex minus = row[static_cast<std::size_t>(truncation_ - m)];
            worst = std::max(worst, std::abs(minus - std::conj(plus)));
        }
    }
    return worst;
}

Complex fourier_coefficient_closed(const GaussianPulse& p, int m) {
    // The lattice sum over one period equals the full-line transform of h.
    const double w = 2.0 * kPi * m / p.period;
    const double envelope = p.amplitude / p.period * std::exp(-0.5 * w * w * p.width * p.width);
    return envelope * std::exp(Complex(0.0, -w * p.center));
}

Complex fourier_coefficient_quadrature(const GaussianPulse& p, int m, double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("quadrature tolerance must be positive");
    }
    const double w = 2.0 * kPi * m / p.period;
    auto integrand = [&](double t) -> Complex {
        return std::exp(Complex(0.0, -w * t)) * pulse_extended(p, t) / p.period;
    };
    std::vector<double> breaks;
    for (int l = -1; l <= 1; ++l) {
        for (double k : {0.0, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0, 8.0, -8.0}) {
            breaks.push_back(p.center + l * p.period + k * p.width);
        }
    }
    return integrate_adaptive<Complex>(integrand, 0.0, p.period, tol, breaks).value;
}

FourierTable build_fourier_table(const PulseSchedule& schedule, int truncation) {
    FourierTable table(truncation, schedule.period());
    for (const auto& p : schedule.pulses()) {
        const OperatorId& op = schedule.op_of(p.index);
        for (int m = -truncation; m <= truncation; ++m) {
            table.add(op, m, fourier_coefficient_closed(p, m));
        }
    }
    return table;
}

double pulse_truncated(const GaussianPulse& p, double t, int truncation) {
    double sum = fourier_coefficient_closed(p, 0).real();
    for (int m = 1; m <= truncation; ++m) {
        // a(-m) = conj(a(m)), so each +-m pair contributes 2 Re(a(m) e^{i w t}).
        const Complex phase = std::exp(Complex(0.0, 2.0 * kPi * m * t / p.period));
        sum += 2.0 * (fourier_coefficient_closed(p, m) * phase).real();
    }
    return sum;
}

double coefficient_function(const PulseSchedule& schedule, const OperatorId& op, double t,
                            CoefficientKind kind, const FourierTable* table, double tail_tol) {
    switch (kind) {
        case CoefficientKind::Bc: {
            const auto mu = schedule.slot_at(t);
            if (!mu || schedule.op_of(*mu) != op) {
                return 0.0;
            }
            return pulse_value(schedule.pulses()[static_cast<std::size_t>(*mu)], t);
        }
        case CoefficientKind::Diff: {
            double sum = 0.0;
            for (const auto& p : schedule.pulses()) {
                if (schedule.op_of(p.index) == op) {
                    sum += pulse_extended(p, t, tail_tol);
                }
            }
            return sum;
        }
        case CoefficientKind::Trunc: {
            if (table == nullptr) {
                throw std::invalid_argument("truncated coefficients need a Fourier table");
            }
            const int big_m = table->truncation();
            Complex sum = 0.0;
            for (int m = -big_m; m <= big_m; ++m) {
                sum += table->coefficient(op, m) *
                       std::exp(Complex(0.0, 2.0 * kPi * m * t / table->period()));
            }
            if (std::abs(sum.imag()) > 1e-10) {
                throw std::logic_error("truncated coefficient function is not real");
            }
            return sum.real();
        }
    }
    throw std::logic_error("unhandled coefficient kind");
}

}  // namespace impc
