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

#include <gtest/gtest.h>

#include <numbers>

#include "impc/pulses.hpp"
#include "oracles.hpp"

namespace impc {
namespace {

constexpr double kPi = std::numbers::pi;

PulseSchedule three_gate(double period = 3.0, double width = 0.2) {
    return PulseSchedule(Circuit(4, {{Hop{1}, 1.1}, {Impurity{}, -0.7}, {Hop{1}, 0.4}}), period, width);
}

TEST(Pulse, SymmetricAboutCenter) {
    const auto s = three_gate();
    for (const auto& p : s.pulses()) {
        for (double d : {0.01, 0.1, 0.37}) {
            EXPECT_NEAR(pulse_value(p, p.center + d), pulse_value(p, p.center - d), 1e-15);
        }
    }
}

TEST(Pulse, ValueMatchesMultiprecision) {
    const PulseSchedule s(Circuit(3, {{Hop{1}, kPi}}), 1.0, 0.1);
    const GaussianPulse& p = s.pulses()[0];
    EXPECT_DOUBLE_EQ(p.center, 0.5);
    using oracle::Real50;
    const Real50 pi = boost::math::constants::pi<Real50>();
    const Real50 c("0.1");
    const Real50 amp = pi / (2 * boost::multiprecision::erf(1 / (2 * boost::multiprecision::sqrt(Real50(2)) * c)));
    for (double t : {0.5, 0.45, 0.3, 0.05}) {
        const Real50 off = Real50(t) - Real50("0.5");
        const Real50 ref = amp / (boost::multiprecision::sqrt(2 * pi) * c) *
                           boost::multiprecision::exp(-off * off / (2 * c * c));
        EXPECT_NEAR(pulse_value(p, t), static_cast<double>(ref), 1e-13 * static_cast<double>(ref) + 1e-300);
    }
}

TEST(Pulse, SlotAreaIsHalfAngle) {
    for (double c : {0.05, 0.2, 0.6}) {
        const auto s = three_gate(3.0, c);
        for (const auto& p : s.pulses()) {
            const auto [lo, hi] = s.slot(p.index);
            const double area = oracle::integrate([&](double t) { return pulse_value(p, t); }, lo, hi);
            EXPECT_NEAR(area, p.theta / 2.0, 1e-10) << c;
        }
    }
}

TEST(Pulse, ExtensionPeriodicWithFullLineArea) {
    const auto s = three_gate(3.0, 0.9);
    for (const auto& p : s.pulses()) {
        for (double t : {0.0, 0.3, 1.7, 2.99}) {
            EXPECT_NEAR(pulse_extended(p, t + p.period), pulse_extended(p, t), 1e-14);
            EXPECT_NEAR(pulse_extended(p, t - 2.0 * p.period), pulse_extended(p, t), 1e-14);
        }
        const double area = oracle::integrate([&](double t) { return pulse_extended(p, t); }, 0.0, p.period);
        EXPECT_NEAR(area, p.amplitude, 1e-10);
        EXPECT_GE(std::abs(area), std::abs(p.theta) / 2.0 - 1e-12);
    }
}

TEST(Pulse, IndicatorTimesPulseBelowExtension) {
    const auto s = three_gate(3.0, 0.5);
    for (const auto& p : s.pulses()) {
        const auto [lo, hi] = s.slot(p.index);
        for (int i = 0; i < 300; ++i) {
            const double t = 3.0 * i / 300.0;
            const double windowed = (t >= lo && t < hi) ? pulse_value(p, t) : 0.0;
            const double ext = pulse_extended(p, t);
            EXPECT_LE(0.0, windowed * (p.theta >= 0 ? 1 : -1) + 1e-300);
            EXPECT_LE(std::abs(windowed), std::abs(ext) + 1e-15);
        }
    }
}

TEST(Schedule, SlotsAreHalfOpen) {
    const auto s = three_gate();
    EXPECT_EQ(s.slots(), 3);
    EXPECT_EQ(s.slot_at(0.0), 0);
    EXPECT_EQ(s.slot_at(1.0), 1);
    EXPECT_EQ(s.slot_at(2.0), 2);
    EXPECT_EQ(s.slot_at(2.999), 2);
    EXPECT_FALSE(s.slot_at(3.0));
    EXPECT_FALSE(s.slot_at(-1e-12));
    EXPECT_EQ(s.slot_boundaries(), (std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(s.operators().size(), 2u);
    EXPECT_THROW(PulseSchedule(Circuit(3, {}), 0.0, 0.1), std::invalid_argument);
    EXPECT_THROW(PulseSchedule(Circuit(3, {}), 1.0, -0.1), std::invalid_argument);
}

TEST(Coefficients, BcWindowsAndDiffAddsImages) {
    const auto s = three_gate();
    const OperatorId hop{Hop{1}};
    const OperatorId imp{Impurity{}};
    // t = 0.5 is slot 0, a hop slot.
    EXPECT_DOUBLE_EQ(coefficient_function(s, hop, 0.5, CoefficientKind::Bc),
                     pulse_value(s.pulses()[0], 0.5));
    EXPECT_EQ(coefficient_function(s, imp, 0.5, CoefficientKind::Bc), 0.0);
    EXPECT_EQ(coefficient_function(s, hop, 1.5, CoefficientKind::Bc), 0.0);
    const double diff = coefficient_function(s, hop, 0.5, CoefficientKind::Diff);
    EXPECT_NEAR(diff, pulse_extended(s.pulses()[0], 0.5) + pulse_extended(s.pulses()[2], 0.5), 1e-15);
    EXPECT_THROW(coefficient_function(s, hop, 0.5, CoefficientKind::Trunc), std::invalid_argument);
}

TEST(Coefficients, TruncatedAtZeroOrderIsMean) {
    const auto s = three_gate();
    const FourierTable table = build_fourier_table(s, 0);
    const OperatorId hop{Hop{1}};
    const double mean = (s.pulses()[0].amplitude + s.pulses()[2].amplitude) / s.period();
    for (double t : {0.0, 0.9, 2.2}) {
        EXPECT_NEAR(coefficient_function(s, hop, t, CoefficientKind::Trunc, &table), mean, 1e-15);
    }
}

TEST(Coefficients, TruncationConverges) {
    const auto s = three_gate(3.0, 0.2);
    const FourierTable table = build_fourier_table(s, 40);
    const OperatorId hop{Hop{1}};
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double t = 3.0 * i / 100.0;
        worst = std::max(worst, std::abs(coefficient_function(s, hop, t, CoefficientKind::Trunc, &table) -
                                         coefficient_function(s, hop, t, CoefficientKind::Diff)));
    }
    EXPECT_LE(worst, 1e-10);
    for (const auto& p : s.pulses()) {
        EXPECT_NEAR(pulse_truncated(p, 0.77, 40), pulse_extended(p, 0.77), 1e-10);
    }
}

TEST(Fourier, ClosedFormMatchesQuadratureAndMultiprecision) {
    const auto s = three_gate(3.0, 0.25);
    for (const auto& p : s.pulses()) {
        for (int m : {-7, -2, 0, 1, 5, 12}) {
            const Complex closed = fourier_coefficient_closed(p, m);
            EXPECT_LE(std::abs(closed - fourier_coefficient_quadrature(p, m, 1e-13)), 1e-11);
            const Complex ref = oracle::gaussian_coefficient(p.theta, 3, 3.0, 0.25, p.center, m);
            EXPECT_LE(std::abs(closed - ref), 1e-14);
            auto part = [&](auto trig) {
                return oracle::integrate([&](double t) { return trig(2 * kPi * m * t / 3.0) * pulse_extended(p, t); },
                                         0.0, 3.0, 1e-13, 12);
            };
            const Complex direct =
                Complex(part([](double x) { return std::cos(x); }), -part([](double x) { return std::sin(x); })) / 3.0;
            EXPECT_LE(std::abs(closed - direct), 1e-11);
        }
    }
}

TEST(Fourier, ConjugateSymmetryAndDecay) {
    const auto s = three_gate(3.0, 0.3);
    const FourierTable table = build_fourier_table(s, 30);
    EXPECT_LE(table.conjugate_symmetry_defect(), 1e-15);
    const OperatorId hop{Hop{1}};
    EXPECT_LT(std::abs(table.coefficient(hop, 30)), std::abs(table.coefficient(hop, 0)) * 1e-10);
    const auto& p = s.pulses()[1];
    for (int m = 1; m <= 30; ++m) {
        const double w = 2 * kPi * m / 3.0;
        const double bound = std::abs(p.amplitude) / 3.0 * std::exp(-w * w * 0.09 / 2);
        EXPECT_LE(std::abs(fourier_coefficient_closed(p, m)), bound * (1 + 1e-12));
    }
    EXPECT_THROW(table.coefficient(hop, 31), std::out_of_range);
    EXPECT_EQ(table.coefficient(OperatorId{Hop{2}}, 3), Complex(0.0));
}

TEST(Fourier, TableIsLinearInPulses) {
    const PulseSchedule both(Circuit(4, {{Hop{1}, 0.8}, {Hop{1}, -0.3}}), 2.0, 0.15);
    const FourierTable table = build_fourier_table(both, 6);
    for (int m = -6; m <= 6; ++m) {
        const Complex sum = fourier_coefficient_closed(both.pulses()[0], m) +
                            fourier_coefficient_closed(both.pulses()[1], m);
        EXPECT_LE(std::abs(table.coefficient(OperatorId{Hop{1}}, m) - sum), 1e-16);
    }
}

TEST(Fourier, AngleScalesCoefficients) {
    const PulseSchedule one(Circuit(3, {{Hop{1}, 0.5}}), 2.0, 0.15);
    const PulseSchedule two(Circuit(3, {{Hop{1}, 1.0}}), 2.0, 0.15);
    for (int m = 0; m <= 5; ++m) {
        EXPECT_NEAR(std::abs(fourier_coefficient_closed(two.pulses()[0], m) -
                             2.0 * fourier_coefficient_closed(one.pulses()[0], m)),
                    0.0, 1e-15);
    }
}

}  // namespace
}  // namespace impc
