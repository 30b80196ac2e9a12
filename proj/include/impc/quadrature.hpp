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

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

namespace impc {

class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

template <typename T>
struct QuadratureResult {
    T value{};
    double error = 0.0;
    int intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
template <typename C>
double magnitude(const C& z) {
    return std::abs(z);
}

template <typename T>
struct Panel {
    double a;
    double b;
    T value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename T, typename F>
Panel<T> gk15(F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(mid);
    T kronrod = fc * kKronrodWeights[7];
    T gauss = fc * kGaussWeights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[static_cast<std::size_t>(i)];
        const T sum = f(mid - dx) + f(mid + dx);
        kronrod += sum * kKronrodWeights[static_cast<std::size_t>(i)];
        if (i % 2 == 1) {
            gauss += sum * kGaussWeights[static_cast<std::size_t>(i / 2)];
        }
    }
    return Panel<T>{a, b, kronrod * half, magnitude(T((kronrod - gauss) * half))};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a, b] with
/// an absolute error target. `breakpoints` (inside (a, b)) seed the initial
/// panels so kinks and narrow peaks start on panel edges. Throws
/// ConvergenceError once `max_intervals` panels fail to reach `abs_tol`.
template <typename T, typename F>
QuadratureResult<T> integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                       std::span<const double> breakpoints = {},
                                       int max_intervals = 20000) {
    std::vector<double> edges{a};
    for (double x : breakpoints) {
        if (x > a && x < b) {
            edges.push_back(x);
        }
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<detail::Panel<T>> heap;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        heap.push(detail::gk15<T>(f, edges[i], edges[i + 1]));
    }
    auto totals = [&heap] {
        auto copy = heap;
        T value{};
        double error = 0.0;
        std::vector<detail::Panel<T>> panels;
        while (!copy.empty()) {
            panels.push_back(copy.top());
            copy.pop();
        }
        // Sum by position so the result does not depend on error ordering.
        std::sort(panels.begin(), panels.end(),
                  [](const auto& x, const auto& y) { return x.a < y.a; });
        for (const auto& p : panels) {
            value += p.value;
            error += p.error;
        }
        return std::pair{value, error};
    };

    double error = 0.0;
    {
        auto copy = heap;
        while (!copy.empty()) {
            error += copy.top().error;
            copy.pop();
        }
    }
    while (error > abs_tol) {
        if (static_cast<int>(heap.size()) >= max_intervals) {
            throw ConvergenceError("adaptive quadrature did not reach tolerance");
        }
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw ConvergenceError("adaptive quadrature ran out of resolution");
        }
        const auto left = detail::gk15<T>(f, worst.a, mid);
        const auto right = detail::gk15<T>(f, mid, worst.b);
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if (error <= abs_tol) {
            // Re-sum to shed accumulated rounding in the running total.
            error = totals().second;
        }
    }
    const auto [value, total_error] = totals();
    return QuadratureResult<T>{value, total_error, static_cast<int>(heap.size())};
}

}  // namespace impc
