// Copyright 2026 the hypersim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace hypersim {

using Complex = std::complex<double>;

/// Physical parameters of one single-sided NV-cavity unit. All rates and
/// frequencies are angular and share one unit (the CLI works in multiples
/// of sqrt(kappa*gamma)).
struct CavityParams {
    double g = 0.0;      // NV-cavity coupling rate
    double kappa = 1.0;  // cavity intensity damping rate
    double gamma = 1.0;  // NV population decay rate
    double omega_p = 0.0;
    double omega_c = 0.0;
    double omega_0 = 0.0;

    bool resonant() const { return omega_p == omega_c && omega_c == omega_0; }

    void validate() const {
        if (!(kappa > 0.0)) throw std::invalid_argument("CavityParams: kappa must be > 0");
        if (!(gamma > 0.0)) throw std::invalid_argument("CavityParams: gamma must be > 0");
        if (g < 0.0) throw std::invalid_argument("CavityParams: g must be >= 0");
    }
};

/// Reflection amplitudes of the coupled ("hot", r) and uncoupled ("cold",
/// r0) cavity. Kept complex so detuned scans carry their phases.
struct ReflectionPair {
    Complex r{1.0, 0.0};
    Complex r0{-1.0, 0.0};

    bool ideal() const { return r == Complex{1.0, 0.0} && r0 == Complex{-1.0, 0.0}; }

    void validate() const {
        constexpr double kSlack = 1e-12;
        if (std::abs(r) > 1.0 + kSlack || std::abs(r0) > 1.0 + kSlack)
            throw std::invalid_argument("ReflectionPair: |r| and |r0| must not exceed 1");
    }

    static ReflectionPair make_ideal() { return ReflectionPair{}; }
};

/// Steady-state reflection coefficient of the single-sided NV-cavity unit
/// in the weak-excitation limit.
inline Complex reflection_coefficient(const CavityParams& p) {
    p.validate();
    const Complex dc{0.0, p.omega_c - p.omega_p};
    const Complex d0{p.gamma / 2.0, p.omega_0 - p.omega_p};
    const double g2 = p.g * p.g;
    return ((dc - p.kappa / 2.0) * d0 + g2) / ((dc + p.kappa / 2.0) * d0 + g2);
}

/// Reflection pair at exact resonance (omega_p = omega_c = omega_0) for a
/// coupling ratio x = g / sqrt(kappa * gamma): r = (4x^2 - 1) / (4x^2 + 1),
/// r0 = -1. Both real.
inline ReflectionPair resonant_pair(double coupling_ratio) {
    if (coupling_ratio < 0.0)
        throw std::invalid_argument("resonant_pair: coupling ratio must be >= 0");
    const double x2 = 4.0 * coupling_ratio * coupling_ratio;
    return ReflectionPair{Complex{(x2 - 1.0) / (x2 + 1.0), 0.0}, Complex{-1.0, 0.0}};
}

/// Joint photon-spin reflection factors on the ordered basis
/// {R|+>, R|->, L|+>, L|->}. Coupled combinations pick up r, uncoupled r0.
using SpinPhotonMap = std::array<Complex, 4>;

inline SpinPhotonMap spin_photon_map(const ReflectionPair& pair) {
    pair.validate();
    return SpinPhotonMap{pair.r, pair.r0, pair.r0, pair.r};
}

/// Largest singular value of a diagonal map; the reflection maps are
/// contractions, so this never exceeds 1 for a valid pair.
inline double operator_norm(const SpinPhotonMap& m) {
    double best = 0.0;
    for (const Complex& c : m) best = std::max(best, std::abs(c));
    return best;
}

inline bool is_unitary(const SpinPhotonMap& m, double tol = 1e-12) {
    for (const Complex& c : m)
        if (std::abs(std::abs(c) - 1.0) > tol) return false;
    return true;
}

}  // namespace hypersim
