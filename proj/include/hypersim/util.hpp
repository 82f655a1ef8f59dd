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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace hypersim {

/// Counter-friendly 64-bit generator; a fixed seed gives the same stream on
/// every platform and worker count.
struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// length, so sums are bit-identical regardless of how the values were
/// produced or partitioned across workers.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

/// Phase factor that aligns `other` onto `ref`, chosen from the
/// largest-magnitude amplitude of `ref` (lowest index on ties).
inline std::complex<double> alignment_phase(std::span<const std::complex<double>> ref,
                                            std::span<const std::complex<double>> other) {
    size_t best = 0;
    double best_mag = -1.0;
    for (size_t i = 0; i < ref.size(); ++i) {
        const double m = std::abs(ref[i]);
        if (m > best_mag + 1e-15) {
            best_mag = m;
            best = i;
        }
    }
    const std::complex<double> num = ref[best] * std::conj(other[best]);
    const double mag = std::abs(num);
    if (mag == 0.0) return {1.0, 0.0};
    return num / mag;
}

}  // namespace hypersim
