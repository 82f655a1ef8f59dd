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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypersim/cavity.hpp"

namespace hypersim {

// ---------------------------------------------------------------------------
// Composite space of three dual-DOF photons and four NV spins.
//
// Amplitude tensor index order (slowest to fastest), fixed as part of the
// serialization contract:
//   pol_a (2), spat_a (2), pol_b (2), spat_b (2), pol_c (2), spat_c (3),
//   s1 (2), s2 (2), s3 (2), s4 (2)
// Polarization: R = 0, L = 1. Spatial: first mode = 0. Spin: |+> = 0, |-> = 1.
// ---------------------------------------------------------------------------

enum class Photon : int { a = 0, b = 1, c = 2 };

constexpr int kPolR = 0;
constexpr int kPolL = 1;
constexpr int kSpinPlus = 0;
constexpr int kSpinMinus = 1;

constexpr int kNumSpins = 4;
constexpr std::array<int, 3> kSpatialDim = {2, 2, 3};

constexpr int kDim = 2 * 2 * 2 * 2 * 2 * 3 * 16;  // 1536

// Strides, fastest index last.
constexpr int kStrideS4 = 1;
constexpr int kStrideS3 = 2;
constexpr int kStrideS2 = 4;
constexpr int kStrideS1 = 8;
constexpr int kStrideSpatC = 16;
constexpr int kStridePolC = 48;
constexpr int kStrideSpatB = 96;
constexpr int kStridePolB = 192;
constexpr int kStrideSpatA = 384;
constexpr int kStridePolA = 768;

constexpr std::array<int, 3> kPolStride = {kStridePolA, kStridePolB, kStridePolC};
constexpr std::array<int, 3> kSpatStride = {kStrideSpatA, kStrideSpatB, kStrideSpatC};
constexpr std::array<int, 4> kSpinStride = {kStrideS1, kStrideS2, kStrideS3, kStrideS4};

constexpr int state_index(int pa, int sa, int pb, int sb, int pc, int sc,
                          int s1, int s2, int s3, int s4) {
    return pa * kStridePolA + sa * kStrideSpatA + pb * kStridePolB + sb * kStrideSpatB +
           pc * kStridePolC + sc * kStrideSpatC + s1 * kStrideS1 + s2 * kStrideS2 +
           s3 * kStrideS3 + s4 * kStrideS4;
}

/// Complex amplitude tensor over the full photon+spin space. A value type;
/// squared norm below 1 signals photon loss.
struct HyperState {
    std::vector<Complex> amp;

    HyperState() : amp(kDim, Complex{0.0, 0.0}) {}

    Complex& operator[](int i) { return amp[static_cast<size_t>(i)]; }
    const Complex& operator[](int i) const { return amp[static_cast<size_t>(i)]; }

    double squared_norm() const {
        double s = 0.0;
        for (const Complex& c : amp) s += std::norm(c);
        return s;
    }
};

namespace detail {

// Precomputed index decompositions; element loops over the full tensor use
// these instead of per-index division.
struct IndexTable {
    std::array<std::array<uint8_t, kDim>, 3> pol{};
    std::array<std::array<uint8_t, kDim>, 3> spat{};
    std::array<std::array<uint8_t, kDim>, 4> spin{};
};

inline const IndexTable& index_table() {
    static const IndexTable table = [] {
        IndexTable t;
        for (int idx = 0; idx < kDim; ++idx) {
            for (int p = 0; p < 3; ++p) {
                t.pol[p][static_cast<size_t>(idx)] =
                    static_cast<uint8_t>((idx / kPolStride[p]) % 2);
                t.spat[p][static_cast<size_t>(idx)] = static_cast<uint8_t>(
                    (idx / kSpatStride[p]) % kSpatialDim[p]);
            }
            for (int j = 0; j < 4; ++j)
                t.spin[j][static_cast<size_t>(idx)] =
                    static_cast<uint8_t>((idx / kSpinStride[j]) % 2);
        }
        return t;
    }();
    return table;
}

}  // namespace detail

inline Complex inner_product(const HyperState& lhs, const HyperState& rhs) {
    Complex s{0.0, 0.0};
    for (int i = 0; i < kDim; ++i) s += std::conj(lhs[i]) * rhs[i];
    return s;
}

inline double norm(const HyperState& s) { return std::sqrt(s.squared_norm()); }

inline HyperState normalize(const HyperState& s) {
    const double n = norm(s);
    if (n <= 0.0) throw std::invalid_argument("normalize: zero-norm state");
    HyperState out = s;
    for (Complex& c : out.amp) c /= n;
    return out;
}

// ---------------------------------------------------------------------------
// Input preparation
// ---------------------------------------------------------------------------

/// Six angles parametrizing a product input; each photonic coefficient pair
/// is (cos, sin) of its angle.
struct AngleTuple {
    double alpha = 0.0;  // photon a polarization
    double beta = 0.0;   // photon b polarization
    double delta = 0.0;  // photon c polarization
    double sigma = 0.0;  // photon a spatial
    double zeta = 0.0;   // photon b spatial
    double xi = 0.0;     // photon c spatial
};

/// Normalized coefficient pairs of the three-photon product input. Photon c
/// starts in spatial modes c1/c2 only.
struct InputSpec {
    Complex alpha1{1.0, 0.0}, alpha2{0.0, 0.0};
    Complex beta1{1.0, 0.0}, beta2{0.0, 0.0};
    Complex delta1{1.0, 0.0}, delta2{0.0, 0.0};
    Complex sigma1{1.0, 0.0}, sigma2{0.0, 0.0};
    Complex zeta1{1.0, 0.0}, zeta2{0.0, 0.0};
    Complex xi1{1.0, 0.0}, xi2{0.0, 0.0};

    static InputSpec from_angles(const AngleTuple& t) {
        InputSpec s;
        s.alpha1 = std::cos(t.alpha);
        s.alpha2 = std::sin(t.alpha);
        s.beta1 = std::cos(t.beta);
        s.beta2 = std::sin(t.beta);
        s.delta1 = std::cos(t.delta);
        s.delta2 = std::sin(t.delta);
        s.sigma1 = std::cos(t.sigma);
        s.sigma2 = std::sin(t.sigma);
        s.zeta1 = std::cos(t.zeta);
        s.zeta2 = std::sin(t.zeta);
        s.xi1 = std::cos(t.xi);
        s.xi2 = std::sin(t.xi);
        return s;
    }

    void validate(double tol = 1e-9) const {
        auto check = [tol](Complex x1, Complex x2, const char* name) {
            if (std::abs(std::norm(x1) + std::norm(x2) - 1.0) > tol) {
                throw std::invalid_argument(std::string("InputSpec: pair ") + name +
                                            " is not normalized");
            }
        };
        check(alpha1, alpha2, "alpha");
        check(beta1, beta2, "beta");
        check(delta1, delta2, "delta");
        check(sigma1, sigma2, "sigma");
        check(zeta1, zeta2, "zeta");
        check(xi1, xi2, "xi");
    }
};

/// Single-spin preparations selectable per NV.
enum class SpinInit {
    plus,        // |+>
    minus,       // |->
    plus_minus,  // (|+> + |->)/sqrt(2)
    minus_plus,  // (|+> - |->)/sqrt(2)
};

/// Standard register preparation: NV1 and NV3 in (|+> + |->)/sqrt(2),
/// NV2 and NV4 in (|+> - |->)/sqrt(2).
constexpr std::array<SpinInit, 4> kStandardSpinInit = {
    SpinInit::plus_minus, SpinInit::minus_plus, SpinInit::plus_minus, SpinInit::minus_plus};

inline std::array<Complex, 2> spin_init_amplitudes(SpinInit init) {
    const double invsqrt2 = 1.0 / std::sqrt(2.0);
    switch (init) {
        case SpinInit::plus: return {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
        case SpinInit::minus: return {Complex{0.0, 0.0}, Complex{1.0, 0.0}};
        case SpinInit::plus_minus: return {Complex{invsqrt2, 0.0}, Complex{invsqrt2, 0.0}};
        case SpinInit::minus_plus: return {Complex{invsqrt2, 0.0}, Complex{-invsqrt2, 0.0}};
    }
    throw std::invalid_argument("spin_init_amplitudes: bad SpinInit");
}

/// Product state of the three photons and the four NV spins. Norm 1, c3
/// amplitude 0.
inline HyperState product_input(const InputSpec& spec,
                                const std::array<SpinInit, 4>& spins = kStandardSpinInit) {
    spec.validate();
    std::array<std::array<Complex, 2>, 4> e;
    for (int j = 0; j < 4; ++j) e[j] = spin_init_amplitudes(spins[j]);

    const std::array<Complex, 2> pa = {spec.alpha1, spec.alpha2};
    const std::array<Complex, 2> sa = {spec.sigma1, spec.sigma2};
    const std::array<Complex, 2> pb = {spec.beta1, spec.beta2};
    const std::array<Complex, 2> sb = {spec.zeta1, spec.zeta2};
    const std::array<Complex, 2> pc = {spec.delta1, spec.delta2};
    const std::array<Complex, 3> sc = {spec.xi1, spec.xi2, Complex{0.0, 0.0}};

    HyperState out;
    for (int ipa = 0; ipa < 2; ++ipa)
        for (int isa = 0; isa < 2; ++isa)
            for (int ipb = 0; ipb < 2; ++ipb)
                for (int isb = 0; isb < 2; ++isb)
                    for (int ipc = 0; ipc < 2; ++ipc)
                        for (int isc = 0; isc < 3; ++isc) {
                            const Complex photonic = pa[ipa] * sa[isa] * pb[ipb] * sb[isb] *
                                                     pc[ipc] * sc[isc];
                            if (photonic == Complex{0.0, 0.0}) continue;
                            for (int s1 = 0; s1 < 2; ++s1)
                                for (int s2 = 0; s2 < 2; ++s2)
                                    for (int s3 = 0; s3 < 2; ++s3)
                                        for (int s4 = 0; s4 < 2; ++s4)
                                            out[state_index(ipa, isa, ipb, isb, ipc, isc,
                                                            s1, s2, s3, s4)] =
                                                photonic * e[0][s1] * e[1][s2] * e[2][s3] *
                                                e[3][s4];
                        }
    return out;
}

// ---------------------------------------------------------------------------
// Spatial filters and low-level iteration helpers
// ---------------------------------------------------------------------------

/// Subset of one photon's spatial modes, as a bitmask over mode indices.
struct SpatialFilter {
    uint8_t mask = 0;

    static SpatialFilter all(Photon p) {
        SpatialFilter f;
        f.mask = static_cast<uint8_t>((1u << kSpatialDim[static_cast<int>(p)]) - 1u);
        return f;
    }
    static SpatialFilter single(int mode) {
        SpatialFilter f;
        f.mask = static_cast<uint8_t>(1u << mode);
        return f;
    }
    static SpatialFilter of(std::initializer_list<int> modes) {
        SpatialFilter f;
        for (int m : modes) f.mask = static_cast<uint8_t>(f.mask | (1u << m));
        return f;
    }
    bool contains(int mode) const { return (mask >> mode) & 1u; }
    bool empty() const { return mask == 0; }
    bool operator==(const SpatialFilter& o) const { return mask == o.mask; }

    void validate(Photon p) const {
        if (empty()) throw std::invalid_argument("SpatialFilter: empty filter");
        if (mask >= (1u << kSpatialDim[static_cast<int>(p)]))
            throw std::invalid_argument("SpatialFilter: mode out of range for photon");
    }
};

// ---------------------------------------------------------------------------
// Optical and spin elements
// ---------------------------------------------------------------------------

/// Polarization Hadamard (half-wave plate at 22.5 deg):
/// |R> -> (|R>+|L>)/sqrt(2), |L> -> (|R>-|L>)/sqrt(2), restricted to the
/// filtered spatial modes.
inline void apply_hwp_h(HyperState& state, Photon p, SpatialFilter filter) {
    filter.validate(p);
    const int ip = static_cast<int>(p);
    const int pol_stride = kPolStride[ip];
    const double invsqrt2 = 1.0 / std::sqrt(2.0);
    const auto& pol = detail::index_table().pol[static_cast<size_t>(ip)];
    const auto& spat = detail::index_table().spat[static_cast<size_t>(ip)];

    for (int idx = 0; idx < kDim; ++idx) {
        if (pol[static_cast<size_t>(idx)] != 0) continue;
        if (!filter.contains(spat[static_cast<size_t>(idx)])) continue;
        Complex& r = state[idx];
        Complex& l = state[idx + pol_stride];
        const Complex nr = (r + l) * invsqrt2;
        const Complex nl = (r - l) * invsqrt2;
        r = nr;
        l = nl;
    }
}

/// Polarization bit flip (half-wave plate at 45 deg): |R> <-> |L> on the
/// filtered spatial modes.
inline void apply_hwp_x(HyperState& state, Photon p, SpatialFilter filter) {
    filter.validate(p);
    const int ip = static_cast<int>(p);
    const int pol_stride = kPolStride[ip];
    const auto& pol = detail::index_table().pol[static_cast<size_t>(ip)];
    const auto& spat = detail::index_table().spat[static_cast<size_t>(ip)];

    for (int idx = 0; idx < kDim; ++idx) {
        if (pol[static_cast<size_t>(idx)] != 0) continue;
        if (!filter.contains(spat[static_cast<size_t>(idx)])) continue;
        std::swap(state[idx], state[idx + pol_stride]);
    }
}

/// Balanced non-polarizing beam splitter on an ordered pair of one photon's
/// spatial modes: |m1> -> (|m1>+|m2>)/sqrt(2), |m2> -> (|m1>-|m2>)/sqrt(2).
/// This convention is an involution.
inline void apply_bs(HyperState& state, Photon p, int mode1, int mode2) {
    const int ip = static_cast<int>(p);
    const int spat_dim = kSpatialDim[ip];
    if (mode1 == mode2) throw std::invalid_argument("apply_bs: identical modes");
    if (mode1 < 0 || mode2 < 0 || mode1 >= spat_dim || mode2 >= spat_dim)
        throw std::invalid_argument("apply_bs: mode out of range");
    const int spat_stride = kSpatStride[ip];
    const double invsqrt2 = 1.0 / std::sqrt(2.0);
    const auto& spat_of = detail::index_table().spat[static_cast<size_t>(ip)];

    for (int idx = 0; idx < kDim; ++idx) {
        if (spat_of[static_cast<size_t>(idx)] != mode1) continue;
        Complex& x = state[idx];
        Complex& y = state[idx + (mode2 - mode1) * spat_stride];
        const Complex nx = (x + y) * invsqrt2;
        const Complex ny = (x - y) * invsqrt2;
        x = nx;
        y = ny;
    }
}

/// Polarization wiring of a cavity block. The photon-side PBS geometry
/// decides which polarization component reaches the cavity:
///   direct  - the R component reflects off the cavity, L bypasses untouched;
///   x_conj  - X plates fold the L component onto the cavity as an
///             R-polarized packet alongside the direct R component, so both
///             polarizations pick up the same spin-conditioned factor;
///   both    - both components reflect natively, each per its own coupling.
enum class Routing { direct, x_conj, both };

/// One pass of the filtered amplitudes of photon p off the cavity hosting
/// spin nv_index (1-based). A contraction; norm is preserved exactly when
/// |r| = |r0| = 1.
inline void apply_cavity_encounter(HyperState& state, Photon p, int nv_index,
                                   SpatialFilter filter, Routing routing,
                                   const ReflectionPair& pair) {
    filter.validate(p);
    if (nv_index < 1 || nv_index > kNumSpins)
        throw std::invalid_argument("apply_cavity_encounter: nv_index out of range");
    pair.validate();

    const int ip = static_cast<int>(p);

    // factor[pol][spin]
    Complex factor[2][2];
    switch (routing) {
        case Routing::direct:
            factor[kPolR][kSpinPlus] = pair.r;
            factor[kPolR][kSpinMinus] = pair.r0;
            factor[kPolL][kSpinPlus] = Complex{1.0, 0.0};
            factor[kPolL][kSpinMinus] = Complex{1.0, 0.0};
            break;
        case Routing::x_conj:
            factor[kPolR][kSpinPlus] = pair.r;
            factor[kPolR][kSpinMinus] = pair.r0;
            factor[kPolL][kSpinPlus] = pair.r;
            factor[kPolL][kSpinMinus] = pair.r0;
            break;
        case Routing::both:
            factor[kPolR][kSpinPlus] = pair.r;
            factor[kPolR][kSpinMinus] = pair.r0;
            factor[kPolL][kSpinPlus] = pair.r0;
            factor[kPolL][kSpinMinus] = pair.r;
            break;
    }

    const auto& pol_of = detail::index_table().pol[static_cast<size_t>(ip)];
    const auto& spat_of = detail::index_table().spat[static_cast<size_t>(ip)];
    const auto& spin_of = detail::index_table().spin[static_cast<size_t>(nv_index - 1)];
    for (int idx = 0; idx < kDim; ++idx) {
        if (!filter.contains(spat_of[static_cast<size_t>(idx)])) continue;
        state[idx] *= factor[pol_of[static_cast<size_t>(idx)]]
                            [spin_of[static_cast<size_t>(idx)]];
    }
}

/// Microwave pi/2 pulse on one NV: |+> -> (|+>+|->)/sqrt(2),
/// |-> -> (|+>-|->)/sqrt(2).
inline void apply_nv_hadamard(HyperState& state, int nv_index) {
    if (nv_index < 1 || nv_index > kNumSpins)
        throw std::invalid_argument("apply_nv_hadamard: nv_index out of range");
    const int stride = kSpinStride[nv_index - 1];
    const double invsqrt2 = 1.0 / std::sqrt(2.0);
    const auto& spin_of = detail::index_table().spin[static_cast<size_t>(nv_index - 1)];
    for (int idx = 0; idx < kDim; ++idx) {
        if (spin_of[static_cast<size_t>(idx)] != 0) continue;
        Complex& plus = state[idx];
        Complex& minus = state[idx + stride];
        const Complex np = (plus + minus) * invsqrt2;
        const Complex nm = (plus - minus) * invsqrt2;
        plus = np;
        minus = nm;
    }
}

/// Phase shifter exp(i*phase) on a single spatial mode of one photon. A
/// phase of +-pi is applied as an exact sign flip.
inline void apply_spatial_phase(HyperState& state, Photon p, int mode, double phase) {
    const int ip = static_cast<int>(p);
    if (mode < 0 || mode >= kSpatialDim[ip])
        throw std::invalid_argument("apply_spatial_phase: mode out of range");
    const Complex f = (phase == M_PI || phase == -M_PI) ? Complex{-1.0, 0.0}
                                                        : std::polar(1.0, phase);
    const auto& spat_of = detail::index_table().spat[static_cast<size_t>(ip)];
    for (int idx = 0; idx < kDim; ++idx) {
        if (spat_of[static_cast<size_t>(idx)] != mode) continue;
        state[idx] *= f;
    }
}

/// sign * (|R><R| - |L><L|) on one photon's polarization; sign in {+1, -1}.
inline void apply_pol_sigma_z(HyperState& state, Photon p, int sign) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("apply_pol_sigma_z: sign must be +1 or -1");
    const double s = static_cast<double>(sign);
    const auto& pol_of = detail::index_table().pol[static_cast<size_t>(static_cast<int>(p))];
    for (int idx = 0; idx < kDim; ++idx) {
        state[idx] *= (pol_of[static_cast<size_t>(idx)] == kPolR ? s : -s);
    }
}

/// Removes the amplitude sitting in one spatial mode (the mode's path leaves
/// the setup). Norm decreases by the discarded weight.
inline double apply_mode_dump(HyperState& state, Photon p, int mode) {
    const int ip = static_cast<int>(p);
    if (mode < 0 || mode >= kSpatialDim[ip])
        throw std::invalid_argument("apply_mode_dump: mode out of range");
    double discarded = 0.0;
    const auto& spat_of = detail::index_table().spat[static_cast<size_t>(ip)];
    for (int idx = 0; idx < kDim; ++idx) {
        if (spat_of[static_cast<size_t>(idx)] != mode) continue;
        discarded += std::norm(state[idx]);
        state[idx] = Complex{0.0, 0.0};
    }
    return discarded;
}

// ---------------------------------------------------------------------------
// NV spin measurement in the rotated basis |+'> = (|+>+|->)/sqrt(2),
// |-'> = (|+>-|->)/sqrt(2)
// ---------------------------------------------------------------------------

constexpr int kOutcomePlusPrime = 0;
constexpr int kOutcomeMinusPrime = 1;

/// Projects spin nv_index onto |+'> or |-'> without renormalizing. The spin
/// is left in the measured eigenstate. Returns the squared norm of the
/// projected state.
inline double project_nv(HyperState& state, int nv_index, int outcome) {
    if (nv_index < 1 || nv_index > kNumSpins)
        throw std::invalid_argument("project_nv: nv_index out of range");
    if (outcome != kOutcomePlusPrime && outcome != kOutcomeMinusPrime)
        throw std::invalid_argument("project_nv: bad outcome");
    const int stride = kSpinStride[nv_index - 1];
    const double sign = outcome == kOutcomePlusPrime ? 1.0 : -1.0;
    double sq = 0.0;
    const auto& spin_of = detail::index_table().spin[static_cast<size_t>(nv_index - 1)];
    for (int idx = 0; idx < kDim; ++idx) {
        if (spin_of[static_cast<size_t>(idx)] != 0) continue;
        Complex& plus = state[idx];
        Complex& minus = state[idx + stride];
        // <pm'|psi> on this pair is (a+ +- a-)/sqrt(2); the projected pair is
        // that overlap times (|+> +- |->)/sqrt(2).
        const Complex half = (plus + sign * minus) * 0.5;
        sq += 2.0 * std::norm(half);
        plus = half;
        minus = sign * half;
    }
    return sq;
}

struct MeasurementResult {
    int outcome = kOutcomePlusPrime;
    double probability = 0.0;  // relative to the pre-measurement squared norm
    HyperState state;          // renormalized collapsed branch
};

/// Measures spin nv_index in the |+'>/|-'> basis. `forced_outcome` selects a
/// branch deterministically; otherwise `unit_random` in [0,1) samples one.
inline MeasurementResult measure_nv(const HyperState& state, int nv_index,
                                    std::optional<int> forced_outcome,
                                    double unit_random = 0.0) {
    const double pre = state.squared_norm();
    if (pre <= 0.0) throw std::invalid_argument("measure_nv: zero-norm state");

    HyperState plus_branch = state;
    const double p_plus_abs = project_nv(plus_branch, nv_index, kOutcomePlusPrime);
    const double p_plus = p_plus_abs / pre;

    int outcome;
    if (forced_outcome.has_value()) {
        outcome = *forced_outcome;
    } else {
        outcome = unit_random < p_plus ? kOutcomePlusPrime : kOutcomeMinusPrime;
    }

    MeasurementResult res;
    res.outcome = outcome;
    if (outcome == kOutcomePlusPrime) {
        res.probability = p_plus;
        res.state = normalize(plus_branch);
    } else {
        HyperState minus_branch = state;
        const double p_minus_abs = project_nv(minus_branch, nv_index, kOutcomeMinusPrime);
        res.probability = p_minus_abs / pre;
        res.state = normalize(minus_branch);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Snapshot serialization: "pa sa pb sb pc sc s1 s2 s3 s4 re im" per nonzero
// amplitude; amplitudes below 1e-15 in magnitude are omitted.
// ---------------------------------------------------------------------------

inline std::string snapshot_to_text(const HyperState& state, double threshold = 1e-15) {
    std::ostringstream os;
    os.precision(17);
    os << "# pol_a spat_a pol_b spat_b pol_c spat_c s1 s2 s3 s4 re im\n";
    for (int pa = 0; pa < 2; ++pa)
        for (int sa = 0; sa < 2; ++sa)
            for (int pb = 0; pb < 2; ++pb)
                for (int sb = 0; sb < 2; ++sb)
                    for (int pc = 0; pc < 2; ++pc)
                        for (int sc = 0; sc < 3; ++sc)
                            for (int s1 = 0; s1 < 2; ++s1)
                                for (int s2 = 0; s2 < 2; ++s2)
                                    for (int s3 = 0; s3 < 2; ++s3)
                                        for (int s4 = 0; s4 < 2; ++s4) {
                                            const Complex c = state[state_index(
                                                pa, sa, pb, sb, pc, sc, s1, s2, s3, s4)];
                                            if (std::abs(c) < threshold) continue;
                                            os << pa << ' ' << sa << ' ' << pb << ' ' << sb
                                               << ' ' << pc << ' ' << sc << ' ' << s1 << ' '
                                               << s2 << ' ' << s3 << ' ' << s4 << ' '
                                               << c.real() << ' ' << c.imag() << '\n';
                                        }
    return os.str();
}

}  // namespace hypersim
