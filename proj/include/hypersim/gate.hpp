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
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypersim/cavity.hpp"
#include "hypersim/hilbert.hpp"
#include "hypersim/util.hpp"

namespace hypersim {

// ---------------------------------------------------------------------------
// Script elements
//
// Besides the primitive plates, splitters and cavity passes, two composite
// elements model the polarization-target stage of the circuit. There, a
// CPBS splits each spatial arm of photon c into a bypass packet (the R
// component, untouched until the end) and an inner packet (the L component)
// that traverses H plates and cavities; the two packets only recombine at
// the final PBS pair, where the inner packet's residual R component leaves
// through the unused port.
//
// The inner packet needs two amplitudes per arm while it is in flight. They
// are stored in the photon-c slots as follows: the (L, arm) slot carries the
// polarization component the lossless circuit would produce for the current
// spin branch, and the otherwise unused c3 slots ((R, c3) for arm c1,
// (L, c3) for arm c2) carry the residual component, which is zero whenever
// r = 1 and r0 = -1 exactly.
// ---------------------------------------------------------------------------

enum class ElementKind {
    hwp_h,          // polarization Hadamard plate on filtered modes
    hwp_x,          // polarization bit-flip plate on filtered modes
    bs,             // balanced beam splitter on a spatial mode pair
    cavity,         // one cavity pass (photon, NV, filter, routing)
    nv_hadamard,    // microwave pi/2 pulse on one NV
    nv_split,       // CPBS split + H/cavity/H on the inner packets (photon c)
    nv_merge,       // cavity/H/cavity/H on the inner packets + final merge
    dump,           // terminate a spatial mode's path
    spatial_phase,  // phase shifter on one spatial mode
    pol_sigma_z,    // sign * (|R><R| - |L><L|) on one photon
};

struct Element {
    ElementKind kind = ElementKind::hwp_h;
    int step = 0;  // checkpoint group; 0 = untagged
    Photon photon = Photon::a;
    SpatialFilter filter{};   // hwp_h, hwp_x, cavity
    int mode1 = 0;            // bs, dump, spatial_phase
    int mode2 = 0;            // bs
    int nv = 0;               // cavity, nv_hadamard, nv_split, nv_merge (second cavity)
    int nv_first = 0;         // nv_merge (first cavity of the chain)
    Routing routing = Routing::direct;
    double phase = 0.0;       // spatial_phase
    int sign = 1;             // pol_sigma_z

    bool operator==(const Element& o) const {
        return kind == o.kind && step == o.step && photon == o.photon &&
               filter == o.filter && mode1 == o.mode1 && mode2 == o.mode2 && nv == o.nv &&
               nv_first == o.nv_first && routing == o.routing && phase == o.phase &&
               sign == o.sign;
    }
};

/// Ordered element sequence plus measurement and feed-forward directives.
struct CircuitScript {
    std::vector<Element> elements;
    std::vector<int> measurement_order;  // NV indices, in measurement order
    bool feed_forward = false;
    std::array<SpinInit, 4> spin_init = kStandardSpinInit;

    bool operator==(const CircuitScript& o) const {
        return elements == o.elements && measurement_order == o.measurement_order &&
               feed_forward == o.feed_forward && spin_init == o.spin_init;
    }
};

// ---------------------------------------------------------------------------
// Composite elements for the polarization-target interferometers
// ---------------------------------------------------------------------------

namespace detail {

inline int scratch_index_for(int idx_pol_l_arm, int arm) {
    // idx has pol_c = L and spat_c = arm; the scratch slot is (R, c3) for
    // arm 0 and (L, c3) for arm 1.
    if (arm == 0) return idx_pol_l_arm - kStridePolC + 2 * kStrideSpatC;
    return idx_pol_l_arm + 1 * kStrideSpatC;
}

}  // namespace detail

/// CPBS split of photon c's arms c1 and c2, followed by the H -> cavity -> H
/// chain on each inner packet, entangling with spin `nv`.
inline void apply_nv_split(HyperState& state, int nv, const ReflectionPair& pair) {
    if (nv < 1 || nv > kNumSpins)
        throw std::invalid_argument("apply_nv_split: nv index out of range");
    pair.validate();
    const auto& pol_of = hypersim::detail::index_table().pol[2];
    const auto& spat_of = hypersim::detail::index_table().spat[2];
    const auto& spin_of = hypersim::detail::index_table().spin[static_cast<size_t>(nv - 1)];

    for (int arm = 0; arm < 2; ++arm) {
        for (int idx = 0; idx < kDim; ++idx) {
            if (pol_of[static_cast<size_t>(idx)] != kPolL) continue;
            if (spat_of[static_cast<size_t>(idx)] != arm) continue;
            const int scratch = detail::scratch_index_for(idx, arm);
            if (std::abs(state[scratch]) > 1e-12)
                throw std::logic_error("apply_nv_split: inner-packet slot already occupied");
            const Complex x = state[idx];
            const int spin = spin_of[static_cast<size_t>(idx)];
            const Complex d = spin == kSpinPlus ? pair.r0 : pair.r;
            const Complex inner_r = (1.0 - d) * 0.5 * x;
            const Complex inner_l = (1.0 + d) * 0.5 * x;
            if (spin == kSpinPlus) {
                state[idx] = inner_r;
                state[scratch] = inner_l;
            } else {
                state[idx] = inner_l;
                state[scratch] = inner_r;
            }
        }
    }
}

/// Continuation and closure of the split: cavity pass off spin `nv_first`,
/// H plate, cavity pass off spin `nv_second`, H plate, then the final PBS
/// merge. The inner packet's R component exits the unused port and is
/// discarded; the bypass R and the inner L recombine into the arm.
inline void apply_nv_merge(HyperState& state, int nv_first, int nv_second,
                           const ReflectionPair& pair) {
    if (nv_first < 1 || nv_first > kNumSpins || nv_second < 1 || nv_second > kNumSpins)
        throw std::invalid_argument("apply_nv_merge: nv index out of range");
    pair.validate();
    const auto& pol_of = hypersim::detail::index_table().pol[2];
    const auto& spat_of = hypersim::detail::index_table().spat[2];
    const auto& first_of =
        hypersim::detail::index_table().spin[static_cast<size_t>(nv_first - 1)];
    const auto& second_of =
        hypersim::detail::index_table().spin[static_cast<size_t>(nv_second - 1)];

    for (int arm = 0; arm < 2; ++arm) {
        for (int idx = 0; idx < kDim; ++idx) {
            if (pol_of[static_cast<size_t>(idx)] != kPolL) continue;
            if (spat_of[static_cast<size_t>(idx)] != arm) continue;
            const int scratch = detail::scratch_index_for(idx, arm);
            const int spin_second = second_of[static_cast<size_t>(idx)];
            const int spin_first = first_of[static_cast<size_t>(idx)];
            const Complex d_second = spin_second == kSpinPlus ? pair.r0 : pair.r;
            const Complex d_first = spin_first == kSpinPlus ? pair.r0 : pair.r;

            const Complex slot = state[idx];
            const Complex scr = state[scratch];
            const Complex phys_r = spin_second == kSpinPlus ? slot : scr;
            const Complex phys_l = spin_second == kSpinPlus ? scr : slot;

            state[idx] = (1.0 - d_second) * 0.5 * phys_r +
                         d_first * (1.0 + d_second) * 0.5 * phys_l;
            state[scratch] = Complex{0.0, 0.0};
        }
    }
}

// ---------------------------------------------------------------------------
// Element application
// ---------------------------------------------------------------------------

using PairSet = std::array<ReflectionPair, 4>;

inline PairSet shared_pair(const ReflectionPair& p) { return PairSet{p, p, p, p}; }

inline void apply_element(HyperState& state, const Element& e, const PairSet& pairs) {
    switch (e.kind) {
        case ElementKind::hwp_h: apply_hwp_h(state, e.photon, e.filter); break;
        case ElementKind::hwp_x: apply_hwp_x(state, e.photon, e.filter); break;
        case ElementKind::bs: apply_bs(state, e.photon, e.mode1, e.mode2); break;
        case ElementKind::cavity:
            apply_cavity_encounter(state, e.photon, e.nv, e.filter, e.routing,
                                   pairs[static_cast<size_t>(e.nv - 1)]);
            break;
        case ElementKind::nv_hadamard: apply_nv_hadamard(state, e.nv); break;
        case ElementKind::nv_split:
            apply_nv_split(state, e.nv, pairs[static_cast<size_t>(e.nv - 1)]);
            break;
        case ElementKind::nv_merge:
            apply_nv_merge(state, e.nv_first, e.nv,
                           pairs[static_cast<size_t>(e.nv - 1)]);
            break;
        case ElementKind::dump: apply_mode_dump(state, e.photon, e.mode1); break;
        case ElementKind::spatial_phase:
            apply_spatial_phase(state, e.photon, e.mode1, e.phase);
            break;
        case ElementKind::pol_sigma_z: apply_pol_sigma_z(state, e.photon, e.sign); break;
    }
}

// ---------------------------------------------------------------------------
// The canonical circuit
// ---------------------------------------------------------------------------

namespace detail {

inline Element make(ElementKind k, int step) {
    Element e;
    e.kind = k;
    e.step = step;
    return e;
}

}  // namespace detail

/// The fixed eight-step script, four spin measurements and the feed-forward
/// directive realizing the hyper-parallel controlled-controlled-phase-flip
/// gate on photons a, b, c.
inline CircuitScript canonical_script() {
    CircuitScript s;
    auto cavity = [](int step, Photon p, SpatialFilter f, int nv, Routing r) {
        Element e = detail::make(ElementKind::cavity, step);
        e.photon = p;
        e.filter = f;
        e.nv = nv;
        e.routing = r;
        return e;
    };
    auto hnv = [](int step, int nv) {
        Element e = detail::make(ElementKind::nv_hadamard, step);
        e.nv = nv;
        return e;
    };
    auto bs_c23 = [](int step) {
        Element e = detail::make(ElementKind::bs, step);
        e.photon = Photon::c;
        e.mode1 = 1;
        e.mode2 = 2;
        return e;
    };

    // 1: photon b, both arms, off NV1; then H on NV1.
    s.elements.push_back(cavity(1, Photon::b, SpatialFilter::of({0, 1}), 1, Routing::direct));
    s.elements.push_back(hnv(1, 1));

    // 2: photon c arm c2 split over (c2, c3), X-folded pass off NV1, recombine.
    s.elements.push_back(bs_c23(2));
    s.elements.push_back(cavity(2, Photon::c, SpatialFilter::single(1), 1, Routing::x_conj));
    s.elements.push_back(bs_c23(2));

    // 3: photon a, both arms, off NV2; then H on NV2.
    s.elements.push_back(cavity(3, Photon::a, SpatialFilter::of({0, 1}), 2, Routing::direct));
    s.elements.push_back(hnv(3, 2));

    // 4: photon c arm c2 off NV2, then the split pass off NV1 again; the c3
    // port ends after the last recombiner.
    s.elements.push_back(cavity(4, Photon::c, SpatialFilter::single(1), 2, Routing::x_conj));
    s.elements.push_back(bs_c23(4));
    s.elements.push_back(cavity(4, Photon::c, SpatialFilter::single(1), 1, Routing::x_conj));
    s.elements.push_back(bs_c23(4));
    {
        Element e = detail::make(ElementKind::dump, 4);
        e.photon = Photon::c;
        e.mode1 = 2;
        s.elements.push_back(e);
    }

    // 5: photon b arm b2 off NV3; then H on NV3.
    s.elements.push_back(cavity(5, Photon::b, SpatialFilter::single(1), 3, Routing::x_conj));
    s.elements.push_back(hnv(5, 3));

    // 6: CPBS split of photon c's arms; inner packets H -> NV3 -> H.
    {
        Element e = detail::make(ElementKind::nv_split, 6);
        e.photon = Photon::c;
        e.nv = 3;
        s.elements.push_back(e);
    }

    // 7: photon a arm a2 off NV4; then H on NV4.
    s.elements.push_back(cavity(7, Photon::a, SpatialFilter::single(1), 4, Routing::x_conj));
    s.elements.push_back(hnv(7, 4));

    // 8: inner packets NV4 -> H -> NV3 -> H, then the final merge.
    {
        Element e = detail::make(ElementKind::nv_merge, 8);
        e.photon = Photon::c;
        e.nv_first = 4;
        e.nv = 3;
        s.elements.push_back(e);
    }

    s.measurement_order = {4, 3, 2, 1};
    s.feed_forward = true;
    return s;
}

// ---------------------------------------------------------------------------
// Feed-forward
// ---------------------------------------------------------------------------

/// Four NV outcomes (indexed by NV number) with the branch's absolute
/// probability: the squared norm of the projected, unrenormalized branch.
/// Over all 16 branches these sum to the pre-measurement squared norm.
struct MeasurementRecord {
    std::array<int, 4> outcomes{};  // outcomes[j-1] = outcome of NV_j
    double probability = 0.0;
    bool complete = false;
};

/// Classically conditioned single-photon corrections:
///   NV4 = -'  ->  pi phase on spatial mode a1
///   NV3 = -'  ->  pi phase on spatial mode b2
///   NV2 = -'  ->  sigma_z on photon a polarization
///   NV1 = -'  ->  -sigma_z on photon b polarization
inline void feed_forward(HyperState& state, const MeasurementRecord& record) {
    if (!record.complete)
        throw std::invalid_argument("feed_forward: incomplete measurement record");
    if (record.outcomes[3] == kOutcomeMinusPrime)
        apply_spatial_phase(state, Photon::a, 0, M_PI);
    if (record.outcomes[2] == kOutcomeMinusPrime)
        apply_spatial_phase(state, Photon::b, 1, M_PI);
    if (record.outcomes[1] == kOutcomeMinusPrime) apply_pol_sigma_z(state, Photon::a, +1);
    if (record.outcomes[0] == kOutcomeMinusPrime) apply_pol_sigma_z(state, Photon::b, -1);
}

// ---------------------------------------------------------------------------
// Photonic factor extraction
// ---------------------------------------------------------------------------

constexpr int kPhotonicDim = 96;  // (pol_a, spat_a, pol_b, spat_b, pol_c, spat_c)

constexpr int photonic_index(int pa, int sa, int pb, int sb, int pc, int sc) {
    return ((((pa * 2 + sa) * 2 + pb) * 2 + sb) * 2 + pc) * 3 + sc;
}

struct PhotonicState {
    std::vector<Complex> amp;
    PhotonicState() : amp(kPhotonicDim, Complex{0.0, 0.0}) {}
    Complex& operator[](int i) { return amp[static_cast<size_t>(i)]; }
    const Complex& operator[](int i) const { return amp[static_cast<size_t>(i)]; }
    double squared_norm() const {
        double s = 0.0;
        for (const Complex& c : amp) s += std::norm(c);
        return s;
    }
};

/// Contracts the four spins against the measured |+'>/|-'> eigenstates,
/// leaving the photonic factor. Norm is preserved when the state is the
/// corresponding measurement branch.
inline PhotonicState extract_photonic(const HyperState& state,
                                      const std::array<int, 4>& outcomes) {
    const double invsqrt2 = 1.0 / std::sqrt(2.0);
    std::array<std::array<double, 2>, 4> e{};
    for (int j = 0; j < 4; ++j) {
        e[j][kSpinPlus] = invsqrt2;
        e[j][kSpinMinus] = outcomes[j] == kOutcomePlusPrime ? invsqrt2 : -invsqrt2;
    }
    PhotonicState out;
    for (int pa = 0; pa < 2; ++pa)
        for (int sa = 0; sa < 2; ++sa)
            for (int pb = 0; pb < 2; ++pb)
                for (int sb = 0; sb < 2; ++sb)
                    for (int pc = 0; pc < 2; ++pc)
                        for (int sc = 0; sc < 3; ++sc) {
                            Complex acc{0.0, 0.0};
                            for (int s1 = 0; s1 < 2; ++s1)
                                for (int s2 = 0; s2 < 2; ++s2)
                                    for (int s3 = 0; s3 < 2; ++s3)
                                        for (int s4 = 0; s4 < 2; ++s4)
                                            acc += state[state_index(pa, sa, pb, sb, pc, sc,
                                                                     s1, s2, s3, s4)] *
                                                   e[0][s1] * e[1][s2] * e[2][s3] * e[3][s4];
                            out[photonic_index(pa, sa, pb, sb, pc, sc)] = acc;
                        }
    return out;
}

// ---------------------------------------------------------------------------
// Running a script
// ---------------------------------------------------------------------------

struct BranchPolicy {
    enum class Mode { sample, enumerate_all, fixed };
    Mode mode = Mode::enumerate_all;
    uint64_t seed = 0;
    std::array<int, 4> fixed_outcomes{};  // per NV index

    static BranchPolicy sample(uint64_t seed) {
        BranchPolicy p;
        p.mode = Mode::sample;
        p.seed = seed;
        return p;
    }
    static BranchPolicy enumerate() { return BranchPolicy{}; }
    static BranchPolicy fixed(const std::array<int, 4>& outcomes) {
        BranchPolicy p;
        p.mode = Mode::fixed;
        p.fixed_outcomes = outcomes;
        return p;
    }
};

struct BranchOutcome {
    MeasurementRecord record;
    HyperState state;         // projected branch after feed-forward, unnormalized
    PhotonicState photonic;   // normalized photonic factor (empty if failed)
    bool failed = false;      // branch probability vanished
};

struct RunResult {
    std::vector<int> checkpoint_steps;
    std::vector<HyperState> checkpoints;
    HyperState pre_measurement;
    bool failed = false;  // total photon loss before measurement
    std::vector<BranchOutcome> branches;
};

namespace detail {

constexpr double kFailureThreshold = 1e-24;  // squared norm

inline BranchOutcome close_branch(HyperState&& projected, std::array<int, 4> outcomes,
                                  bool do_feed_forward) {
    BranchOutcome b;
    b.record.outcomes = outcomes;
    b.record.complete = true;
    b.record.probability = projected.squared_norm();
    b.state = std::move(projected);
    if (b.record.probability <= kFailureThreshold) {
        b.failed = true;
        return b;
    }
    if (do_feed_forward) feed_forward(b.state, b.record);
    HyperState normalized = normalize(b.state);
    b.photonic = extract_photonic(normalized, b.record.outcomes);
    return b;
}

}  // namespace detail

/// Executes the elements only (no measurements), recording a snapshot after
/// each step tag. Shared by run() and the metrics integrands.
inline RunResult run_elements(const HyperState& input, const CircuitScript& script,
                              const PairSet& pairs) {
    RunResult res;
    res.pre_measurement = input;
    HyperState& state = res.pre_measurement;
    int current_step = script.elements.empty() ? 0 : script.elements.front().step;
    for (size_t i = 0; i < script.elements.size(); ++i) {
        const Element& e = script.elements[i];
        if (e.step != current_step) {
            if (current_step > 0) {
                res.checkpoint_steps.push_back(current_step);
                res.checkpoints.push_back(state);
            }
            current_step = e.step;
        }
        apply_element(state, e, pairs);
    }
    if (current_step > 0) {
        res.checkpoint_steps.push_back(current_step);
        res.checkpoints.push_back(state);
    }
    res.failed = state.squared_norm() <= detail::kFailureThreshold;
    return res;
}

/// Full run: elements, checkpoints, NV measurements under the branch policy,
/// and feed-forward. Total photon loss before the measurements yields an
/// explicit failure result.
inline RunResult run(const HyperState& input, const CircuitScript& script,
                     const PairSet& pairs, const BranchPolicy& policy) {
    RunResult res = run_elements(input, script, pairs);
    if (res.failed) return res;
    if (script.measurement_order.empty()) return res;
    const size_t n_meas = script.measurement_order.size();
    if (script.feed_forward && n_meas != 4)
        throw std::invalid_argument("run: feed-forward needs all four NVs measured");

    const HyperState& pre = res.pre_measurement;
    switch (policy.mode) {
        case BranchPolicy::Mode::enumerate_all: {
            // Outcome combinations enumerated in measurement order (NV4
            // outermost for the canonical script).
            for (int combo = 0; combo < (1 << n_meas); ++combo) {
                HyperState branch = pre;
                std::array<int, 4> outcomes{};
                for (size_t k = 0; k < n_meas; ++k) {
                    const int nv = script.measurement_order[k];
                    const int outcome = (combo >> (n_meas - 1 - k)) & 1;
                    outcomes[static_cast<size_t>(nv - 1)] = outcome;
                    project_nv(branch, nv, outcome);
                }
                res.branches.push_back(detail::close_branch(std::move(branch), outcomes,
                                                            script.feed_forward));
            }
            break;
        }
        case BranchPolicy::Mode::fixed: {
            HyperState branch = pre;
            for (int nv : script.measurement_order)
                project_nv(branch, nv,
                           policy.fixed_outcomes[static_cast<size_t>(nv - 1)]);
            res.branches.push_back(detail::close_branch(std::move(branch),
                                                        policy.fixed_outcomes,
                                                        script.feed_forward));
            break;
        }
        case BranchPolicy::Mode::sample: {
            SplitMix64 rng(policy.seed);
            HyperState branch = pre;
            std::array<int, 4> outcomes{};
            for (int nv : script.measurement_order) {
                HyperState plus = branch;
                const double p_plus_abs = project_nv(plus, nv, kOutcomePlusPrime);
                const double total = branch.squared_norm();
                const double p_plus = total > 0.0 ? p_plus_abs / total : 0.0;
                const int outcome = rng.next_double() < p_plus ? kOutcomePlusPrime
                                                               : kOutcomeMinusPrime;
                outcomes[static_cast<size_t>(nv - 1)] = outcome;
                if (outcome == kOutcomePlusPrime) {
                    branch = std::move(plus);
                } else {
                    project_nv(branch, nv, kOutcomeMinusPrime);
                }
            }
            res.branches.push_back(detail::close_branch(std::move(branch), outcomes,
                                                        script.feed_forward));
            break;
        }
    }
    return res;
}

inline RunResult run(const HyperState& input, const CircuitScript& script,
                     const ReflectionPair& pair, const BranchPolicy& policy) {
    return run(input, script, shared_pair(pair), policy);
}

// ---------------------------------------------------------------------------
// Truth tables
// ---------------------------------------------------------------------------

/// 64 x 64 complex operator on the photonic computational space
/// (pol_a, spat_a, pol_b, spat_b, pol_c, spat_c in {c1, c2}), row-major with
/// index bits ordered pol_a (most significant) .. spat_c (least).
struct TruthTable {
    std::vector<Complex> m;
    TruthTable() : m(64 * 64, Complex{0.0, 0.0}) {}
    Complex& at(int row, int col) { return m[static_cast<size_t>(row * 64 + col)]; }
    const Complex& at(int row, int col) const {
        return m[static_cast<size_t>(row * 64 + col)];
    }
};

constexpr int computational_index(int pa, int sa, int pb, int sb, int pc, int sc01) {
    return (((((pa << 1) | sa) << 1 | pb) << 1 | sb) << 1 | pc) << 1 | sc01;
}

/// Direct construction of the target operation: a controlled-controlled-Z on
/// (pol_a, pol_b -> spat_c) in tensor product with a controlled-controlled-Z
/// on (spat_a, spat_b -> pol_c), with R / first-mode as |0>.
inline TruthTable reference_truth_table() {
    TruthTable t;
    for (int k = 0; k < 64; ++k) {
        const int pa = (k >> 5) & 1, sa = (k >> 4) & 1, pb = (k >> 3) & 1;
        const int sb = (k >> 2) & 1, pc = (k >> 1) & 1, sc = k & 1;
        double v = 1.0;
        if (pa == 1 && pb == 1 && sc == 1) v = -v;
        if (sa == 1 && sb == 1 && pc == 1) v = -v;
        t.at(k, k) = Complex{v, 0.0};
    }
    return t;
}

inline InputSpec basis_input_spec(int pa, int sa, int pb, int sb, int pc, int sc01) {
    InputSpec s;
    s.alpha1 = pa == 0 ? 1.0 : 0.0;
    s.alpha2 = pa == 0 ? 0.0 : 1.0;
    s.sigma1 = sa == 0 ? 1.0 : 0.0;
    s.sigma2 = sa == 0 ? 0.0 : 1.0;
    s.beta1 = pb == 0 ? 1.0 : 0.0;
    s.beta2 = pb == 0 ? 0.0 : 1.0;
    s.zeta1 = sb == 0 ? 1.0 : 0.0;
    s.zeta2 = sb == 0 ? 0.0 : 1.0;
    s.delta1 = pc == 0 ? 1.0 : 0.0;
    s.delta2 = pc == 0 ? 0.0 : 1.0;
    s.xi1 = sc01 == 0 ? 1.0 : 0.0;
    s.xi2 = sc01 == 0 ? 0.0 : 1.0;
    return s;
}

/// Runs the canonical script with the ideal pair on all 64 computational
/// basis inputs, enumerating all 16 measurement branches with feed-forward.
/// Branches must agree to `branch_tol` after phase alignment, otherwise an
/// internal-consistency failure is thrown.
inline TruthTable ideal_transfer_matrix(double branch_tol = 1e-10) {
    const CircuitScript script = canonical_script();
    const PairSet pairs = shared_pair(ReflectionPair::make_ideal());
    TruthTable t;

    for (int k = 0; k < 64; ++k) {
        const int pa = (k >> 5) & 1, sa = (k >> 4) & 1, pb = (k >> 3) & 1;
        const int sb = (k >> 2) & 1, pc = (k >> 1) & 1, sc = k & 1;
        const HyperState input = product_input(basis_input_spec(pa, sa, pb, sb, pc, sc));
        const RunResult result = run(input, script, pairs, BranchPolicy::enumerate());
        if (result.failed || result.branches.size() != 16)
            throw std::runtime_error("ideal_transfer_matrix: unexpected failure");

        std::vector<std::array<Complex, 64>> columns;
        for (const BranchOutcome& b : result.branches) {
            if (b.failed)
                throw std::runtime_error("ideal_transfer_matrix: vanished branch");
            std::array<Complex, 64> col{};
            double c3_weight = 0.0;
            for (int pa2 = 0; pa2 < 2; ++pa2)
                for (int sa2 = 0; sa2 < 2; ++sa2)
                    for (int pb2 = 0; pb2 < 2; ++pb2)
                        for (int sb2 = 0; sb2 < 2; ++sb2)
                            for (int pc2 = 0; pc2 < 2; ++pc2) {
                                for (int sc2 = 0; sc2 < 2; ++sc2)
                                    col[static_cast<size_t>(computational_index(
                                        pa2, sa2, pb2, sb2, pc2, sc2))] =
                                        b.photonic[photonic_index(pa2, sa2, pb2, sb2, pc2,
                                                                  sc2)];
                                c3_weight += std::norm(
                                    b.photonic[photonic_index(pa2, sa2, pb2, sb2, pc2, 2)]);
                            }
            if (c3_weight > branch_tol)
                throw std::runtime_error("ideal_transfer_matrix: residual c3 amplitude");
            columns.push_back(col);
        }
        // Branch independence up to global phase.
        const std::array<Complex, 64>& ref = columns.front();
        for (size_t b = 1; b < columns.size(); ++b) {
            const Complex phase = alignment_phase(
                std::span<const Complex>(ref.data(), ref.size()),
                std::span<const Complex>(columns[b].data(), columns[b].size()));
            for (int j = 0; j < 64; ++j) {
                if (std::abs(columns[b][static_cast<size_t>(j)] * phase -
                             ref[static_cast<size_t>(j)]) > branch_tol)
                    throw std::runtime_error(
                        "ideal_transfer_matrix: branches disagree beyond tolerance");
            }
        }
        for (int j = 0; j < 64; ++j) t.at(j, k) = ref[static_cast<size_t>(j)];
    }
    return t;
}

/// Largest entrywise deviation between two tables after quotienting one
/// global phase (aligned on the largest-magnitude entry of `a`).
inline double truth_table_distance(const TruthTable& a, const TruthTable& b) {
    const Complex phase =
        alignment_phase(std::span<const Complex>(a.m.data(), a.m.size()),
                        std::span<const Complex>(b.m.data(), b.m.size()));
    double worst = 0.0;
    for (size_t i = 0; i < a.m.size(); ++i)
        worst = std::max(worst, std::abs(b.m[i] * phase - a.m[i]));
    return worst;
}

}  // namespace hypersim
