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

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hypersim/cavity.hpp"
#include "hypersim/gate.hpp"
#include "hypersim/hilbert.hpp"
#include "hypersim/util.hpp"

namespace hypersim {

// ---------------------------------------------------------------------------
// Samplers over the six input angles
// ---------------------------------------------------------------------------

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long samples = 0;
};

struct Sampler {
    enum class Kind { monte_carlo, quadrature };
    Kind kind = Kind::quadrature;
    long long n = 100000;       // Monte Carlo sample count
    uint64_t seed = 0;          // Monte Carlo seed
    int points_per_angle = 8;   // quadrature nodes per angle

    static Sampler monte_carlo(long long n, uint64_t seed) {
        if (n < 2) throw std::invalid_argument("Sampler: need at least 2 samples");
        Sampler s;
        s.kind = Kind::monte_carlo;
        s.n = n;
        s.seed = seed;
        return s;
    }
    static Sampler product_quadrature(int points_per_angle) {
        if (points_per_angle < 2)
            throw std::invalid_argument("Sampler: need at least 2 points per angle");
        Sampler s;
        s.kind = Kind::quadrature;
        s.points_per_angle = points_per_angle;
        return s;
    }
};

inline int default_worker_count() {
    if (const char* env = std::getenv("HYPERSIM_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace detail {

inline uint64_t sample_stream_seed(uint64_t seed, uint64_t index) {
    SplitMix64 g(seed ^ (0xA24BAED4963EE407ull * (index + 1)));
    return g.next();
}

inline AngleTuple monte_carlo_angles(uint64_t seed, uint64_t index) {
    SplitMix64 g(sample_stream_seed(seed, index));
    const double two_pi = 2.0 * M_PI;
    AngleTuple t;
    t.alpha = two_pi * g.next_double();
    t.beta = two_pi * g.next_double();
    t.delta = two_pi * g.next_double();
    t.sigma = two_pi * g.next_double();
    t.zeta = two_pi * g.next_double();
    t.xi = two_pi * g.next_double();
    return t;
}

inline AngleTuple quadrature_angles(int points, long long index) {
    const double step = 2.0 * M_PI / points;
    std::array<double, 6> a{};
    long long rest = index;
    for (int j = 5; j >= 0; --j) {
        a[static_cast<size_t>(j)] = step * static_cast<double>(rest % points);
        rest /= points;
    }
    return AngleTuple{a[0], a[1], a[2], a[3], a[4], a[5]};
}

constexpr long long kChunk = 4096;

// Evaluates fn over every sample index and reduces sums chunk-by-chunk with
// a fixed pairwise tree, so the result is identical for any worker count.
template <typename Fn>
inline Estimate parallel_average(Fn&& fn, long long total, int workers) {
    if (total < 1) throw std::invalid_argument("parallel_average: empty sample set");
    const long long chunks = (total + kChunk - 1) / kChunk;
    std::vector<double> chunk_sum(static_cast<size_t>(chunks), 0.0);
    std::vector<double> chunk_sumsq(static_cast<size_t>(chunks), 0.0);

    std::atomic<long long> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;

    auto work = [&]() {
        std::vector<double> values;
        values.reserve(static_cast<size_t>(kChunk));
        std::vector<double> squares;
        squares.reserve(static_cast<size_t>(kChunk));
        while (true) {
            const long long chunk = next.fetch_add(1);
            if (chunk >= chunks) return;
            const long long begin = chunk * kChunk;
            const long long end = std::min(total, begin + kChunk);
            values.clear();
            squares.clear();
            try {
                for (long long i = begin; i < end; ++i) {
                    const double v = fn(i);
                    values.push_back(v);
                    squares.push_back(v * v);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
            chunk_sum[static_cast<size_t>(chunk)] = pairwise_sum(values);
            chunk_sumsq[static_cast<size_t>(chunk)] = pairwise_sum(squares);
        }
    };

    const int nthreads = std::max(1, workers);
    if (nthreads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);

    const double sum = pairwise_sum(chunk_sum);
    const double sumsq = pairwise_sum(chunk_sumsq);
    Estimate e;
    e.samples = total;
    e.mean = sum / static_cast<double>(total);
    if (total > 1) {
        const double var =
            std::max(0.0, (sumsq - static_cast<double>(total) * e.mean * e.mean) /
                              static_cast<double>(total - 1));
        e.std_error = std::sqrt(var / static_cast<double>(total));
    }
    return e;
}

template <typename Fn>
inline Estimate average_over_angles(Fn&& fn, const Sampler& sampler, int workers) {
    if (sampler.kind == Sampler::Kind::monte_carlo) {
        return parallel_average(
            [&](long long i) {
                return fn(monte_carlo_angles(sampler.seed, static_cast<uint64_t>(i)));
            },
            sampler.n, workers);
    }
    // Product quadrature: the rectangle rule on each angle, exact for
    // trigonometric polynomials of degree below the point count. The coarser
    // half-resolution grid provides the convergence estimate.
    const int points = sampler.points_per_angle;
    long long total = 1;
    for (int j = 0; j < 6; ++j) total *= points;
    Estimate fine = parallel_average(
        [&](long long i) { return fn(quadrature_angles(points, i)); }, total, workers);

    const int coarse_points = points / 2;
    if (coarse_points >= 2) {
        long long coarse_total = 1;
        for (int j = 0; j < 6; ++j) coarse_total *= coarse_points;
        const Estimate coarse = parallel_average(
            [&](long long i) { return fn(quadrature_angles(coarse_points, i)); },
            coarse_total, workers);
        fine.std_error = std::abs(fine.mean - coarse.mean);
    }
    return fine;
}

inline void evolve_in_place(HyperState& state, const CircuitScript& script,
                            const PairSet& pairs) {
    for (const Element& e : script.elements) apply_element(state, e, pairs);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fidelity
// ---------------------------------------------------------------------------

/// Reference stage for fidelity comparisons: the pre-measurement state, or
/// the feed-forward-corrected photonic output weighted over branches.
enum class FidelityMode { pre_measurement, post_feed_forward };

struct GateFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Overlap-squared between the realistic (renormalized) and ideal outputs of
/// the canonical circuit for one product input.
inline double fidelity_single(const InputSpec& spec, const ReflectionPair& pair,
                              FidelityMode mode = FidelityMode::pre_measurement) {
    pair.validate();
    static const CircuitScript script = canonical_script();
    const HyperState input = product_input(spec);

    if (mode == FidelityMode::pre_measurement) {
        HyperState ideal = input;
        detail::evolve_in_place(ideal, script, shared_pair(ReflectionPair::make_ideal()));
        HyperState realistic = input;
        detail::evolve_in_place(realistic, script, shared_pair(pair));
        const double sq = realistic.squared_norm();
        if (sq <= 0.0) throw GateFailure("fidelity_single: realistic state fully lost");
        return std::norm(inner_product(ideal, realistic)) / sq;
    }

    // Probability-weighted branch fidelity after measurement + feed-forward.
    const RunResult ideal_run =
        run(input, script, ReflectionPair::make_ideal(), BranchPolicy::enumerate());
    const PhotonicState& reference = ideal_run.branches.front().photonic;
    const RunResult real_run = run(input, script, pair, BranchPolicy::enumerate());
    if (real_run.failed) throw GateFailure("fidelity_single: realistic state fully lost");
    double weight_total = 0.0;
    double acc = 0.0;
    for (const BranchOutcome& b : real_run.branches) {
        if (b.failed) continue;
        Complex ov{0.0, 0.0};
        for (int i = 0; i < kPhotonicDim; ++i) ov += std::conj(reference[i]) * b.photonic[i];
        acc += b.record.probability * std::norm(ov);
        weight_total += b.record.probability;
    }
    if (weight_total <= 0.0)
        throw GateFailure("fidelity_single: all measurement branches lost");
    return acc / weight_total;
}

inline double fidelity_single(const AngleTuple& angles, const ReflectionPair& pair,
                              FidelityMode mode = FidelityMode::pre_measurement) {
    return fidelity_single(InputSpec::from_angles(angles), pair, mode);
}

inline Estimate average_fidelity(const ReflectionPair& pair, const Sampler& sampler,
                                 int workers = default_worker_count(),
                                 FidelityMode mode = FidelityMode::pre_measurement) {
    return detail::average_over_angles(
        [&](const AngleTuple& t) { return fidelity_single(t, pair, mode); }, sampler,
        workers);
}

// ---------------------------------------------------------------------------
// Efficiency
// ---------------------------------------------------------------------------

/// Probability that all three photons leave the gate coherently: the squared
/// norm of the unnormalized pre-measurement output.
inline double efficiency_single(const InputSpec& spec, const ReflectionPair& pair) {
    pair.validate();
    static const CircuitScript script = canonical_script();
    HyperState state = product_input(spec);
    detail::evolve_in_place(state, script, shared_pair(pair));
    return state.squared_norm();
}

inline double efficiency_single(const AngleTuple& angles, const ReflectionPair& pair) {
    return efficiency_single(InputSpec::from_angles(angles), pair);
}

inline Estimate average_efficiency_numeric(const ReflectionPair& pair,
                                           const Sampler& sampler,
                                           int workers = default_worker_count()) {
    return detail::average_over_angles(
        [&](const AngleTuple& t) { return efficiency_single(t, pair); }, sampler, workers);
}

// ---------------------------------------------------------------------------
// Surviving-photon-fraction efficiency (the alternate reading of the output
// photon number ratio): expected number of photons leaving the gate, over 3.
// Loss events are tracked as incoherent sectors, each freezing the lost
// photon's indices and evolving the remainder.
// ---------------------------------------------------------------------------

namespace detail {

struct LossSector {
    uint8_t lost_mask = 0;  // bit per photon a/b/c
    HyperState state;
};

// Component classes of an element that lose amplitude, together with the
// surviving factor. The leak sector keeps the absorbed component's labels.
inline void spawn_leaks(const HyperState& before, const Element& e, const PairSet& pairs,
                        std::vector<std::pair<HyperState, Photon>>& leaks) {
    auto leak_from_factor = [&](int pol_stride, int spat_stride, int spat_dim,
                                SpatialFilter filter, int spin_stride,
                                const Complex factor[2][2]) {
        // One leak sector per (pol, spin) class with |factor| < 1.
        for (int pol = 0; pol < 2; ++pol)
            for (int spin = 0; spin < 2; ++spin) {
                const double mag = std::abs(factor[pol][spin]);
                if (mag >= 1.0 - 1e-15) continue;
                const double leak_amp = std::sqrt(std::max(0.0, 1.0 - mag * mag));
                HyperState leak;
                bool any = false;
                for (int idx = 0; idx < kDim; ++idx) {
                    if ((idx / pol_stride) % 2 != pol) continue;
                    if (!filter.contains((idx / spat_stride) % spat_dim)) continue;
                    if ((idx / spin_stride) % 2 != spin) continue;
                    if (before[idx] == Complex{0.0, 0.0}) continue;
                    leak[idx] = before[idx] * leak_amp;
                    any = true;
                }
                if (any) leaks.emplace_back(std::move(leak), e.photon);
            }
    };

    switch (e.kind) {
        case ElementKind::cavity: {
            const ReflectionPair& pair = pairs[static_cast<size_t>(e.nv - 1)];
            Complex factor[2][2];
            const Complex one{1.0, 0.0};
            factor[kPolR][kSpinPlus] = pair.r;
            factor[kPolR][kSpinMinus] = pair.r0;
            if (e.routing == Routing::direct) {
                factor[kPolL][kSpinPlus] = one;
                factor[kPolL][kSpinMinus] = one;
            } else if (e.routing == Routing::x_conj) {
                factor[kPolL][kSpinPlus] = pair.r;
                factor[kPolL][kSpinMinus] = pair.r0;
            } else {
                factor[kPolL][kSpinPlus] = pair.r0;
                factor[kPolL][kSpinMinus] = pair.r;
            }
            const int ip = static_cast<int>(e.photon);
            leak_from_factor(kPolStride[ip], kSpatStride[ip], kSpatialDim[ip], e.filter,
                             kSpinStride[e.nv - 1], factor);
            break;
        }
        case ElementKind::dump: {
            HyperState leak;
            bool any = false;
            const int ip = static_cast<int>(e.photon);
            for (int idx = 0; idx < kDim; ++idx) {
                if ((idx / kSpatStride[ip]) % kSpatialDim[ip] != e.mode1) continue;
                if (before[idx] == Complex{0.0, 0.0}) continue;
                leak[idx] = before[idx];
                any = true;
            }
            if (any) leaks.emplace_back(std::move(leak), e.photon);
            break;
        }
        case ElementKind::nv_split: {
            // The split's inner chain absorbs amplitude when |d| < 1; the
            // kept inner components are handled by apply_nv_split itself, so
            // the leak is the norm deficit per (arm, spin) class.
            const ReflectionPair& pair = pairs[static_cast<size_t>(e.nv - 1)];
            const int spin_stride = kSpinStride[e.nv - 1];
            for (int arm = 0; arm < 2; ++arm)
                for (int spin = 0; spin < 2; ++spin) {
                    const Complex d = spin == kSpinPlus ? pair.r0 : pair.r;
                    const double kept = 0.5 * (1.0 + std::norm(d));
                    if (kept >= 1.0 - 1e-15) continue;
                    const double leak_amp = std::sqrt(std::max(0.0, 1.0 - kept));
                    HyperState leak;
                    bool any = false;
                    for (int idx = 0; idx < kDim; ++idx) {
                        if ((idx / kStridePolC) % 2 != kPolL) continue;
                        if ((idx / kStrideSpatC) % 3 != arm) continue;
                        if ((idx / spin_stride) % 2 != spin) continue;
                        if (before[idx] == Complex{0.0, 0.0}) continue;
                        leak[idx] = before[idx] * leak_amp;
                        any = true;
                    }
                    if (any) leaks.emplace_back(std::move(leak), Photon::c);
                }
            break;
        }
        case ElementKind::nv_merge: {
            // Three distinct loss events per arm: absorption at the first
            // cavity (acting on the inner packet's L component), absorption
            // at the second cavity (on the L component after the first plate),
            // and the inner packet's R output leaving the merge's unused
            // port. Each is a linear functional of (phys R, phys L), parked
            // on the frozen slot index of its class.
            const ReflectionPair& pair = pairs[static_cast<size_t>(e.nv - 1)];
            const int stride_first = kSpinStride[e.nv_first - 1];
            const int stride_second = kSpinStride[e.nv - 1];
            const double invsqrt2 = 1.0 / std::sqrt(2.0);
            for (int event = 0; event < 3; ++event) {
                HyperState leak;
                bool any = false;
                for (int arm = 0; arm < 2; ++arm)
                    for (int idx = 0; idx < kDim; ++idx) {
                        if ((idx / kStridePolC) % 2 != kPolL) continue;
                        if ((idx / kStrideSpatC) % 3 != arm) continue;
                        const int sf = (idx / stride_first) % 2;
                        const int ss = (idx / stride_second) % 2;
                        const Complex d_first = sf == kSpinPlus ? pair.r0 : pair.r;
                        const Complex d_second = ss == kSpinPlus ? pair.r0 : pair.r;
                        const int scratch = scratch_index_for(idx, arm);
                        const Complex phys_r = ss == kSpinPlus ? before[idx]
                                                               : before[scratch];
                        const Complex phys_l = ss == kSpinPlus ? before[scratch]
                                                               : before[idx];
                        Complex lost{0.0, 0.0};
                        if (event == 0) {
                            lost = std::sqrt(std::max(0.0, 1.0 - std::norm(d_first))) *
                                   phys_l;
                        } else if (event == 1) {
                            lost = std::sqrt(std::max(0.0, 1.0 - std::norm(d_second))) *
                                   (phys_r - d_first * phys_l) * invsqrt2;
                        } else {
                            lost = (1.0 + d_second) * 0.5 * phys_r +
                                   d_first * (1.0 - d_second) * 0.5 * phys_l;
                        }
                        if (lost == Complex{0.0, 0.0}) continue;
                        leak[idx] = lost;
                        any = true;
                    }
                if (any) leaks.emplace_back(std::move(leak), Photon::c);
            }
            break;
        }
        default: break;
    }
}

}  // namespace detail

/// Final weight of each loss sector (keyed by the lost-photon bitmask) after
/// running the canonical circuit with incoherent leak tracking. The weights
/// of all sectors sum to the input's squared norm.
inline std::vector<std::pair<uint8_t, double>> loss_sector_weights(
    const InputSpec& spec, const ReflectionPair& pair) {
    pair.validate();
    static const CircuitScript script = canonical_script();
    std::vector<detail::LossSector> sectors;
    sectors.push_back({0, product_input(spec)});

    const PairSet pairs = shared_pair(pair);
    for (const Element& e : script.elements) {
        const size_t count = sectors.size();
        for (size_t s = 0; s < count; ++s) {
            const uint8_t mask = sectors[s].lost_mask;
            const bool involves_photon = e.kind != ElementKind::nv_hadamard;
            if (involves_photon && (mask & (1 << static_cast<int>(e.photon))))
                continue;  // the lost photon's path is empty
            std::vector<std::pair<HyperState, Photon>> leaks;
            detail::spawn_leaks(sectors[s].state, e, pairs, leaks);
            apply_element(sectors[s].state, e, pairs);
            for (auto& [leak_state, photon] : leaks) {
                detail::LossSector child;
                child.lost_mask =
                    static_cast<uint8_t>(mask | (1 << static_cast<int>(photon)));
                child.state = std::move(leak_state);
                sectors.push_back(std::move(child));
            }
        }
    }

    std::vector<std::pair<uint8_t, double>> weights;
    weights.reserve(sectors.size());
    for (const detail::LossSector& s : sectors)
        weights.emplace_back(s.lost_mask, s.state.squared_norm());
    return weights;
}

/// Expected fraction of the three photons that leave the gate, for one input
/// angle tuple: the alternate reading of the output photon number ratio.
inline double efficiency_single_fraction(const InputSpec& spec,
                                         const ReflectionPair& pair) {
    double expected_photons = 0.0;
    for (const auto& [mask, weight] : loss_sector_weights(spec, pair)) {
        const int lost = ((mask >> 0) & 1) + ((mask >> 1) & 1) + ((mask >> 2) & 1);
        expected_photons += (3.0 - lost) * weight;
    }
    return expected_photons / 3.0;
}

inline double efficiency_single_fraction(const AngleTuple& angles,
                                         const ReflectionPair& pair) {
    return efficiency_single_fraction(InputSpec::from_angles(angles), pair);
}

// ---------------------------------------------------------------------------
// Closed-form average efficiency
// ---------------------------------------------------------------------------

/// Coefficients of the two polynomial factors of the closed-form average
/// efficiency, constant term first. The factors evaluate to 512 and 256 at
/// |r| = 1 and to 121 and 91 at |r| = 0.
constexpr std::array<long long, 9> kEfficiencyPolyA = {121, 128, 164, 40, 14, 16, 20, 8, 1};
constexpr std::array<long long, 9> kEfficiencyPolyB = {91, 58, 42, 18, 12, 14, 14, 6, 1};
constexpr long long kEfficiencyDenominator = 131072;  // 2^17

enum class ClosedFormReading {
    product,      // [A(|r|) * B(|r|)] / 131072; reaches 1 at |r| = 1
    raw_printed,  // [121 + (A(|r|)-121) * B(|r|)] / 131072
};

inline double efficiency_closed_form(double r_mag,
                                     ClosedFormReading reading = ClosedFormReading::product) {
    if (r_mag < 0.0 || r_mag > 1.0)
        throw std::invalid_argument("efficiency_closed_form: |r| must lie in [0, 1]");
    auto eval = [r_mag](const std::array<long long, 9>& coeffs, bool with_const) {
        double acc = 0.0;
        double power = 1.0;
        for (size_t k = 0; k < coeffs.size(); ++k) {
            if (k > 0 || with_const) acc += static_cast<double>(coeffs[k]) * power;
            power *= r_mag;
        }
        return acc;
    };
    const double a = eval(kEfficiencyPolyA, true);
    const double b = eval(kEfficiencyPolyB, true);
    if (reading == ClosedFormReading::product)
        return a * b / static_cast<double>(kEfficiencyDenominator);
    const double f = eval(kEfficiencyPolyA, false);  // A without its constant 121
    return (121.0 + f * b) / static_cast<double>(kEfficiencyDenominator);
}

// ---------------------------------------------------------------------------
// Basis-averaged oracles
//
// Both efficiency candidates are quadratic forms in the input state, and the
// angle average of the input projector is 1/64 of the identity on the
// computational photonic space (the spins are fixed). The exact angle
// average therefore equals the average over the 64 computational basis
// inputs. These two routes are independent of the sampler implementations.
// ---------------------------------------------------------------------------

inline double average_efficiency_basis_oracle(const ReflectionPair& pair) {
    static const CircuitScript script = canonical_script();
    const PairSet pairs = shared_pair(pair);
    double acc = 0.0;
    for (int k = 0; k < 64; ++k) {
        HyperState state = product_input(basis_input_spec(
            (k >> 5) & 1, (k >> 4) & 1, (k >> 3) & 1, (k >> 2) & 1, (k >> 1) & 1, k & 1));
        detail::evolve_in_place(state, script, pairs);
        acc += state.squared_norm();
    }
    return acc / 64.0;
}

inline double average_efficiency_fraction_oracle(const ReflectionPair& pair) {
    double acc = 0.0;
    for (int k = 0; k < 64; ++k)
        acc += efficiency_single_fraction(
            basis_input_spec((k >> 5) & 1, (k >> 4) & 1, (k >> 3) & 1, (k >> 2) & 1,
                             (k >> 1) & 1, k & 1),
            pair);
    return acc / 64.0;
}

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

struct SweepRow {
    double x = 0.0;
    double r = 0.0;
    double f_mean = 0.0;
    double f_se = 0.0;
    double eta_numeric = 0.0;
    double eta_numeric_se = 0.0;
    double eta_closed = 0.0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    Sampler sampler;
    int workers = 1;
    bool fidelity_nondecreasing = true;    // within 3 combined standard errors
    bool efficiency_nondecreasing = true;  // within 3 combined standard errors
};

/// Average fidelity and efficiency over a strictly increasing grid of
/// coupling ratios x = g / sqrt(kappa * gamma), x >= 0.5.
inline SweepTable sweep(const std::vector<double>& x_grid, const Sampler& sampler,
                        int workers = default_worker_count()) {
    if (x_grid.empty()) throw std::invalid_argument("sweep: empty grid");
    for (size_t i = 0; i < x_grid.size(); ++i) {
        if (x_grid[i] < 0.5) throw std::invalid_argument("sweep: grid must satisfy x >= 0.5");
        if (i > 0 && x_grid[i] <= x_grid[i - 1])
            throw std::invalid_argument("sweep: grid must be strictly increasing");
    }
    SweepTable table;
    table.sampler = sampler;
    table.workers = workers;
    for (const double x : x_grid) {
        const ReflectionPair pair = resonant_pair(x);
        SweepRow row;
        row.x = x;
        row.r = pair.r.real();
        const Estimate f = average_fidelity(pair, sampler, workers);
        row.f_mean = f.mean;
        row.f_se = f.std_error;
        const Estimate eta = average_efficiency_numeric(pair, sampler, workers);
        row.eta_numeric = eta.mean;
        row.eta_numeric_se = eta.std_error;
        row.eta_closed = efficiency_closed_form(std::abs(pair.r));
        table.rows.push_back(row);
    }
    for (size_t i = 1; i < table.rows.size(); ++i) {
        const SweepRow& lo = table.rows[i - 1];
        const SweepRow& hi = table.rows[i];
        if (hi.f_mean < lo.f_mean - 3.0 * std::hypot(lo.f_se, hi.f_se))
            table.fidelity_nondecreasing = false;
        if (hi.eta_numeric < lo.eta_numeric - 3.0 * std::hypot(lo.eta_numeric_se,
                                                               hi.eta_numeric_se))
            table.efficiency_nondecreasing = false;
    }
    return table;
}

}  // namespace hypersim
