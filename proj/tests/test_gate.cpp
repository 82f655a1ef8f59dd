#include <cmath>
#include <map>
#include <random>

#include "checkpoint_oracle.hpp"
#include "doctest.h"
#include "hypersim/gate.hpp"
#include "test_helpers.hpp"

using namespace hypersim;
using hypersim::testing::expected_checkpoint;
using hypersim::testing::expected_final_photonic;
using hypersim::testing::max_abs_diff;
using hypersim::testing::overlap_magnitude;
using hypersim::testing::random_angles;

TEST_CASE("canonical script structure") {
    const CircuitScript s = canonical_script();

    SUBCASE("eight tagged steps, four measurements, feed-forward") {
        int max_step = 0;
        for (const Element& e : s.elements) max_step = std::max(max_step, e.step);
        CHECK(max_step == 8);
        CHECK(s.measurement_order == std::vector<int>{4, 3, 2, 1});
        CHECK(s.feed_forward);
    }

    SUBCASE("NV usage per step") {
        std::map<int, std::vector<int>> nv_steps;
        for (const Element& e : s.elements) {
            if (e.kind == ElementKind::cavity || e.kind == ElementKind::nv_split)
                nv_steps[e.nv].push_back(e.step);
            if (e.kind == ElementKind::nv_merge) {
                nv_steps[e.nv_first].push_back(e.step);
                nv_steps[e.nv].push_back(e.step);
            }
        }
        CHECK(nv_steps[1] == std::vector<int>{1, 2, 4});
        CHECK(nv_steps[2] == std::vector<int>{3, 4});
        CHECK(nv_steps[3] == std::vector<int>{5, 6, 8});
        CHECK(nv_steps[4] == std::vector<int>{7, 8});
    }

    SUBCASE("photon c meets a cavity six times") {
        int encounters = 0;
        for (const Element& e : s.elements) {
            if (e.photon != Photon::c) continue;
            if (e.kind == ElementKind::cavity || e.kind == ElementKind::nv_split)
                ++encounters;
            if (e.kind == ElementKind::nv_merge) encounters += 2;
        }
        CHECK(encounters == 6);
    }
}

TEST_CASE("ideal checkpoints match their expected states") {
    std::mt19937 rng(2024);
    const CircuitScript script = canonical_script();
    const PairSet pairs = shared_pair(ReflectionPair::make_ideal());

    for (int trial = 0; trial < 10; ++trial) {
        const InputSpec spec = InputSpec::from_angles(random_angles(rng));
        const HyperState input = product_input(spec);
        const RunResult res = run_elements(input, script, pairs);
        REQUIRE(res.checkpoint_steps.size() == 8);
        for (int step = 1; step <= 8; ++step) {
            const HyperState want = expected_checkpoint(step, spec);
            CAPTURE(step);
            CHECK(max_abs_diff(res.checkpoints[static_cast<size_t>(step - 1)], want) <
                  1e-12);
        }
    }
}

TEST_CASE("c3 occupancy at step boundaries (ideal pair)") {
    std::mt19937 rng(99);
    const CircuitScript script = canonical_script();
    const PairSet pairs = shared_pair(ReflectionPair::make_ideal());
    const InputSpec spec = InputSpec::from_angles(random_angles(rng));
    const RunResult res = run_elements(product_input(spec), script, pairs);

    for (size_t k = 0; k < res.checkpoints.size(); ++k) {
        const int step = res.checkpoint_steps[k];
        double c3 = 0.0;
        for (int i = 0; i < kDim; ++i)
            if ((i / kStrideSpatC) % 3 == 2) c3 += std::norm(res.checkpoints[k][i]);
        if (step == 2 || step == 3) {
            CHECK(c3 > 1e-12);  // transient occupancy between the two splits
        } else {
            CHECK(c3 < 1e-20);
        }
    }
}

TEST_CASE("ideal transfer matrix equals the double controlled-controlled-Z") {
    const TruthTable sim = ideal_transfer_matrix();
    const TruthTable ref = reference_truth_table();
    CHECK(truth_table_distance(ref, sim) < 1e-10);

    SUBCASE("diagonal entries are +-1") {
        for (int r = 0; r < 64; ++r)
            for (int c = 0; c < 64; ++c) {
                const Complex v = sim.at(r, c);
                if (r == c) {
                    CHECK(std::abs(std::abs(v.real()) - 1.0) < 1e-10);
                    CHECK(std::abs(v.imag()) < 1e-10);
                } else {
                    CHECK(std::abs(v) < 1e-10);
                }
            }
    }

    SUBCASE("trace fingerprint") {
        Complex trace{0.0, 0.0};
        for (int k = 0; k < 64; ++k) trace += ref.at(k, k);
        // 48 unaffected entries, 15 + 15 sign flips, 1 doubly flipped entry.
        CHECK(trace.real() == doctest::Approx(36.0));
        Complex sim_trace{0.0, 0.0};
        for (int k = 0; k < 64; ++k) sim_trace += sim.at(k, k);
        CHECK(std::abs(sim_trace - trace) < 1e-8);
    }

    SUBCASE("single and double trigger patterns") {
        // pol_a = L, pol_b = L, spat_c = c2, everything else first/R.
        const int flipped = computational_index(1, 0, 1, 0, 0, 1);
        CHECK(ref.at(flipped, flipped).real() == doctest::Approx(-1.0));
        // Both trigger patterns at once give (-1)*(-1) = +1.
        const int both = computational_index(1, 1, 1, 1, 1, 1);
        CHECK(ref.at(both, both).real() == doctest::Approx(1.0));
        // Identity sector.
        const int plain = computational_index(0, 0, 0, 0, 0, 0);
        CHECK(ref.at(plain, plain).real() == doctest::Approx(1.0));
    }
}

TEST_CASE("measurement branches under the ideal pair") {
    std::mt19937 rng(31415);
    const CircuitScript script = canonical_script();
    const PairSet pairs = shared_pair(ReflectionPair::make_ideal());

    for (int trial = 0; trial < 5; ++trial) {
        const InputSpec spec = InputSpec::from_angles(random_angles(rng));
        const RunResult res = run(product_input(spec), script, pairs,
                                  BranchPolicy::enumerate());
        REQUIRE(res.branches.size() == 16);

        SUBCASE("every branch has probability 1/16") {}
        double total = 0.0;
        for (const BranchOutcome& b : res.branches) {
            CHECK(b.record.probability == doctest::Approx(1.0 / 16.0).epsilon(1e-10));
            total += b.record.probability;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

        // Post-feed-forward photonic states agree across branches and equal
        // the double controlled-controlled-Z output.
        const PhotonicState want = expected_final_photonic(spec);
        for (const BranchOutcome& b : res.branches) {
            REQUIRE(!b.failed);
            double worst = 0.0;
            for (int i = 0; i < kPhotonicDim; ++i)
                worst = std::max(worst, std::abs(b.photonic[i] - want[i]));
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("feed-forward directives") {
    std::mt19937 rng(8);
    const HyperState s0 = hypersim::testing::random_state(rng);

    SUBCASE("all +' outcomes do nothing") {
        HyperState s = s0;
        MeasurementRecord rec;
        rec.complete = true;
        rec.outcomes = {kOutcomePlusPrime, kOutcomePlusPrime, kOutcomePlusPrime,
                        kOutcomePlusPrime};
        feed_forward(s, rec);
        CHECK(max_abs_diff(s, s0) == 0.0);
    }
    SUBCASE("NV4 = -' negates the a1 amplitudes") {
        HyperState s = s0;
        MeasurementRecord rec;
        rec.complete = true;
        rec.outcomes = {kOutcomePlusPrime, kOutcomePlusPrime, kOutcomePlusPrime,
                        kOutcomeMinusPrime};
        feed_forward(s, rec);
        for (int i = 0; i < kDim; ++i) {
            const int spat = (i / kStrideSpatA) % 2;
            CHECK(s[i] == (spat == 0 ? -s0[i] : s0[i]));
        }
    }
    SUBCASE("NV1 = -' applies minus sigma_z to photon b") {
        HyperState s = s0;
        MeasurementRecord rec;
        rec.complete = true;
        rec.outcomes = {kOutcomeMinusPrime, kOutcomePlusPrime, kOutcomePlusPrime,
                        kOutcomePlusPrime};
        feed_forward(s, rec);
        for (int i = 0; i < kDim; ++i) {
            const int pol = (i / kStridePolB) % 2;
            CHECK(s[i] == (pol == kPolR ? -s0[i] : s0[i]));
        }
    }
    SUBCASE("incomplete records rejected") {
        HyperState s = s0;
        MeasurementRecord rec;
        CHECK_THROWS_AS(feed_forward(s, rec), std::invalid_argument);
    }
}

TEST_CASE("lossy run keeps honest accounting") {
    const CircuitScript script = canonical_script();
    const ReflectionPair lossy = resonant_pair(0.5);  // r = 0, r0 = -1

    SUBCASE("all-R first-mode input loses amplitude") {
        const RunResult res = run(product_input(InputSpec{}), script, shared_pair(lossy),
                                  BranchPolicy::enumerate());
        CHECK(!res.failed);
        const double sq = res.pre_measurement.squared_norm();
        CHECK(sq < 1.0 - 1e-3);
        CHECK(sq > 0.0);

        // Records sum to the pre-measurement squared norm.
        double total = 0.0;
        for (const BranchOutcome& b : res.branches) total += b.record.probability;
        CHECK(total == doctest::Approx(sq).epsilon(1e-12));
    }

    SUBCASE("random angle inputs stay subnormalized") {
        std::mt19937 rng(5);
        const InputSpec spec = InputSpec::from_angles(random_angles(rng));
        const RunResult res = run_elements(product_input(spec), script, shared_pair(lossy));
        CHECK(res.pre_measurement.squared_norm() < 1.0 + 1e-12);
    }
}

TEST_CASE("run is linear in the photonic input for a fixed branch") {
    const CircuitScript script = canonical_script();
    const PairSet pairs = shared_pair(resonant_pair(1.7));
    const std::array<int, 4> outcomes = {kOutcomeMinusPrime, kOutcomePlusPrime,
                                         kOutcomeMinusPrime, kOutcomePlusPrime};
    std::mt19937 rng(2718);

    const InputSpec sx = InputSpec::from_angles(random_angles(rng));
    const InputSpec sy = InputSpec::from_angles(random_angles(rng));
    const HyperState x = product_input(sx);
    const HyperState y = product_input(sy);
    const Complex a{0.6, -0.2}, b{0.3, 0.8};

    HyperState combo;
    for (int i = 0; i < kDim; ++i) combo[i] = a * x[i] + b * y[i];

    // Fixed-branch projection composed with the elements is linear, so the
    // unnormalized branch states superpose.
    auto branch_state = [&](const HyperState& in) {
        HyperState s = in;
        for (const Element& e : script.elements) apply_element(s, e, pairs);
        for (int nv : script.measurement_order)
            project_nv(s, nv, outcomes[static_cast<size_t>(nv - 1)]);
        return s;
    };
    const HyperState bx = branch_state(x);
    const HyperState by = branch_state(y);
    const HyperState bcombo = branch_state(combo);
    HyperState expect;
    for (int i = 0; i < kDim; ++i) expect[i] = a * bx[i] + b * by[i];
    CHECK(max_abs_diff(bcombo, expect) < 1e-12);
}

TEST_CASE("sampled and fixed branch policies") {
    const CircuitScript script = canonical_script();
    const PairSet pairs = shared_pair(ReflectionPair::make_ideal());
    std::mt19937 rng(777);
    const InputSpec spec = InputSpec::from_angles(random_angles(rng));
    const HyperState input = product_input(spec);

    SUBCASE("sampling is reproducible for a fixed seed") {
        const RunResult r1 = run(input, script, pairs, BranchPolicy::sample(42));
        const RunResult r2 = run(input, script, pairs, BranchPolicy::sample(42));
        REQUIRE(r1.branches.size() == 1);
        REQUIRE(r2.branches.size() == 1);
        CHECK(r1.branches[0].record.outcomes == r2.branches[0].record.outcomes);
    }
    SUBCASE("fixed policy reproduces the matching enumerated branch") {
        const std::array<int, 4> outcomes = {kOutcomeMinusPrime, kOutcomeMinusPrime,
                                             kOutcomePlusPrime, kOutcomePlusPrime};
        const RunResult fixed = run(input, script, pairs, BranchPolicy::fixed(outcomes));
        const RunResult all = run(input, script, pairs, BranchPolicy::enumerate());
        REQUIRE(fixed.branches.size() == 1);
        bool found = false;
        for (const BranchOutcome& b : all.branches) {
            if (b.record.outcomes != outcomes) continue;
            found = true;
            CHECK(max_abs_diff(b.state, fixed.branches[0].state) < 1e-13);
        }
        CHECK(found);
    }
}
