// Copyright 2026 The noonsim Authors
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

#include "noonsim/detection.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "noonsim/error.hpp"
#include "oracles.hpp"

using namespace noonsim;

namespace {

constexpr double kPi = std::numbers::pi;

// Loss as a beam splitter onto two vacuum environment modes (modes 2 and 3),
// followed by a partial trace. Output ordered like enumerate_sectors(2, 2).
CMatrix loss_oracle(const CMatrix &rho_in, double eta_a, double eta_b) {
    CMatrix u = CMatrix::Zero(4, 4);
    const double ta = std::sqrt(eta_a), ra = std::sqrt(1 - eta_a);
    const double tb = std::sqrt(eta_b), rb = std::sqrt(1 - eta_b);
    u(0, 0) = ta; u(2, 0) = ra; u(0, 2) = -ra; u(2, 2) = ta;
    u(1, 1) = tb; u(3, 1) = rb; u(1, 3) = -rb; u(3, 3) = tb;
    const auto big_basis = oracle::fock_basis(4, 2);
    auto big_index = [&](const std::vector<int> &occ) {
        for (std::size_t i = 0; i < big_basis.size(); ++i)
            if (big_basis[i] == occ) return static_cast<int>(i);
        return -1;
    };
    const auto in_basis = oracle::fock_basis(2, 2);
    CMatrix embed = CMatrix::Zero(static_cast<int>(big_basis.size()), 3);
    for (int i = 0; i < 3; ++i) embed(big_index({in_basis[i][0], in_basis[i][1], 0, 0}), i) = 1.0;
    const CMatrix lifted = oracle::symmetric_tensor_lift(u, 2);
    const CMatrix big = lifted * embed * rho_in * embed.adjoint() * lifted.adjoint();

    const auto out_basis = enumerate_sectors(2, 2);
    CMatrix out = CMatrix::Zero(static_cast<int>(out_basis.size()), static_cast<int>(out_basis.size()));
    for (std::size_t s = 0; s < out_basis.size(); ++s) {
        for (std::size_t t = 0; t < out_basis.size(); ++t) {
            for (int ea = 0; ea <= 2; ++ea) {
                for (int eb = 0; eb + ea <= 2; ++eb) {
                    const int i = big_index({out_basis[s][0], out_basis[s][1], ea, eb});
                    const int j = big_index({out_basis[t][0], out_basis[t][1], ea, eb});
                    if (i < 0 || j < 0) continue;
                    out(s, t) += big(i, j);
                }
            }
        }
    }
    return out;
}

DensityMatrix fock_density(const FockState &state) {
    const auto basis = enumerate_basis(2, state.photon_number());
    CMatrix m = CMatrix::Zero(static_cast<int>(basis.size()), static_cast<int>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == state) m(i, i) = 1.0;
    return DensityMatrix(basis, m);
}

std::vector<FringeSample> sample(auto f, int n, double span) {
    std::vector<FringeSample> out;
    for (int i = 0; i < n; ++i) {
        const double x = span * i / n;
        out.push_back({x, f(x)});
    }
    return out;
}

}  // namespace

TEST(Loss, unit_transmission_is_identity_on_the_sector) {
    const auto rho = noon_mixed(0.3, 0.4, 0.8);
    const auto out = apply_loss(rho, 1.0, 1.0);
    for (const auto &s : rho.basis())
        for (const auto &t : rho.basis())
            EXPECT_NEAR(std::abs(out.matrix()(out.index_of(s), out.index_of(t)) -
                                 rho.matrix()(rho.index_of(s), rho.index_of(t))),
                        0.0, 1e-15);
    EXPECT_NEAR(out.probability(FockState{0, 0}), 0.0, 1e-15);
}

TEST(Loss, split_pair_survives_with_eta_squared) {
    const auto out = apply_loss(fock_density(FockState{1, 1}), 0.3, 0.3);
    EXPECT_NEAR(out.probability(FockState{1, 1}), 0.09, 1e-15);
    EXPECT_NEAR(out.probability(FockState{1, 0}), 0.21, 1e-15);
    EXPECT_NEAR(out.probability(FockState{0, 1}), 0.21, 1e-15);
    EXPECT_NEAR(out.probability(FockState{0, 0}), 0.49, 1e-15);
}

TEST(Loss, bunched_pair_is_binomially_thinned) {
    const double eta = 0.37;
    const auto out = apply_loss(fock_density(FockState{2, 0}), eta, 0.9);
    EXPECT_NEAR(out.probability(FockState{2, 0}), eta * eta, 1e-15);
    EXPECT_NEAR(out.probability(FockState{1, 0}), 2 * eta * (1 - eta), 1e-15);
    EXPECT_NEAR(out.probability(FockState{0, 0}), (1 - eta) * (1 - eta), 1e-15);
}

TEST(Loss, matches_environment_mode_oracle) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rho = noon_mixed(uni(rng), 6 * uni(rng), uni(rng));
        const double ea = uni(rng), eb = uni(rng);
        const CMatrix expected = loss_oracle(rho.matrix(), ea, eb);
        const auto out = apply_loss(rho, ea, eb);
        EXPECT_LT((out.matrix() - expected).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_GE(out.min_eigenvalue(), -1e-12);
    }
}

TEST(Loss, commutes_with_mode_swap) {
    const auto rho = noon_mixed(0.2, 0.0, 0.6);
    const auto swapped = noon_mixed(0.8, 0.0, 0.6);
    const auto out = apply_loss(rho, 0.3, 0.7);
    const auto out_swapped = apply_loss(swapped, 0.7, 0.3);
    for (const auto &s : out.basis()) {
        const FockState mirror{s[1], s[0]};
        EXPECT_NEAR(out.probability(s), out_swapped.probability(mirror), 1e-14);
    }
}

TEST(Loss, rejects_bad_transmission) {
    const auto rho = noon_mixed(0.5, 0.0, 1.0);
    EXPECT_THROW(apply_loss(rho, 1.2, 0.5), ValidationError);
    EXPECT_THROW(apply_loss(rho, 0.5, -0.1), ValidationError);
}

TEST(Loss, default_breakdown) {
    LossBreakdown lb;
    EXPECT_DOUBLE_EQ(lb.total_db(), 13.0);
    EXPECT_NEAR(lb.transmission(), std::pow(10.0, -1.3), 1e-15);
    EXPECT_NEAR(db_to_transmission(3.0), 0.501187233627272, 1e-14);
    lb.detector_db = -1.0;
    EXPECT_THROW(lb.validate(), ValidationError);
}

TEST(Patterns, noon_through_balanced_mzi) {
    for (double phi : {0.0, kPi / 4, kPi / 2, 1.1}) {
        const auto out = evolve(noon_mixed(0.5, phi, 1.0), mzi_unitary(kPi / 2));
        const auto p = pattern_probs(out);
        const double s = std::sin(phi);
        EXPECT_NEAR(p.split, s * s, 1e-12);
        EXPECT_NEAR(p.bunched_a, 0.5 * (1 - s * s), 1e-12);
        EXPECT_NEAR(p.bunched_b, 0.5 * (1 - s * s), 1e-12);
    }
}

TEST(Patterns, maximally_mixed_input_is_uniform) {
    const auto basis = enumerate_basis(2, 2);
    const DensityMatrix rho(basis, CMatrix::Identity(3, 3) / 3.0);
    for (double theta : {0.0, 0.7, kPi / 2, 2.0}) {
        const auto p = pattern_probs(evolve(rho, mzi_unitary(theta)));
        EXPECT_NEAR(p.bunched_a, 1.0 / 3, 1e-12);
        EXPECT_NEAR(p.split, 1.0 / 3, 1e-12);
        EXPECT_NEAR(p.bunched_b, 1.0 / 3, 1e-12);
    }
}

TEST(Patterns, lossy_state_only_counts_two_photon_sector) {
    const auto out = apply_loss(fock_density(FockState{1, 1}), 0.5, 0.5);
    const auto p = pattern_probs(out);
    EXPECT_NEAR(p.total(), 0.25, 1e-15);
    const auto s1 = sector_probabilities(out, 1);
    ASSERT_EQ(s1.size(), 2u);
    EXPECT_NEAR(s1[0] + s1[1], 0.5, 1e-15);
}

TEST(SplitterTree, single_pattern_examples) {
    const auto a = splitter_tree_click_probs({1.0, 0.0, 0.0});
    EXPECT_NEAR(a.same_a, 0.5, 1e-15);
    EXPECT_NEAR(a.cross + a.same_b, 0.0, 1e-15);
    const auto s = splitter_tree_click_probs({0.0, 1.0, 0.0});
    EXPECT_NEAR(s.cross, 1.0, 1e-15);
    EXPECT_NEAR(s.cross_pair(), 0.25, 1e-15);
}

TEST(SplitterTree, matches_route_enumeration) {
    // Each photon picks one of two detectors behind its mode with 1/2;
    // two photons on one detector make a single click.
    const PatternProbs probs{0.2, 0.5, 0.3};
    std::map<std::pair<int, int>, double> clicks;
    auto route = [&](int mode1, int mode2, double weight) {
        for (int d1 = 0; d1 < 2; ++d1)
            for (int d2 = 0; d2 < 2; ++d2) {
                const int x = 2 * mode1 + d1, y = 2 * mode2 + d2;
                if (x != y) clicks[{std::min(x, y), std::max(x, y)}] += 0.25 * weight;
            }
    };
    route(0, 0, probs.bunched_a);
    route(0, 1, probs.split);
    route(1, 1, probs.bunched_b);
    auto at = [&](int x, int y) { return clicks[std::make_pair(x, y)]; };
    const auto f = splitter_tree_click_probs(probs);
    EXPECT_NEAR(f.same_a, at(0, 1), 1e-15);
    EXPECT_NEAR(f.same_b, at(2, 3), 1e-15);
    EXPECT_NEAR(f.cross, at(0, 2) + at(0, 3) + at(1, 2) + at(1, 3), 1e-15);
    EXPECT_NEAR(f.cross_pair(), at(1, 3), 1e-15);
}

TEST(Visibility, full_fringe) {
    const auto s = sample([](double x) { return std::sin(x) * std::sin(x); }, 32, 2 * kPi);
    const auto fit = visibility(s, 2.0);
    EXPECT_NEAR(fit.visibility, 1.0, 1e-12);
    EXPECT_NEAR(fit.offset, 0.5, 1e-12);
    EXPECT_FALSE(fit.flat);
}

TEST(Visibility, partial_fringe_and_half_period_span) {
    const auto s = sample([](double x) { return 0.5 * (1 + 0.5 * std::cos(2 * x)); }, 33, kPi);
    EXPECT_NEAR(visibility(s, 2.0).visibility, 0.5, 1e-12);
}

TEST(Visibility, flat_data) {
    const auto s = sample([](double) { return 0.25; }, 16, 2 * kPi);
    const auto fit = visibility(s, 2.0);
    EXPECT_TRUE(fit.flat);
    EXPECT_EQ(fit.visibility, 0.0);
}

TEST(Visibility, rejects_short_or_narrow_scans) {
    const auto few = sample([](double x) { return 1 + std::cos(x); }, 4, 2 * kPi);
    EXPECT_THROW(visibility(few, 1.0), ValidationError);
    const auto narrow = sample([](double x) { return 1 + std::cos(x); }, 10, 1.0);
    EXPECT_THROW(visibility(narrow, 1.0), ValidationError);
}

TEST(Visibility, error_propagation_scales_with_sigma) {
    const auto s = sample([](double x) { return 1 + 0.6 * std::cos(x); }, 20, 2 * kPi);
    const std::vector<double> sig1(20, 0.01), sig2(20, 0.02);
    const auto f1 = visibility(s, sig1, 1.0);
    const auto f2 = visibility(s, sig2, 1.0);
    EXPECT_NEAR(f1.visibility, 0.6, 1e-12);
    EXPECT_GT(f1.visibility_error, 0.0);
    EXPECT_NEAR(f2.visibility_error / f1.visibility_error, 2.0, 1e-9);
}

TEST(LossBudget, reference_numbers) {
    EXPECT_NEAR(loss_budget(5800, 13, 0.01), 5800 * std::pow(10.0, 2.6) / 0.01, 1.0);
    EXPECT_NEAR(loss_budget(5800, 13, 0.01) / 2.309e8, 1.0, 1e-3);
    EXPECT_NEAR(loss_budget(5800, 0, 1.0), 5800, 1e-9);
    EXPECT_NEAR(loss_budget(5800, 13, 0.02), 0.5 * loss_budget(5800, 13, 0.01), 1e-6);
    EXPECT_THROW(loss_budget(5800, 13, 0.0), ValidationError);
}

TEST(FringeGrid, imbalance_limits_visibility) {
    auto options = ideal_mzi_options();
    for (double b : {0.5, 0.3, 0.1, 0.02}) {
        options.noon.balance = b;
        std::vector<FringeSample> s;
        for (int i = 0; i < 24; ++i) {
            const double phi = kPi * i / 24;
            s.push_back({phi, fringe_point(options, kPi / 2, phi).probs.split});
        }
        EXPECT_NEAR(visibility(s, 2.0).visibility, 2 * std::sqrt(b * (1 - b)), 1e-9);
    }
}

TEST(FringeGrid, purity_limits_visibility) {
    auto options = ideal_mzi_options();
    for (double p : {1.0, 0.9, 0.5, 0.1}) {
        options.noon.purity = p;
        std::vector<FringeSample> s;
        for (int i = 0; i < 24; ++i) {
            const double phi = kPi * i / 24;
            s.push_back({phi, fringe_point(options, kPi / 2, phi).probs.split});
        }
        EXPECT_NEAR(visibility(s, 2.0).visibility, p, 1e-9);
    }
}

TEST(FringeGrid, closed_or_open_mzi_keeps_pairs_bunched) {
    const auto options = ideal_mzi_options();
    for (int n = 0; n <= 2; ++n)
        for (double phi : {0.0, 0.4, 1.3, 2.9})
            EXPECT_LE(fringe_point(options, n * kPi, phi).probs.split, 1e-12);
}

TEST(FringeGrid, output_loss_scales_two_photon_events) {
    auto options = ideal_mzi_options();
    const auto lossless = fringe_point(options, 1.0, 0.7);
    options.transmissions = {0.5, 0.2};
    const auto lossy = fringe_point(options, 1.0, 0.7);
    EXPECT_NEAR(lossy.probs.bunched_a, 0.25 * lossless.probs.bunched_a, 1e-14);
    EXPECT_NEAR(lossy.probs.split, 0.1 * lossless.probs.split, 1e-14);
    EXPECT_NEAR(lossy.probs.bunched_b, 0.04 * lossless.probs.bunched_b, 1e-14);
}

TEST(FringeGrid, interior_loss_propagates) {
    CircuitSpec spec;
    spec.elements = {Coupler{}, Loss{0, 0.5}, PhaseShifter{1, 0.3}, Coupler{}};
    const auto rho = noon_mixed(0.5, 0.2, 1.0);
    const auto out = propagate(rho, spec);
    EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
    EXPECT_GE(out.min_eigenvalue(), -1e-12);
    // Same thing done by hand, stage by stage.
    const auto first = evolve(rho, coupler_unitary());
    const auto lossy = apply_loss(first, 0.5, 1.0);
    const auto stage = evolve(lossy, coupler_unitary() * phase_shifter_unitary(0.3));
    for (const auto &s : out.basis()) EXPECT_NEAR(out.probability(s), stage.probability(s), 1e-12);
}

TEST(FringeGrid, threads_do_not_change_results) {
    auto options = ideal_mzi_options();
    options.noon = {0.4, 0.0, 0.8};
    std::vector<double> thetas, phis;
    for (int i = 0; i < 9; ++i) thetas.push_back(0.7 * i);
    for (int i = 0; i < 7; ++i) phis.push_back(0.45 * i);
    options.threads = 1;
    const auto serial = fringe_grid(options, thetas, phis);
    options.threads = 4;
    const auto parallel = fringe_grid(options, thetas, phis);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].theta, parallel[i].theta);
        EXPECT_EQ(serial[i].phi, parallel[i].phi);
        EXPECT_EQ(serial[i].probs.split, parallel[i].probs.split);
        EXPECT_EQ(serial[i].probs.bunched_a, parallel[i].probs.bunched_a);
    }
}
