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

#include "noonsim/fock.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>

#include "noonsim/error.hpp"

namespace noonsim {

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

void enumerate_into(int modes, int photons, std::vector<int> &prefix, std::vector<FockState> &out) {
    int mode = static_cast<int>(prefix.size());
    if (mode == modes - 1) {
        prefix.push_back(photons);
        out.emplace_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int k = photons; k >= 0; --k) {
        prefix.push_back(k);
        enumerate_into(modes, photons - k, prefix, out);
        prefix.pop_back();
    }
}

// Mode index list with each mode repeated by its occupation.
std::vector<int> expand_modes(const FockState &state) {
    std::vector<int> out;
    for (std::size_t k = 0; k < state.mode_count(); ++k) {
        out.insert(out.end(), state[k], static_cast<int>(k));
    }
    return out;
}

double occupation_norm(const FockState &state) {
    double p = 1;
    for (int n : state.occupations()) {
        p *= factorial(n);
    }
    return p;
}

struct Sector {
    int photons;
    std::size_t offset;
    std::size_t size;
};

// Splits a basis into whole canonical sectors; throws if it is not one.
std::vector<Sector> split_sectors(std::span<const FockState> basis) {
    if (basis.empty()) {
        throw ValidationError("basis must not be empty");
    }
    const int modes = static_cast<int>(basis.front().mode_count());
    std::vector<Sector> sectors;
    std::set<int> seen;
    std::size_t pos = 0;
    while (pos < basis.size()) {
        const int n = basis[pos].photon_number();
        if (!seen.insert(n).second) {
            throw ValidationError("basis repeats the " + std::to_string(n) + "-photon sector");
        }
        auto expected = enumerate_basis(modes, n);
        if (pos + expected.size() > basis.size() ||
            !std::equal(expected.begin(), expected.end(), basis.begin() + static_cast<std::ptrdiff_t>(pos))) {
            throw ValidationError("basis is not in canonical order at index " + std::to_string(pos));
        }
        sectors.push_back({n, pos, expected.size()});
        pos += expected.size();
    }
    return sectors;
}

}  // namespace

FockState::FockState(std::initializer_list<int> occupations) : FockState(std::vector<int>(occupations)) {}

FockState::FockState(std::vector<int> occupations) : occupations_(std::move(occupations)) {
    if (occupations_.empty()) {
        throw ValidationError("FockState needs at least one mode");
    }
    for (int n : occupations_) {
        if (n < 0) {
            throw ValidationError("occupation numbers must be non-negative");
        }
    }
}

int FockState::photon_number() const { return std::accumulate(occupations_.begin(), occupations_.end(), 0); }

std::string FockState::to_string() const {
    std::ostringstream out;
    out << '|';
    for (std::size_t k = 0; k < occupations_.size(); ++k) {
        out << (k ? "," : "") << occupations_[k];
    }
    out << '>';
    return out.str();
}

std::vector<FockState> enumerate_basis(int modes, int photons) {
    if (modes < 1 || photons < 0) {
        throw ValidationError("enumerate_basis requires modes >= 1 and photons >= 0");
    }
    std::vector<FockState> out;
    std::vector<int> prefix;
    enumerate_into(modes, photons, prefix, out);
    return out;
}

std::vector<FockState> enumerate_sectors(int modes, int max_photons) {
    std::vector<FockState> out;
    for (int n = max_photons; n >= 0; --n) {
        auto sector = enumerate_basis(modes, n);
        out.insert(out.end(), sector.begin(), sector.end());
    }
    return out;
}

Complex permanent(const CMatrix &a) {
    if (a.rows() != a.cols()) {
        throw ShapeError("permanent requires a square matrix");
    }
    const int n = static_cast<int>(a.rows());
    if (n > 20) {
        throw ShapeError("permanent supports dimension <= 20");
    }
    if (n == 0) {
        return 1.0;
    }
    // Ryser: Per(A) = (-1)^n sum_{S != {}} (-1)^{|S|} prod_i sum_{j in S} a_ij,
    // walking subsets in Gray-code order so each step toggles one column.
    std::vector<Complex> row_sums(n, 0.0);
    Complex total = 0.0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    std::uint64_t gray = 0;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        const int col = std::countr_zero(k);
        const std::uint64_t bit = std::uint64_t{1} << col;
        gray ^= bit;
        const double sign = (gray & bit) ? 1.0 : -1.0;
        Complex prod = 1.0;
        for (int i = 0; i < n; ++i) {
            row_sums[i] += sign * a(i, col);
            prod *= row_sums[i];
        }
        total += (std::popcount(gray) % 2 ? -1.0 : 1.0) * prod;
    }
    return (n % 2 ? -1.0 : 1.0) * total;
}

ModeUnitary::ModeUnitary(CMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
        throw ShapeError("mode unitary must be a non-empty square matrix");
    }
    const CMatrix defect = matrix_ * matrix_.adjoint() - CMatrix::Identity(matrix_.rows(), matrix_.cols());
    if (defect.cwiseAbs().maxCoeff() > kTolerance) {
        throw ValidationError("matrix is not unitary within 1e-10");
    }
}

ModeUnitary ModeUnitary::identity(int modes) { return ModeUnitary(CMatrix::Identity(modes, modes)); }

ModeUnitary ModeUnitary::operator*(const ModeUnitary &rhs) const {
    if (rhs.mode_count() != mode_count()) {
        throw ShapeError("mode count mismatch in unitary product");
    }
    return ModeUnitary(matrix_ * rhs.matrix_);
}

CMatrix lift_unitary(const ModeUnitary &u, int photons) {
    const auto basis = enumerate_basis(u.mode_count(), photons);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    CMatrix out(dim, dim);
    std::vector<std::vector<int>> modes(basis.size());
    std::vector<double> norms(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        modes[i] = expand_modes(basis[i]);
        norms[i] = occupation_norm(basis[i]);
    }
    CMatrix sub(photons, photons);
    for (Eigen::Index t = 0; t < dim; ++t) {
        for (Eigen::Index s = 0; s < dim; ++s) {
            for (int r = 0; r < photons; ++r) {
                for (int c = 0; c < photons; ++c) {
                    sub(r, c) = u(modes[t][r], modes[s][c]);
                }
            }
            out(t, s) = permanent(sub) / std::sqrt(norms[t] * norms[s]);
        }
    }
    return out;
}

CMatrix lift_unitary(const ModeUnitary &u, std::span<const FockState> basis) {
    const auto sectors = split_sectors(basis);
    if (static_cast<int>(basis.front().mode_count()) != u.mode_count()) {
        throw ShapeError("basis mode count does not match the unitary");
    }
    const auto dim = static_cast<Eigen::Index>(basis.size());
    CMatrix out = CMatrix::Zero(dim, dim);
    for (const auto &sector : sectors) {
        const auto at = static_cast<Eigen::Index>(sector.offset);
        const auto size = static_cast<Eigen::Index>(sector.size);
        out.block(at, at, size, size) = lift_unitary(u, sector.photons);
    }
    return out;
}

PureState::PureState(std::vector<FockState> basis, CVector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    const auto sectors = split_sectors(basis_);
    if (sectors.size() != 1) {
        throw ValidationError("a pure state lives in a single photon-number sector");
    }
    if (amplitudes_.size() != static_cast<Eigen::Index>(basis_.size())) {
        throw ShapeError("amplitude count does not match the basis");
    }
    if (std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTolerance) {
        throw ValidationError("state is not normalized within 1e-12");
    }
}

Complex PureState::amplitude(const FockState &state) const {
    auto it = std::find(basis_.begin(), basis_.end(), state);
    return it == basis_.end() ? Complex{0.0} : amplitudes_(it - basis_.begin());
}

std::vector<double> PureState::probabilities() const {
    std::vector<double> out(basis_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::norm(amplitudes_(static_cast<Eigen::Index>(i)));
    }
    return out;
}

DensityMatrix::DensityMatrix(std::vector<FockState> basis, CMatrix matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
    split_sectors(basis_);
    const auto dim = static_cast<Eigen::Index>(basis_.size());
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw ShapeError("density matrix shape does not match the basis");
    }
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
        throw ValidationError("density matrix is not Hermitian within 1e-12");
    }
    if (std::abs(matrix_.trace().real() - 1.0) > kTraceTolerance) {
        throw ValidationError("density matrix trace differs from 1 by more than 1e-12");
    }
    if (min_eigenvalue() < -kEigenTolerance) {
        throw ValidationError("density matrix is not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::from_pure(const PureState &state) {
    const CVector &v = state.amplitudes();
    return DensityMatrix(state.basis(), v * v.adjoint());
}

int DensityMatrix::index_of(const FockState &state) const {
    auto it = std::find(basis_.begin(), basis_.end(), state);
    return it == basis_.end() ? -1 : static_cast<int>(it - basis_.begin());
}

double DensityMatrix::probability(const FockState &state) const {
    const int i = index_of(state);
    // Diagonal round-off can dip a few ulps below zero.
    return i < 0 ? 0.0 : std::clamp(matrix_(i, i).real(), 0.0, 1.0);
}

double DensityMatrix::min_eigenvalue() const {
    // Symmetrize so round-off in the anti-Hermitian part cannot leak in.
    const CMatrix h = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

PureState evolve(const PureState &state, const ModeUnitary &u) {
    if (state.mode_count() != u.mode_count()) {
        throw ShapeError("state and unitary disagree on mode count");
    }
    const CMatrix lifted = lift_unitary(u, state.photon_number());
    CVector out = lifted * state.amplitudes();
    out /= out.norm();
    return PureState(state.basis(), std::move(out));
}

DensityMatrix evolve(const DensityMatrix &state, const ModeUnitary &u) {
    if (state.mode_count() != u.mode_count()) {
        throw ShapeError("state and unitary disagree on mode count");
    }
    const CMatrix lifted = lift_unitary(u, state.basis());
    CMatrix out = lifted * state.matrix() * lifted.adjoint();
    out = 0.5 * (out + out.adjoint()).eval();
    out /= out.trace().real();
    return DensityMatrix(state.basis(), std::move(out));
}

}  // namespace noonsim
