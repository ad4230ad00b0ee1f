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

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace noonsim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Photon occupation numbers over a fixed set of optical modes.
class FockState {
   public:
    FockState() = default;
    FockState(std::initializer_list<int> occupations);
    explicit FockState(std::vector<int> occupations);

    std::size_t mode_count() const { return occupations_.size(); }
    int photon_number() const;
    int operator[](std::size_t mode) const { return occupations_[mode]; }
    const std::vector<int> &occupations() const { return occupations_; }

    /// Renders as a ket, e.g. "|2,0>".
    std::string to_string() const;

    friend bool operator==(const FockState &, const FockState &) = default;

   private:
    std::vector<int> occupations_;
};

/// All occupation lists of `photons` photons over `modes` modes, in
/// descending lexicographic order. For two modes and two photons this is
/// |2,0>, |1,1>, |0,2>. Every serialized probability vector in the library
/// refers to this order.
std::vector<FockState> enumerate_basis(int modes, int photons);

/// Basis holding every photon-number sector from `max_photons` down to 0,
/// each sector in canonical order. Used once loss has mixed sectors.
std::vector<FockState> enumerate_sectors(int modes, int max_photons);

/// Matrix permanent by Ryser inclusion-exclusion with Gray-code row sums,
/// O(2^n n). Throws ShapeError for non-square input or n > 20.
Complex permanent(const CMatrix &a);

/// Complex m x m unitary acting on mode creation operators.
///
/// Convention: input mode j maps to a_j^dag -> sum_k U(k, j) a_k^dag, so the
/// column j holds the output amplitudes of a photon entering mode j. With
/// this choice the single-photon sector of the lifted operator equals U and
/// lifting is a homomorphism, lift(U V) = lift(U) lift(V).
class ModeUnitary {
   public:
    static constexpr double kTolerance = 1e-10;

    /// Throws ValidationError when U U^dag deviates from identity by more than
    /// kTolerance (max-abs entry) or the matrix is not square.
    explicit ModeUnitary(CMatrix matrix);

    static ModeUnitary identity(int modes);

    int mode_count() const { return static_cast<int>(matrix_.rows()); }
    const CMatrix &matrix() const { return matrix_; }
    Complex operator()(int row, int col) const { return matrix_(row, col); }

    ModeUnitary operator*(const ModeUnitary &rhs) const;

   private:
    CMatrix matrix_;
};

/// Fock-space operator of `u` on the `photons`-photon sector, indexed by
/// enumerate_basis(m, photons):
///   <T|U|S> = Per(U[T, S]) / sqrt(prod s_i! prod t_j!)
/// with rows of U repeated by the output occupations T and columns by the
/// input occupations S.
CMatrix lift_unitary(const ModeUnitary &u, int photons);

/// Block-diagonal lift over an arbitrary basis made of whole canonical
/// sectors. Entries between states of different photon number are zero.
CMatrix lift_unitary(const ModeUnitary &u, std::span<const FockState> basis);

/// Normalized amplitude vector over a canonical fixed-photon-number basis.
class PureState {
   public:
    static constexpr double kNormTolerance = 1e-12;

    /// Throws ValidationError unless `basis` equals enumerate_basis for its
    /// mode and photon count and the amplitudes have unit norm.
    PureState(std::vector<FockState> basis, CVector amplitudes);

    const std::vector<FockState> &basis() const { return basis_; }
    const CVector &amplitudes() const { return amplitudes_; }
    int mode_count() const { return static_cast<int>(basis_.front().mode_count()); }
    int photon_number() const { return basis_.front().photon_number(); }

    Complex amplitude(const FockState &state) const;
    std::vector<double> probabilities() const;

   private:
    std::vector<FockState> basis_;
    CVector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite matrix over a basis built
/// from whole canonical photon-number sectors (one sector, or several after
/// loss).
class DensityMatrix {
   public:
    static constexpr double kHermitianTolerance = 1e-12;
    static constexpr double kTraceTolerance = 1e-12;
    static constexpr double kEigenTolerance = 1e-10;

    /// Validates every invariant; throws ValidationError on failure.
    DensityMatrix(std::vector<FockState> basis, CMatrix matrix);

    static DensityMatrix from_pure(const PureState &state);

    const std::vector<FockState> &basis() const { return basis_; }
    const CMatrix &matrix() const { return matrix_; }
    int mode_count() const { return static_cast<int>(basis_.front().mode_count()); }

    /// Index of `state` in the basis, or -1.
    int index_of(const FockState &state) const;

    /// Diagonal element for `state`; zero when absent from the basis.
    double probability(const FockState &state) const;

    double min_eigenvalue() const;

   private:
    std::vector<FockState> basis_;
    CMatrix matrix_;
};

/// Applies the Fock-space lift of `u`. Norm and trace are preserved.
PureState evolve(const PureState &state, const ModeUnitary &u);
DensityMatrix evolve(const DensityMatrix &state, const ModeUnitary &u);

}  // namespace noonsim
