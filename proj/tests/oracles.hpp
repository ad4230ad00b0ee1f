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

// Independent reference computations for the unit and acceptance suites.
// Nothing here calls into the code paths it is used to check.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

namespace noonsim::oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Permanent straight from the definition: sum over all n! permutations.
inline Complex naive_permanent(const CMatrix &a) {
    const int n = static_cast<int>(a.rows());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Complex total = 0.0;
    do {
        Complex term = 1.0;
        for (int i = 0; i < n; ++i) term *= a(i, perm[i]);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return n == 0 ? Complex{1.0} : total;
}

/// Haar-ish random unitary from the QR of a complex Gaussian matrix.
inline CMatrix random_unitary(int m, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CMatrix z(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) z(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < m; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
    return q;
}

/// Occupation lists of n photons in m modes, descending lexicographic.
inline std::vector<std::vector<int>> fock_basis(int m, int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> occ(m, 0);
    std::function<void(int, int)> rec = [&](int mode, int left) {
        if (mode == m - 1) {
            occ[mode] = left;
            out.push_back(occ);
            return;
        }
        for (int k = left; k >= 0; --k) {
            occ[mode] = k;
            rec(mode + 1, left - k);
        }
    };
    rec(0, n);
    return out;
}

/// Lift of a mode unitary to the n-photon sector through the explicit
/// symmetric subspace of the n-fold tensor product: each Fock state is the
/// normalized symmetrization of e_{i1} x ... x e_{in}, the photons evolve by
/// U^{x n} (a photon in mode j goes to sum_k U(k, j) e_k), and the result is
/// projected back onto the symmetrized states.
inline CMatrix symmetric_tensor_lift(const CMatrix &u, int n) {
    const int m = static_cast<int>(u.rows());
    int dim = 1;
    for (int i = 0; i < n; ++i) dim *= m;
    auto index_of = [&](const std::vector<int> &modes) {
        int idx = 0;
        for (int k : modes) idx = idx * m + k;
        return idx;
    };
    const auto basis = fock_basis(m, n);
    CMatrix sym = CMatrix::Zero(dim, static_cast<Eigen::Index>(basis.size()));
    for (std::size_t b = 0; b < basis.size(); ++b) {
        std::vector<int> modes;
        for (int k = 0; k < m; ++k) modes.insert(modes.end(), basis[b][k], k);
        std::sort(modes.begin(), modes.end());
        do {
            sym(index_of(modes), static_cast<Eigen::Index>(b)) += 1.0;
        } while (std::next_permutation(modes.begin(), modes.end()));
        sym.col(static_cast<Eigen::Index>(b)).normalize();
    }
    CMatrix tensor = CMatrix::Ones(1, 1);
    for (int i = 0; i < n; ++i) {
        CMatrix next(tensor.rows() * m, tensor.cols() * m);
        for (Eigen::Index r = 0; r < tensor.rows(); ++r)
            for (Eigen::Index c = 0; c < tensor.cols(); ++c) next.block(r * m, c * m, m, m) = tensor(r, c) * u;
        tensor = next;
    }
    return sym.adjoint() * tensor * sym;
}

/// Trapezoid rule on a uniform grid of `points` nodes.
template <class F>
double trapezoid(F f, double lo, double hi, int points) {
    const double h = (hi - lo) / (points - 1);
    double total = 0.5 * (f(lo) + f(hi));
    for (int i = 1; i < points - 1; ++i) total += f(lo + i * h);
    return total * h;
}

}  // namespace noonsim::oracle
