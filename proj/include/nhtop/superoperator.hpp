// superoperator.hpp — Full Lindbladian on the zero/one-excitation operator space
//
// Basis of V (dimension (N+1)^2), sites 1-based:
//   0                      |0><0|
//   j                      |0><j|      (V01)
//   N + j                  |j><0|      (V10)
//   2N + (i-1)N + j        |i><j|      (V11, row-major)

#pragma once

#include "nhtop/netmodel.hpp"

namespace nhtop::netmodel {

enum class Block { v00, v01, v10, v11 };

struct Superoperator {
    int n_sites = 0;
    CMatrix matrix;

    Eigen::Index dim() const { return matrix.rows(); }

    static Eigen::Index vacuum() { return 0; }
    Eigen::Index ket0_bra(int j) const { return j; }
    Eigen::Index ket_bra0(int j) const { return n_sites + j; }
    Eigen::Index ket_bra(int i, int j) const { return 2 * n_sites + (i - 1) * n_sites + j; }

    Block block_of(Eigen::Index index) const;

    // Sub-matrix mapping block `from` into block `to` (rows in `to`).
    CMatrix block(Block to, Block from) const;
};

// Row/column block pairs that may hold nonzero entries.
bool block_allowed(Block to, Block from);

// L = -i[H0, .] + sum_l Gamma_l (a_l rho a_l^dag - {a_l^dag a_l, rho}/2), with H0
// the hopping/detuning matrix and a_l = |0><l|.
Superoperator build_full_superoperator(const NetworkSpec& spec);

// Same construction from H: H0 = Hermitian part, Gamma_l = -2 Im H_ll.
Superoperator build_full_superoperator(const EffectiveHamiltonian& h);

} // namespace nhtop::netmodel
