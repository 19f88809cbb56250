#pragma once

// Pauli operators on an L-qubit register.
//
// Basis convention: site 0 is the most significant bit of the computational
// basis index, i.e. |s_0 s_1 ... s_{L-1}> has index sum_i s_i 2^{L-1-i}, with
// s = 0 the sigma^z = +1 state. Every builder, partial trace and entropy in
// the library uses this ordering.

#include <stdexcept>
#include <string>

#include "ptsim/types.hpp"

namespace ptsim {

enum class Axis { x, y, z };

inline Matrix pauli_matrix(Axis axis) {
    Matrix m = Matrix::Zero(2, 2);
    switch (axis) {
        case Axis::x: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case Axis::y: m(0, 1) = -I; m(1, 0) = I; break;
        case Axis::z: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    }
    return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Place a single-site operator at `site`: I x ... x op x ... x I.
inline Matrix embed(const Matrix& op, int site, int sites) {
    if (sites <= 0) throw std::invalid_argument("register must have at least one site");
    if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("embed expects a 2 x 2 single-site operator");
    if (site < 0 || site >= sites)
        throw std::out_of_range("site " + std::to_string(site) + " outside [0, " + std::to_string(sites) + ")");
    Matrix out = Matrix::Identity(1, 1);
    const Matrix id2 = Matrix::Identity(2, 2);
    for (int k = 0; k < sites; ++k) out = kron(out, k == site ? op : id2);
    return out;
}

inline Matrix pauli(Axis axis, int site, int sites) { return embed(pauli_matrix(axis), site, sites); }

/// sigma^z_i sigma^z_j, diagonal with entries +-1.
inline Matrix two_site_zz(int i, int j, int sites) {
    if (i == j) throw std::invalid_argument("two_site_zz needs distinct sites");
    return pauli(Axis::z, i, sites) * pauli(Axis::z, j, sites);
}

/// Bit of `site` in basis index `index` (0 means sigma^z = +1).
inline int site_bit(std::int64_t index, int site, int sites) {
    return static_cast<int>((index >> (sites - 1 - site)) & 1);
}

/// sigma^z eigenvalue (+1 / -1) of `site` in basis state `index`.
inline int spin_z(std::int64_t index, int site, int sites) { return 1 - 2 * site_bit(index, site, sites); }

}  // namespace ptsim
