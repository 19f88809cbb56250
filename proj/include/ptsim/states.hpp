#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptsim/lapack.hpp"
#include "ptsim/types.hpp"

namespace ptsim {

/// State vector on an L-qubit register. Normalization is the caller's
/// contract at observation times; `normalized` enforces it.
class PureState {
public:
    explicit PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
        sites_ = sites_for_dim(amplitudes_.size());
    }

    static PureState normalized(Vector amplitudes) {
        const double n = amplitudes.norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize a zero or non-finite state");
        return PureState(amplitudes / n);
    }

    /// Computational basis state |index>.
    static PureState basis(int sites, std::int64_t index) {
        Vector v = Vector::Zero(register_dim(sites));
        v(index) = 1.0;
        return PureState(std::move(v));
    }

    const Vector& amplitudes() const { return amplitudes_; }
    int sites() const { return sites_; }
    std::int64_t dim() const { return amplitudes_.size(); }
    double norm() const { return amplitudes_.norm(); }

private:
    Vector amplitudes_;
    int sites_ = 0;
};

/// Product state from one (alpha, beta) qubit per site, site 0 most significant.
inline PureState product_state(const std::vector<std::array<cplx, 2>>& qubits) {
    Vector v = Vector::Ones(1);
    for (const auto& q : qubits) {
        Vector next(v.size() * 2);
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            next(2 * k) = v(k) * q[0];
            next(2 * k + 1) = v(k) * q[1];
        }
        v = std::move(next);
    }
    return PureState::normalized(std::move(v));
}

class DensityMatrix {
public:
    explicit DensityMatrix(Matrix m) : matrix_(std::move(m)) {
        if (matrix_.rows() != matrix_.cols()) throw std::invalid_argument("density matrix must be square");
        sites_ = sites_for_dim(matrix_.rows());
    }

    /// Rescale to unit trace; throws on zero trace.
    static DensityMatrix normalized(Matrix m) {
        const cplx tr = m.trace();
        if (std::abs(tr) == 0.0 || !std::isfinite(std::abs(tr))) throw NumericalError("density matrix has zero trace");
        m /= tr.real();
        return DensityMatrix(std::move(m));
    }

    static DensityMatrix maximally_mixed(int sites) {
        const auto d = register_dim(sites);
        return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
    }

    static DensityMatrix from_pure(const PureState& psi) {
        return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
    }

    const Matrix& matrix() const { return matrix_; }
    int sites() const { return sites_; }
    std::int64_t dim() const { return matrix_.rows(); }

    /// Empty when Hermitian, PSD and unit trace within `tol`; otherwise one message per violation.
    std::vector<std::string> violations(double tol = 1e-10) const {
        std::vector<std::string> out;
        const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
        if (herm > tol) out.push_back("not Hermitian: max |rho - rho^dag| = " + std::to_string(herm));
        const double tr_err = std::abs(matrix_.trace() - 1.0);
        if (tr_err > tol) out.push_back("trace differs from 1 by " + std::to_string(tr_err));
        const Matrix sym = 0.5 * (matrix_ + matrix_.adjoint());
        const double min_eig = lapack::heev(sym, false).values.minCoeff();
        if (min_eig < -tol) out.push_back("negative eigenvalue " + std::to_string(min_eig));
        return out;
    }

private:
    Matrix matrix_;
    int sites_ = 0;
};

/// Tr(rho^2) / (Tr rho)^2; accepts unnormalized input.
inline double purity(const Matrix& rho) {
    const cplx tr = rho.trace();
    if (std::abs(tr) == 0.0) throw NumericalError("purity of a zero-trace matrix");
    // Tr(rho rho) = sum_ij rho_ij rho_ji
    const cplx tr2 = (rho.array() * rho.transpose().array()).sum();
    return tr2.real() / (tr.real() * tr.real());
}

inline double purity(const DensityMatrix& rho) { return purity(rho.matrix()); }

/// Reduced density matrix on sites [0, cut).
inline Matrix partial_trace_keep_first(const Matrix& rho, int cut) {
    const int L = sites_for_dim(rho.rows());
    if (cut < 0 || cut > L) throw std::out_of_range("cut " + std::to_string(cut) + " outside [0, L]");
    const auto da = register_dim(cut);
    const auto db = register_dim(L - cut);
    Matrix out = Matrix::Zero(da, da);
    for (std::int64_t a = 0; a < da; ++a)
        for (std::int64_t ap = 0; ap < da; ++ap) {
            cplx acc{};
            for (std::int64_t b = 0; b < db; ++b) acc += rho(a * db + b, ap * db + b);
            out(a, ap) = acc;
        }
    return out;
}

namespace detail {
inline void check_cut(int cut, int sites) {
    if (cut < 1 || cut > sites - 1)
        throw std::out_of_range("cut " + std::to_string(cut) + " outside [1, " + std::to_string(sites - 1) + "]");
}

/// Tr(rho_A^2) for a (not necessarily normalized) vector, using the smaller side's Gram matrix.
inline double reduced_purity_unnormalized(const Vector& psi, int cut, int sites) {
    const auto da = register_dim(cut);
    const auto db = register_dim(sites - cut);
    // Column-major map: mt(b, a) = psi[a * db + b].
    Eigen::Map<const Matrix> mt(psi.data(), db, da);
    const Matrix gram = da <= db ? Matrix(mt.transpose() * mt.conjugate()) : Matrix(mt * mt.adjoint());
    const double tr = gram.trace().real();
    return gram.squaredNorm() / (tr * tr);
}
}  // namespace detail

/// Second Renyi entropy (bits) of sites [0, cut) for a normalized pure state.
inline double renyi2_halfcut(const PureState& psi, int cut) {
    detail::check_cut(cut, psi.sites());
    if (std::abs(psi.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("renyi2_halfcut needs a normalized state (norm = " + std::to_string(psi.norm()) +
                                    ")");
    return -std::log2(detail::reduced_purity_unnormalized(psi.amplitudes(), cut, psi.sites()));
}

/// Second Renyi entropy (bits) of sites [0, cut) for a mixed state.
inline double renyi2_reduced(const DensityMatrix& rho, int cut) {
    detail::check_cut(cut, rho.sites());
    return -std::log2(purity(partial_trace_keep_first(rho.matrix(), cut)));
}

}  // namespace ptsim
