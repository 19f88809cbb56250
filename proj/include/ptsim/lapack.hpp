#pragma once

// Thin RAII-free wrappers over the LAPACKE routines the library needs. Every
// wrapper takes its matrix argument by value (LAPACK destroys the input) and
// reports failure through NumericalError with the routine name and info code.

#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#include <lapacke.h>

#include "ptsim/types.hpp"

namespace ptsim::lapack {

namespace detail {
inline void check(lapack_int info, const char* routine) {
    if (info != 0)
        throw NumericalError(std::string(routine) + " failed with info = " + std::to_string(info));
}
}  // namespace detail

struct GeneralEigen {
    Vector values;
    Matrix right_vectors;  // empty when not requested
};

/// General complex eigenproblem (zgeev). Right eigenvectors come back with unit 2-norm.
inline GeneralEigen zgeev(Matrix a, bool want_vectors) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    GeneralEigen out;
    out.values.resize(n);
    if (want_vectors) out.right_vectors.resize(n, n);
    cplx dummy{};
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, a.data(), n, out.values.data(), &dummy, 1,
        want_vectors ? out.right_vectors.data() : &dummy, want_vectors ? n : 1);
    detail::check(info, "zgeev");
    return out;
}

struct HermitianEigen {
    RealVector values;  // ascending
    Matrix vectors;     // orthonormal columns; empty when not requested
};

/// Hermitian eigenproblem on the upper triangle via zheevr (MRRR). The
/// divide-and-conquer driver zheevd returns non-orthogonal eigenvectors for
/// n >= 512 with some OpenBLAS builds, so it is not used.
inline HermitianEigen heev(Matrix a, bool want_vectors) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    HermitianEigen out;
    out.values.resize(n);
    if (want_vectors) out.vectors.resize(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(std::max<lapack_int>(n, 1)));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'A', 'U', n, a.data(), n, 0.0,
                                           0.0, 0, 0, 0.0, &found, out.values.data(),
                                           want_vectors ? out.vectors.data() : nullptr, std::max<lapack_int>(n, 1),
                                           support.data());
    detail::check(info, "zheevr");
    if (found != n) throw NumericalError("zheevr returned " + std::to_string(found) + " of " + std::to_string(n) +
                                         " eigenvalues");
    return out;
}

/// Eigenvalues of a real symmetric matrix (dsyevd), ascending.
inline RealVector dsyevd_values(Eigen::MatrixXd a) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    RealVector w(n);
    detail::check(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data()), "dsyevd");
    return w;
}

/// Singular values only (zgesdd, jobz = 'N'), descending.
inline RealVector singular_values(Matrix a) {
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    RealVector s(std::min(m, n));
    cplx du{}, dvt{};
    detail::check(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, a.data(), m, s.data(), &du, 1, &dvt, 1), "zgesdd");
    return s;
}

/// LU-based inverse (zgetrf + zgetri). Throws on an exactly singular pivot.
inline Matrix inverse(Matrix a) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    std::vector<lapack_int> ipiv(static_cast<std::size_t>(n));
    detail::check(LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, a.data(), n, ipiv.data()), "zgetrf");
    detail::check(LAPACKE_zgetri(LAPACK_COL_MAJOR, n, a.data(), n, ipiv.data()), "zgetri");
    return a;
}

}  // namespace ptsim::lapack
