#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ptsim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx I{0.0, 1.0};

/// Invalid user input (bad parameters, unknown config keys). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine failed or produced output that violates its contract.
/// Maps to CLI exit code 1.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hilbert-space dimension of an L-site qubit register.
inline std::int64_t register_dim(int sites) { return std::int64_t{1} << sites; }

/// Inverse of register_dim; throws if dim is not a power of two.
inline int sites_for_dim(std::int64_t dim) {
    int sites = 0;
    while ((std::int64_t{1} << sites) < dim) ++sites;
    if ((std::int64_t{1} << sites) != dim)
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    return sites;
}

}  // namespace ptsim
