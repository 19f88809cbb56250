#include <gtest/gtest.h>

#include "ptsim/operators.hpp"

using namespace ptsim;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

}  // namespace

TEST(Pauli, SingleSiteZ) {
    Matrix expected(2, 2);
    expected << 1, 0, 0, -1;
    EXPECT_EQ(pauli(Axis::z, 0, 1), expected);
}

TEST(Pauli, YConvention) {
    const Matrix y = pauli_matrix(Axis::y);
    EXPECT_EQ(y(0, 1), cplx(0, -1));
    EXPECT_EQ(y(1, 0), cplx(0, 1));
}

TEST(Pauli, XOnFirstOfTwoSitesMatchesHandKronecker) {
    // sigma^x (x) I: site 0 is the most significant bit.
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 2) = expected(2, 0) = expected(1, 3) = expected(3, 1) = 1.0;
    EXPECT_EQ(pauli(Axis::x, 0, 2), expected);
}

TEST(Pauli, YSquaredIsIdentity) {
    const Matrix y = pauli(Axis::y, 1, 2);
    EXPECT_LT(max_abs(y * y - identity(4)), 1e-15);
}

TEST(Pauli, HermitianInvolutoryTraceless) {
    for (int L = 1; L <= 4; ++L)
        for (int site = 0; site < L; ++site)
            for (auto a : {Axis::x, Axis::y, Axis::z}) {
                const Matrix p = pauli(a, site, L);
                EXPECT_EQ(p, p.adjoint());
                EXPECT_LT(max_abs(p * p - identity(p.rows())), 1e-15);
                EXPECT_EQ(p.trace(), cplx(0, 0));
            }
}

TEST(Pauli, ProductRuleSitewise) {
    for (int site = 0; site < 3; ++site)
        EXPECT_LT(max_abs(pauli(Axis::x, site, 3) * pauli(Axis::y, site, 3) - I * pauli(Axis::z, site, 3)), 1e-15);
}

TEST(Pauli, DifferentSitesCommute) {
    for (auto a : {Axis::x, Axis::y, Axis::z})
        for (auto b : {Axis::x, Axis::y, Axis::z}) {
            const Matrix p = pauli(a, 0, 3), q = pauli(b, 2, 3);
            EXPECT_LT(max_abs(p * q - q * p), 1e-12);
        }
}

TEST(Pauli, Errors) {
    EXPECT_THROW(pauli(Axis::x, 2, 2), std::out_of_range);
    EXPECT_THROW(pauli(Axis::x, -1, 2), std::out_of_range);
    EXPECT_THROW(pauli(Axis::x, 0, 0), std::invalid_argument);
    EXPECT_THROW(embed(Matrix::Identity(3, 3), 0, 2), std::invalid_argument);
}

TEST(Pauli, Deterministic) { EXPECT_EQ(pauli(Axis::y, 1, 4), pauli(Axis::y, 1, 4)); }

TEST(TwoSiteZZ, TwoSites) {
    const Matrix zz = two_site_zz(0, 1, 2);
    EXPECT_EQ(zz, Vector(Eigen::Vector4cd(1, -1, -1, 1)).asDiagonal().toDenseMatrix());
}

TEST(TwoSiteZZ, ThreeSitesLexicographic) {
    Eigen::VectorXcd d(8);
    d << 1, 1, -1, -1, -1, -1, 1, 1;
    EXPECT_EQ(two_site_zz(0, 1, 3), Matrix(d.asDiagonal()));
}

TEST(TwoSiteZZ, CommutesWithZ) {
    const Matrix zz = two_site_zz(0, 2, 3);
    for (int k = 0; k < 3; ++k) {
        const Matrix z = pauli(Axis::z, k, 3);
        EXPECT_EQ(max_abs(zz * z - z * zz), 0.0);
    }
}

TEST(TwoSiteZZ, Errors) {
    EXPECT_THROW(two_site_zz(1, 1, 3), std::invalid_argument);
    EXPECT_THROW(two_site_zz(0, 3, 3), std::out_of_range);
}

TEST(Basis, SiteZeroIsMostSignificant) {
    EXPECT_EQ(site_bit(0b100, 0, 3), 1);
    EXPECT_EQ(site_bit(0b100, 2, 3), 0);
    EXPECT_EQ(spin_z(0b001, 2, 3), -1);
    EXPECT_EQ(spin_z(0b001, 0, 3), 1);
}
