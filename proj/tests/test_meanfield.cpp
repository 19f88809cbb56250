#include <gtest/gtest.h>

#include <cmath>

#include "ptsim/meanfield.hpp"
#include "ptsim/steady_state.hpp"

using namespace ptsim;

TEST(MeanField, ClosedFormExamples) {
    EXPECT_NEAR(phase_boundary({1.25, 1.0, 0.0, 2, 0.0}), 2.5625, 1e-15);
    EXPECT_NEAR(phase_boundary({1.25, 1.0, 0.625, 2, 0.0}), 1.0, 1e-15);  // vertex at h = J z
    EXPECT_NEAR(phase_boundary({1.25, 1.0, 1.0, 2, 0.0}), 1.5625, 1e-15);
    EXPECT_NEAR(phase_boundary({1.25, 2.0, 0.0, 2, 0.0}), (4.0 + 1.5625) / 2.0, 1e-15);
    EXPECT_THROW(phase_boundary({1.25, 0.0, 0.0, 2, 0.0}), ConfigError);
}

TEST(MeanField, BoundaryMinimumAtVertex) {
    const auto curve = boundary_curve(1.0, 1.25, 2, {0.0, 0.3, 0.625, 0.9, 1.2});
    EXPECT_GT(curve[0].second, curve[1].second);
    EXPECT_GT(curve[1].second, curve[2].second);
    EXPECT_LT(curve[2].second, curve[3].second);
    EXPECT_LT(curve[3].second, curve[4].second);
    EXPECT_NEAR(curve[2].second, 1.0, 1e-15);
}

TEST(MeanField, ZeroCouplingIsLinear) {
    MeanFieldParameters p{1.25, 1.0, 0.0, 2, 1.0};
    const auto m = solve_self_consistency(p);
    ASSERT_TRUE(m.has_value());
    EXPECT_NEAR(*m, -1.0 / 2.5625, 1e-12);
    EXPECT_NEAR(continuation_gamma_c(p), 2.5625, 1e-8);
}

TEST(MeanField, ContinuationMatchesClosedForm) {
    for (double J : {0.1, 0.3, 0.5, 0.625}) {
        MeanFieldParameters p{1.25, 1.0, J, 2, 0.0};
        EXPECT_NEAR(continuation_gamma_c(p), phase_boundary(p), 1e-6) << "J=" << J;
    }
}

TEST(MeanField, RootSatisfiesSelfConsistency) {
    MeanFieldParameters p{1.25, 1.0, 0.4, 2, 0.8};
    const auto m = solve_self_consistency(p);
    ASSERT_TRUE(m.has_value());
    const double heff = p.h + p.J * p.z * *m;
    EXPECT_NEAR(*m, -p.g * p.gamma / (p.g * p.g + heff * heff), 1e-12);
    EXPECT_NEAR(self_consistency_function(*m, p), 0.0, 1e-12);
}

TEST(MeanField, MagnetizationDecreasesWithGamma) {
    MeanFieldParameters p{1.25, 1.0, 0.3, 2, 0.0};
    std::vector<double> gammas;
    for (int k = 0; k <= 20; ++k) gammas.push_back(0.07 * k);
    const auto curve = magnetization_curve(p, gammas);
    EXPECT_EQ(*curve.front().second, 0.0);
    for (std::size_t k = 1; k < curve.size(); ++k) {
        ASSERT_TRUE(curve[k].second.has_value());
        EXPECT_LT(*curve[k].second, *curve[k - 1].second);
    }
}

TEST(MeanField, RootLostBeyondBoundary) {
    MeanFieldParameters p{1.25, 1.0, 0.3, 2, 0.0};
    p.gamma = phase_boundary(p) + 0.05;
    EXPECT_FALSE(solve_self_consistency(p).has_value());
    p.gamma = phase_boundary(p) - 0.05;
    ASSERT_TRUE(solve_self_consistency(p).has_value());
    EXPECT_GT(*solve_self_consistency(p), -1.0);
}

TEST(MeanField, FullMagnetizationAtVertex) {
    MeanFieldParameters p{1.25, 1.0, 0.625, 2, 1.0 - 1e-9};
    const auto m = solve_self_consistency(p);
    ASSERT_TRUE(m.has_value());
    EXPECT_NEAR(*m, -1.0, 1e-4);
}

TEST(MeanField, ZeroCouplingMatchesSingleSpinDiagonalEnsemble) {
    // Agreement holds below the single-spin exceptional point sqrt(g^2 + h^2).
    for (double gamma : {0.2, 0.6, 1.0, 1.4}) {
        ChainParameters c;
        c.sites = 1;
        c.gamma = gamma;
        const auto ss = steady_state(decompose(build_chain(c)));
        const auto m = solve_self_consistency({1.25, 1.0, 0.0, 2, gamma});
        ASSERT_TRUE(m.has_value());
        EXPECT_NEAR(ss.sigma_z_mean, *m, 1e-10) << "gamma=" << gamma;
    }
}

TEST(MeanField, Validation) {
    EXPECT_THROW(solve_self_consistency({1.25, 0.0, 0.0, 2, 0.5}), ConfigError);
    EXPECT_THROW(solve_self_consistency({1.25, 1.0, 0.0, 2, -0.5}), ConfigError);
    EXPECT_THROW(magnetization_curve({1.25, 1.0, 0.0, 2, 0.0}, {0.5, 0.2}), ConfigError);
}
