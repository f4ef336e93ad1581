#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "bouss/assembly.hpp"
#include "bouss/banded.hpp"

using namespace bouss;

namespace {

Eigen::MatrixXd dense(const BandedSPDMatrix& a) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.dim(), a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) d(i, j) = a(i, j);
    return d;
}

}  // namespace

TEST(Banded, IdentityFactor) {
    BandedSPDMatrix id(5, 2);
    for (std::size_t i = 0; i < 5; ++i) id.set(i, i, 1.0);
    const auto f = cholesky(id);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j <= i; ++j) EXPECT_EQ(f.factor(i, j), i == j ? 1.0 : 0.0);
    const std::vector<double> rhs{1, -2, 3, 4.5, 0};
    EXPECT_EQ(f.solve(rhs), rhs);
}

TEST(Banded, MassMatrixRoundTrip) {
    const auto s = build_space(uniform_mesh(4), {1, Boundary::Free});
    const auto m = assemble_matrix(*s, Form::Mass);
    const auto f = cholesky(m);
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) {
            double llt = 0.0;
            for (std::size_t k = 0; k <= std::min(i, j); ++k) llt += f.factor(i, k) * f.factor(j, k);
            EXPECT_NEAR(llt, m(i, j), 1e-14);
        }
}

TEST(Banded, ZeroDiagonalRejected) {
    BandedSPDMatrix a(3, 1);
    a.set(0, 0, 1.0);
    a.set(2, 2, 1.0);
    EXPECT_THROW(cholesky(a), NotPositiveDefinite);
}

TEST(Banded, RandomTridiagonalAgainstDense) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BandedSPDMatrix a(6, 1);
    for (std::size_t i = 0; i < 6; ++i) {
        a.set(i, i, 4.0 + u(rng));
        if (i > 0) a.set(i, i - 1, u(rng));
    }
    std::vector<double> rhs(6);
    for (double& r : rhs) r = u(rng);
    const auto x = cholesky(a).solve(rhs);
    const Eigen::VectorXd ref = dense(a).lu().solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), 6));
    for (int i = 0; i < 6; ++i) EXPECT_NEAR(x[i], ref(i), 1e-10);
}

TEST(Banded, ConstructedSolutionIsOnes) {
    const auto s = build_space(uniform_mesh(16), {3, Boundary::Free});
    const auto g = assemble_matrix(*s, Form::Mass);
    const auto x = cholesky(g).solve(g.multiply(std::vector<double>(g.dim(), 1.0)));
    for (double v : x) EXPECT_NEAR(v, 1.0, 1e-10);
}

TEST(Banded, BandwidthFollowsDegree) {
    const Mesh m = uniform_mesh(10);
    EXPECT_EQ(assemble_matrix(*build_space(m, {1, Boundary::Free}), Form::Mass).bandwidth(), 1u);
    EXPECT_EQ(assemble_matrix(*build_space(m, {2, Boundary::ZeroBoth}), Form::Mass).bandwidth(), 2u);
    EXPECT_EQ(assemble_matrix(*build_space(m, {3, Boundary::Free}), Form::Mass).bandwidth(), 3u);
}

TEST(Banded, MassSpectrumScalesWithH) {
    std::vector<double> lo, hi;
    for (std::size_t n : {8, 16, 32}) {
        const auto s = build_space(uniform_mesh(n), {1, Boundary::Free});
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(assemble_matrix(*s, Form::Mass)));
        const double h = 1.0 / n;
        lo.push_back(es.eigenvalues().minCoeff() / h);
        hi.push_back(es.eigenvalues().maxCoeff() / h);
    }
    for (std::size_t i = 1; i < lo.size(); ++i) {
        EXPECT_LT(std::max(lo[i], lo[0]) / std::min(lo[i], lo[0]), 2.0);
        EXPECT_LT(std::max(hi[i], hi[0]) / std::min(hi[i], hi[0]), 2.0);
    }
}

TEST(Banded, OutOfBandAccess) {
    BandedSPDMatrix a(4, 1);
    EXPECT_EQ(a(3, 0), 0.0);
    EXPECT_THROW(a.set(3, 0, 1.0), std::out_of_range);
}

TEST(Tridiagonal, MatchesDense) {
    const std::vector<double> lo{0, 1, -1, 0.5}, di{4, 5, 6, 3}, up{2, 1, -0.5, 0};
    const std::vector<double> rhs{1, 2, 3, 4};
    const auto x = solve_tridiagonal(lo, di, up, rhs);
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i) {
        a(i, i) = di[i];
        if (i > 0) a(i, i - 1) = lo[i];
        if (i < 3) a(i, i + 1) = up[i];
    }
    const Eigen::Vector4d ref = a.lu().solve(Eigen::Vector4d(1, 2, 3, 4));
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(x[i], ref(i), 1e-13);
}
