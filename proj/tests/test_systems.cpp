#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "bouss/errors.hpp"
#include "bouss/experiments.hpp"
#include "bouss/manufactured.hpp"
#include "bouss/systems.hpp"

using namespace bouss;

namespace {

std::vector<double> random_state(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> y(n);
    for (double& v : y) v = u(rng);
    return y;
}

double central(const SpaceTimeFn& f, double x, double t, bool in_x, double step = 1e-5) {
    return in_x ? (f(x + step, t) - f(x - step, t)) / (2 * step) : (f(x, t + step) - f(x, t - step)) / (2 * step);
}

void expect_rel(double analytic, double fd, const std::string& what) {
    EXPECT_NEAR(analytic, fd, 1e-6 * std::max(1.0, std::abs(analytic))) << what;
}

// A case whose exact eta lies in P1 and whose exact u lies in the cubic zero space.
ManufacturedCase polynomial_case() {
    ManufacturedCase c;
    c.name = "poly";
    c.eta = [](double x, double) { return 1 + 2 * x; };
    c.eta_t = [](double, double) { return 0.0; };
    c.eta_x = [](double, double) { return 2.0; };
    c.u = [](double x, double) { return x * (1 - x); };
    c.u_t = [](double, double) { return 0.0; };
    c.u_x = [](double x, double) { return 1 - 2 * x; };
    c.u_xx = [](double, double) { return -2.0; };
    c.u_xxt = [](double, double) { return 0.0; };
    return c;
}

Eigen::MatrixXd dense(const std::vector<Triplet>& t, std::size_t n) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : t) m(e.row, e.col) += e.value;
    return m;
}

}  // namespace

TEST(Manufactured, DerivativesMatchFiniteDifferences) {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ux(0.05, 0.95), ut(0.05, 2.0);
    for (const auto& name : manufactured_case_names()) {
        const auto c = manufactured_case(name);
        for (int i = 0; i < 100; ++i) {
            const double x = ux(rng), t = ut(rng);
            expect_rel(c.eta_t(x, t), central(c.eta, x, t, false), name + " eta_t");
            expect_rel(c.eta_x(x, t), central(c.eta, x, t, true), name + " eta_x");
            expect_rel(c.u_t(x, t), central(c.u, x, t, false), name + " u_t");
            expect_rel(c.u_x(x, t), central(c.u, x, t, true), name + " u_x");
            expect_rel(c.u_xx(x, t), central(c.u_x, x, t, true), name + " u_xx");
            expect_rel(c.u_xxt(x, t), central(c.u_xx, x, t, false), name + " u_xxt");
        }
    }
}

TEST(Manufactured, FusedSampleMatchesMembers) {
    for (const auto& name : manufactured_case_names()) {
        const auto c = manufactured_case(name);
        if (!c.sample) continue;
        for (double x : {0.0, 0.13, 0.5, 0.77, 1.0})
            for (double t : {0.0, 0.4, 1.7}) {
                const auto s = c.sample(x, t);
                const double tol = 1e-12;
                EXPECT_NEAR(s.eta, c.eta(x, t), tol * std::max(1.0, std::abs(s.eta))) << name;
                EXPECT_NEAR(s.eta_t, c.eta_t(x, t), tol * std::max(1.0, std::abs(s.eta_t))) << name;
                EXPECT_NEAR(s.eta_x, c.eta_x(x, t), tol * std::max(1.0, std::abs(s.eta_x))) << name;
                EXPECT_NEAR(s.u, c.u(x, t), tol * std::max(1.0, std::abs(s.u))) << name;
                EXPECT_NEAR(s.u_t, c.u_t(x, t), tol * std::max(1.0, std::abs(s.u_t))) << name;
                EXPECT_NEAR(s.u_x, c.u_x(x, t), tol * std::max(1.0, std::abs(s.u_x))) << name;
                EXPECT_NEAR(s.u_xx, c.u_xx(x, t), tol * std::max(1.0, std::abs(s.u_xx))) << name;
                EXPECT_NEAR(s.u_xxt, c.u_xxt(x, t), tol * std::max(1.0, std::abs(s.u_xxt))) << name;
            }
    }
}

TEST(Manufactured, DirichletVelocity) {
    for (const char* name : {"cb-cos", "cb-cubic", "cb-quad", "gaussian-travel", "var-adv"}) {
        const auto c = manufactured_case(name);
        for (double t : {0.0, 0.3, 1.0, 2.5}) {
            EXPECT_LE(std::abs(c.u(0.0, t)), 1e-12) << name;
            EXPECT_LE(std::abs(c.u(1.0, t)), 1e-12) << name;
        }
    }
    const auto w = manufactured_case("wave-6.15");
    for (double t : {0.0, 0.2, 0.4}) {
        EXPECT_LE(std::abs(w.u(1.0, t)), 1e-12);
        EXPECT_LE(std::abs(w.eta(0.0, t)), 1e-12);
    }
    EXPECT_THROW(manufactured_case("no-such-case"), std::invalid_argument);
}

TEST(Forcing, VanishesOnHomogeneousSolutions) {
    for (double x : {0.1, 0.4, 0.9})
        for (double t : {0.0, 0.7}) {
            FieldSample s;
            s.eta = s.u = std::sin(x - t);
            s.eta_x = s.u_x = std::cos(x - t);
            s.eta_t = s.u_t = -std::cos(x - t);
            const auto [f, g] = forcing_residual(s, SystemKind::WaveSystem);
            EXPECT_NEAR(f, 0.0, 1e-15);
            EXPECT_NEAR(g, 0.0, 1e-15);
            FieldSample still;
            still.eta = 3.0;
            for (SystemKind k : {SystemKind::CB, SystemKind::SCB, SystemKind::LinearizedCB}) {
                const auto [f2, g2] = forcing_residual(still, k);
                EXPECT_EQ(f2, 0.0);
                EXPECT_EQ(g2, 0.0);
            }
        }
}

TEST(Forcing, CbResidualAgainstFiniteDifferences) {
    const auto c = manufactured_case("cb-cos");
    const auto fr = forcing(c, SystemKind::CB);
    const double x = 0.3, t = 0.0;
    const SpaceTimeFn eta_u = [&](double xx, double tt) { return c.eta(xx, tt) * c.u(xx, tt); };
    const SpaceTimeFn u_sq = [&](double xx, double tt) { return 0.5 * c.u(xx, tt) * c.u(xx, tt); };
    const double f_fd = central(c.eta, x, t, false) + central(c.u, x, t, true) + central(eta_u, x, t, true);
    const double g_fd = central(c.u, x, t, false) + central(c.eta, x, t, true) + central(u_sq, x, t, true) -
                        central(c.u_xx, x, t, false) / 3;
    EXPECT_NEAR(fr.f(x, t), f_fd, 1e-6 * std::abs(f_fd));
    EXPECT_NEAR(fr.g(x, t), g_fd, 1e-6 * std::max(1.0, std::abs(g_fd)));
}

TEST(Forcing, SymmetricMinusClassical) {
    const auto c = manufactured_case("cb-cubic");
    const auto scb = forcing(c, SystemKind::SCB);
    const auto cb = forcing(c, SystemKind::CB);
    for (double x : {0.05, 0.3, 0.61, 0.99})
        for (double t : {0.0, 0.5, 1.0}) {
            const double etau_x = c.eta_x(x, t) * c.u(x, t) + c.eta(x, t) * c.u_x(x, t);
            EXPECT_NEAR(scb.f(x, t) - cb.f(x, t), -0.5 * etau_x, 1e-10);
        }
}

TEST(SemidiscreteProblem, SpacePairings) {
    const Mesh m = uniform_mesh(10);
    const SemidiscreteProblem cb(SystemKind::CB, m, 1, 1, manufactured_case("cb-cos"));
    EXPECT_EQ(cb.eta_dim(), 11u);
    EXPECT_EQ(cb.u_dim(), 9u);
    const SemidiscreteProblem adv(SystemKind::Advection, m, 1, 1, manufactured_case("adv-x1exp"));
    EXPECT_EQ(adv.eta_dim(), 10u);
    EXPECT_FALSE(adv.has_u());
    const SemidiscreteProblem wave(SystemKind::WaveSystem, m, 1, 1, manufactured_case("wave-6.15"));
    EXPECT_EQ(wave.eta_forms().space()->boundary(), Boundary::ZeroLeft);
    EXPECT_EQ(wave.u_forms().space()->boundary(), Boundary::ZeroRight);
}

TEST(SemidiscreteProblem, ScbConservesEnergyForArbitraryStates) {
    for (auto [pe, pu, mesh] : {std::tuple{1, 1, "uniform"}, std::tuple{3, 3, "uniform"}, std::tuple{1, 1, "ratio1.5"},
                                std::tuple{3, 3, "ratio150"}}) {
        const SemidiscreteProblem p(SystemKind::SCB, preset_mesh(mesh, 30), pe, pu, manufactured_case("cb-cos"), false);
        for (unsigned seed : {1u, 2u, 3u}) {
            const auto y = random_state(p.dim(), seed);
            EXPECT_LE(std::abs(p.energy_rate(0.3, y)), 1e-11);
            // Same derivative through the solved rates: 2 (eta, eta') + 2 a(u, u').
            const auto d = p.rhs(0.3, y);
            const std::size_t ne = p.eta_dim();
            const std::vector<double> eta(y.begin(), y.begin() + ne), u(y.begin() + ne, y.end());
            const std::vector<double> deta(d.begin(), d.begin() + ne), du(d.begin() + ne, d.end());
            const double rate = 2 * p.eta_forms().mass().inner(eta, deta) + 2 * p.u_forms().aform().inner(u, du);
            EXPECT_LE(std::abs(rate), 1e-11) << mesh << " degree " << pe;
        }
    }
}

TEST(SemidiscreteProblem, LinearOperatorMatchesRhs) {
    const std::pair<SystemKind, const char*> cases[] = {{SystemKind::LinearizedCB, "cb-cos"},
                                                        {SystemKind::Advection, "adv-x3exp"},
                                                        {SystemKind::WaveSystem, "wave-6.15"},
                                                        {SystemKind::ViscousSystem, "cb-cubic"}};
    for (const auto& [kind, name] : cases) {
        const SemidiscreteProblem p(kind, preset_mesh("ratio1.5", 12), 1, 1, manufactured_case(name));
        const auto op = p.linear_operator();
        const Eigen::MatrixXd M = dense(op.M, op.dim), K = dense(op.K, op.dim);
        const auto y = random_state(p.dim(), 9);
        const double t = 0.37;
        const auto F = p.forcing_load(t);
        const Eigen::VectorXd rhs = M.ldlt().solve(-K * Eigen::Map<const Eigen::VectorXd>(y.data(), y.size()) +
                                                   Eigen::Map<const Eigen::VectorXd>(F.data(), F.size()));
        const auto d = p.rhs(t, y);
        for (std::size_t i = 0; i < d.size(); ++i)
            EXPECT_NEAR(d[i], rhs(i), 1e-11 * std::max(1.0, std::abs(rhs(i)))) << to_string(kind);
    }
}

TEST(SemidiscreteProblem, NonlinearRhsMatchesProjectionComposition) {
    // eta' = P[-(u + eta u)_x + f], u' = A[-(eta_x + u u_x) + g], built from field evaluations.
    for (int deg : {1, 3}) {
        const auto c = manufactured_case("cb-cos");
        const SemidiscreteProblem p(SystemKind::CB, uniform_mesh(16), deg, deg, c);
        const auto y = random_state(p.dim(), 4);
        const double t = 0.25;
        const FemField eta = p.eta_field(y), u = p.u_field(y);
        const auto fr = forcing(c, SystemKind::CB);
        const auto deta = l2_project(p.eta_forms(), [&](double x) {
            return -(u.eval(x, 1) + eta.eval(x, 1) * u.eval(x) + eta.eval(x) * u.eval(x, 1)) + fr.f(x, t);
        });
        const auto load = assemble_load(*p.u_forms().space(), [&](double x) {
            return -(eta.eval(x, 1) + u.eval(x) * u.eval(x, 1)) + fr.g(x, t);
        });
        const auto du = apply_A(p.u_forms(), load);
        const auto d = p.rhs(t, y);
        for (std::size_t i = 0; i < p.eta_dim(); ++i) EXPECT_NEAR(d[i], deta.coefficients()[i], 1e-11 * std::max(1.0, std::abs(d[i])));
        for (std::size_t i = 0; i < p.u_dim(); ++i)
            EXPECT_NEAR(d[p.eta_dim() + i], du.coefficients()[i], 1e-11 * std::max(1.0, std::abs(d[p.eta_dim() + i])));
    }
}

TEST(SemidiscreteProblem, LinearizedZeroStateIsStationary) {
    const SemidiscreteProblem p(SystemKind::LinearizedCB, uniform_mesh(12), 1, 1, manufactured_case("cb-cos"), false);
    for (double v : p.rhs(0.5, std::vector<double>(p.dim(), 0.0))) EXPECT_EQ(v, 0.0);
}

TEST(SemidiscreteProblem, VariableAdvectionPreservesMass) {
    const SemidiscreteProblem p(SystemKind::VariableAdvection, uniform_mesh(20), 1, 1, manufactured_case("var-adv"), false);
    const auto y = random_state(p.dim(), 12);
    const auto d = p.rhs(0.4, y);
    const auto md = p.eta_forms().mass().multiply(d);
    double total = 0.0;
    for (double v : md) total += v;
    EXPECT_NEAR(total, 0.0, 1e-13);
}

TEST(SemidiscreteProblem, ConsistencyRateAtInitialTime) {
    const auto c = manufactured_case("cb-cos");
    std::vector<double> h, e;
    for (std::size_t n : {20, 40, 80, 160}) {
        const SemidiscreteProblem p(SystemKind::CB, uniform_mesh(n), 1, 1, c);
        const auto s = p.initial_state(InitRule::Interpolate, InitRule::Interpolate);
        const auto d = p.rhs(0.0, s.y);
        const auto r = error_norms(p.u_field(d), [&](double x) { return c.u_t(x, 0.0); }, nullptr);
        h.push_back(1.0 / n);
        e.push_back(r.l2 + error_norms(p.eta_field(d), [&](double x) { return c.eta_t(x, 0.0); }, nullptr).l2);
    }
    for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LT(e[i], e[i - 1]);
    EXPECT_GT(fit_exponent(h, e), 0.9);
}

TEST(SemidiscreteProblem, InitRulesCoincideOnSpaceMembers) {
    const SemidiscreteProblem p(SystemKind::CB, preset_mesh("ratio1.5", 10), 1, 3, polynomial_case());
    const auto a = p.initial_state(InitRule::Interpolate, InitRule::Interpolate);
    const auto b = p.initial_state(InitRule::L2Project, InitRule::L2Project);
    const auto c = p.initial_state(InitRule::L2Project, InitRule::EllipticProject, EllipticMode::AForm);
    const auto d = p.initial_state(InitRule::L2Project, InitRule::EllipticProject, EllipticMode::Stiffness);
    for (std::size_t i = 0; i < a.y.size(); ++i) {
        EXPECT_NEAR(a.y[i], b.y[i], 1e-11);
        EXPECT_NEAR(a.y[i], c.y[i], 1e-11);
        EXPECT_NEAR(a.y[i], d.y[i], 1e-11);
    }
}

TEST(SemidiscreteProblem, RegistryInitializationRules) {
    const auto t21 = find_experiment("table2.1");
    EXPECT_EQ(t21.eta_init, InitRule::Interpolate);
    EXPECT_EQ(t21.u_init, InitRule::Interpolate);
    const auto t51 = find_experiment("table5.1");
    EXPECT_EQ(t51.eta_init, InitRule::L2Project);
    EXPECT_EQ(t51.u_init, InitRule::EllipticProject);
    EXPECT_EQ(t51.elliptic_mode, EllipticMode::Stiffness);
}

TEST(SemidiscreteProblem, ForcingCacheIsTransparent) {
    const SemidiscreteProblem p(SystemKind::SCB, uniform_mesh(16), 3, 3, manufactured_case("gaussian-travel"));
    const auto y = random_state(p.dim(), 21);
    const auto a = p.rhs(0.1, y);
    p.rhs(0.2, y);
    p.rhs(0.3, y);
    const auto b = p.rhs(0.1, y);
    EXPECT_EQ(a, b);
}
