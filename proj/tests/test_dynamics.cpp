#include "solspec/dynamics.hpp"
#include "solspec/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace solspec;

namespace {

double const pi = std::numbers::pi;

Geometry cat(double a = 1, double b = 0, double c = 1)
{
    return geometry(GluingMap({2, 1, 1, 1}), FibreMetric(a, b, c));
}

// E = G = 1, F = 0 with the cat map's mu
Geometry flat()
{
    Geometry g = cat();
    g.E = g.G = 1;
    g.F = 0;
    g.cos_theta = 0;
    g.sin_theta = 1;
    return g;
}

PhasePoint on_shell(Geometry const & g, PhasePoint x)
{
    double s = std::sqrt(hamiltonian(x, g));
    return {x.u, x.v, x.z, x.pu / s, x.pv / s, x.pz / s};
}

} // namespace

TEST(Hamiltonian, Values)
{
    Geometry g = flat();
    EXPECT_EQ(hamiltonian({1, 2, 3, 0, 0, 0}, g), 0);
    EXPECT_NEAR(hamiltonian({0, 0, 0, 1, 1, 0}, g), 1, 1e-15);
    EXPECT_NEAR(hamiltonian({0, 0, 0, 0, 0, 2}, g), 2, 1e-15);
}

TEST(Hamiltonian, DeckInvariance)
{
    Geometry g = cat(1.1, 0.2, 0.8);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 100; ++i) {
        PhasePoint x{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        PhasePoint y = deck_transform(x, g);
        EXPECT_NEAR(hamiltonian(y, g), hamiltonian(x, g), 1e-12 * (1 + hamiltonian(x, g)));
        Invariants a = invariants(x, g), b = invariants(y, g);
        EXPECT_NEAR(b.Q, a.Q, 1e-12 * (1 + std::fabs(a.Q)));
        EXPECT_NEAR(b.alpha, a.alpha - 1, 1e-12);
        EXPECT_NEAR(b.f1, a.f1, 1e-12);
        EXPECT_NEAR(b.f2, a.f2, 1e-12);
    }
}

TEST(Invariants, RadiusAndDegenerate)
{
    Geometry g = cat();
    Invariants z = invariants({0, 0, 0, 1, 0, 1}, g);
    EXPECT_FALSE(z.alpha_defined);
    EXPECT_EQ(z.f1, 0);
    EXPECT_EQ(z.f2, 0);
    for (double pv : {1e-1, 1e-2, 1e-3}) {
        Invariants v = invariants({0, 0, 0, 1, pv, 0}, g);
        EXPECT_LT(std::hypot(v.f1, v.f2), std::pow(pv, 8));
    }
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 100; ++i) {
        Invariants v = invariants({0, 0, u(rng), u(rng), u(rng), u(rng)}, g);
        double R = radius_function(v.Q);
        EXPECT_NEAR(v.f1 * v.f1 + v.f2 * v.f2, R * R, 1e-15 * (1 + R * R));
    }
}

TEST(Bifurcation, FlatMetric)
{
    auto b = bifurcation_radii(flat());
    EXPECT_NEAR(b.q_plus, 1, 1e-15);
    EXPECT_NEAR(b.q_minus, -1, 1e-15);
    EXPECT_NEAR(b.r_plus, std::exp(-1), 1e-15);
    EXPECT_NEAR(b.r_minus, 0.367879, 1e-6);
}

TEST(Bifurcation, PoleAsAngleCloses)
{
    Geometry g = flat();
    double prev = 0;
    for (double F : {0.0, 0.5, 0.9, 0.99, 0.999}) {
        g.F = F;
        double q = std::fabs(bifurcation_radii(g).q_minus);
        EXPECT_GT(q, prev);
        prev = q;
    }
    g.F = 1;
    EXPECT_THROW(bifurcation_radii(g), DomainError);
}

TEST(Bifurcation, CriticalFamiliesOnCircles)
{
    for (Geometry g : {cat(), cat(1.1, 0.2, 0.8), cat(3, 1, 2)}) {
        auto b = bifurcation_radii(g);
        for (double alpha : {-0.7, 0.0, 0.3, 1.9}) {
            auto pts = critical_family_points(g, alpha);
            for (int f = 0; f < 4; ++f) {
                Invariants v = invariants(pts[std::size_t(f)], g);
                double R = f < 2 ? b.r_plus : b.r_minus;
                EXPECT_NEAR(std::hypot(v.f1, v.f2), R, 1e-10);
                EXPECT_NEAR(v.Q, f < 2 ? b.q_plus : b.q_minus, 1e-10);
                EXPECT_NEAR(hamiltonian(pts[std::size_t(f)], g), 1, 1e-12);
                EXPECT_NEAR(v.alpha, alpha, 1e-12);
                // a rest point of the z-motion
                Trajectory t = integrate(pts[std::size_t(f)], g, 1, 1e-3);
                EXPECT_NEAR(t.samples.back().x.z, pts[std::size_t(f)].z, 1e-9);
            }
        }
    }
}

TEST(Integrate, VerticalGeodesic)
{
    Geometry g = cat(1.1, 0.2, 0.8);
    Trajectory t = integrate({0.3, -0.2, 0, 0, 0, 1}, g, 5, 1e-3, 1000);
    for (auto const & s : t.samples) {
        EXPECT_NEAR(s.x.z, s.t, 1e-12);
        EXPECT_EQ(s.x.u, 0.3);
        EXPECT_EQ(s.x.v, -0.2);
    }
}

TEST(Integrate, ConservationBudget)
{
    Geometry g = cat(1.1, 0.2, 0.8);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 5; ++i) {
        PhasePoint x = on_shell(g, {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)});
        Trajectory t = integrate(x, g, 100, 1e-3);
        EXPECT_LT(t.max_energy_drift, 1e-8);
        EXPECT_FALSE(t.drift_warning);
        Invariants a = invariants(x, g);
        for (auto const & s : t.samples) {
            EXPECT_EQ(s.x.pu, x.pu);
            EXPECT_EQ(s.x.pv, x.pv);
            Invariants b = invariants(s.x, g);
            EXPECT_EQ(b.f1, a.f1);
            EXPECT_EQ(b.f2, a.f2);
        }
    }
    EXPECT_THROW(integrate({}, g, 1, 0), ValidationError);
}

TEST(TurningPoints, MatchIntegratedExtrema)
{
    Geometry g = cat(1.1, 0.2, 0.8);
    for (auto [pu, pv] : {std::pair{0.6, 0.4}, std::pair{1.5, -0.1}, std::pair{-0.2, -0.3}}) {
        PhasePoint x = on_shell(g, {0, 0, 0, pu, pv, 0.5});
        TurningPoints tp = turning_points(x.pu, x.pv, 1, g);
        Trajectory t = integrate(x, g, 60, 1e-3);
        EXPECT_NEAR(t.z_min, tp.z_minus, 1e-6);
        EXPECT_NEAR(t.z_max, tp.z_plus, 1e-6);
    }
}

TEST(TurningPoints, WidthDiverges)
{
    Geometry g = cat();
    double prev = 0;
    for (double pv : {1e-1, 1e-2, 1e-4, 1e-6}) {
        TurningPoints tp = turning_points(0.5, pv, 1, g);
        EXPECT_GT(tp.z_plus - tp.z_minus, prev);
        prev = tp.z_plus - tp.z_minus;
    }
}

TEST(TurningPoints, SymmetricAboutMinusAlpha)
{
    Geometry g = flat();
    PhasePoint x{0, 0, 0, 0.3, 0.3, 0};
    TurningPoints tp = turning_points(0.3, 0.3, 1, g);
    double alpha = invariants(x, g).alpha;
    EXPECT_NEAR(0.5 * (tp.z_plus + tp.z_minus), -alpha, 1e-12);
    // energy below the bottom of the well: no oscillation
    EXPECT_THROW(turning_points(1, 1, 0.5, g), DomainError);
}

TEST(Flower, JacobianIsPiOverMu)
{
    Geometry g = cat();
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.2, 5), s(0, 1);
    for (int i = 0; i < 100; ++i) {
        double pu = u(rng) * (s(rng) < 0.5 ? -1 : 1), pv = u(rng) * (s(rng) < 0.5 ? -1 : 1);
        double h = 1e-5;
        auto F = [&](double a, double b) { return flower_map(a, b, g.mu); };
        FlowerImage a1 = F(pu + h, pv), a0 = F(pu - h, pv), b1 = F(pu, pv + h), b0 = F(pu, pv - h);
        double j = ((a1.f1 - a0.f1) * (b1.f2 - b0.f2) - (a1.f2 - a0.f2) * (b1.f1 - b0.f1)) / (4 * h * h);
        EXPECT_NEAR(std::fabs(j), pi / g.mu, 1e-6 * pi / g.mu);
    }
    EXPECT_NEAR(pi / g.mu, 3.2643, 1e-3);
}

TEST(Flower, DeckRotationAndCircles)
{
    Geometry g = cat();
    FlowerImage a = flower_map(0.7, 1.3, g.mu), b = flower_map(0.7 * g.lambda, 1.3 / g.lambda, g.mu);
    EXPECT_NEAR(a.f1, b.f1, 1e-12);
    EXPECT_NEAR(a.f2, b.f2, 1e-12);
    EXPECT_TRUE(flower_map(0, 1, g.mu).at_origin);
    auto pts = flower(g, 200);
    // unimodular (p, q) have p q = Q / sqrt D
    for (auto const & p : pts)
        EXPECT_NEAR(std::hypot(p.F1, p.F2), std::sqrt(double(std::llabs(p.qvalue)) / g.sqrtD), 1e-9 * (1 + std::hypot(p.F1, p.F2)));
}

TEST(Monodromy, CatMap)
{
    Geometry g = cat();
    auto pts = flower(g, 3600);
    LoopSpec loop;
    loop.radius = 0.55 * std::sqrt(3600 / g.sqrtD);
    Mat2i ccw = monodromy_transport(pts, g, loop);
    EXPECT_EQ(ccw, (Mat2i{2, 1, 1, 1}));
    loop.counterclockwise = false;
    Mat2i cw = monodromy_transport(pts, g, loop);
    EXPECT_EQ(cw, ccw.inverse());
    loop.counterclockwise = true;
    loop.family = -1;
    EXPECT_EQ(monodromy_transport(pts, g, loop), ccw);
}

TEST(Monodromy, OffOriginLoopIsTrivial)
{
    Geometry g = cat();
    auto pts = flower(g, 3600);
    LoopSpec loop;
    loop.cx = -22;
    loop.radius = 8;
    EXPECT_EQ(monodromy_transport(pts, g, loop), Mat2i::identity());
}

TEST(Monodromy, OtherMatrixIsUnimodularWithSameTrace)
{
    Mat2i A{3, 1, 2, 1};
    Geometry g = geometry(GluingMap(A), FibreMetric(1, 0, 1));
    auto pts = flower(g, 3600);
    LoopSpec loop;
    loop.radius = 0.55 * std::sqrt(3600 / g.sqrtD);
    Mat2i M = monodromy_transport(pts, g, loop);
    EXPECT_TRUE(M.det() == 1);
    EXPECT_TRUE(M.trace() == A.trace());
    EXPECT_EQ(M, A.transpose());
}

TEST(Monodromy, SparseFlowerRejected)
{
    Geometry g = cat();
    auto pts = flower(g, 4);
    LoopSpec loop;
    loop.radius = 1;
    EXPECT_THROW(monodromy_transport(pts, g, loop), Error);
}
