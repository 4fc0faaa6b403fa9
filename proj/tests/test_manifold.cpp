#include "solspec/errors.hpp"
#include "solspec/manifold.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

using namespace solspec;

namespace {

Geometry cat(double a = 1, double b = 0, double c = 1)
{
    return geometry(GluingMap({2, 1, 1, 1}), FibreMetric(a, b, c));
}

} // namespace

TEST(Geometry, CatMapBasics)
{
    Geometry g = cat();
    EXPECT_NEAR(g.lambda, (3 + std::sqrt(5.0)) / 2, 1e-14);
    EXPECT_NEAR(g.mu, 0.9624236501192069, 1e-14);
    EXPECT_EQ(g.D, 5);
    EXPECT_EQ(g.dual_form, (QuadraticForm{-1, 1, 1}));
    EXPECT_NEAR(curvature(g), -2 * g.mu * g.mu, 1e-12);
}

TEST(Geometry, EigenbasisIsUnimodularAndDual)
{
    for (Mat2i A : {Mat2i{2, 1, 1, 1}, Mat2i{1, 3, 3, 10}, Mat2i{5, 3, 3, 2}, Mat2i{3, 1, 2, 1}, Mat2i{1, 1, 2, 3}}) {
        Geometry g = geometry(GluingMap(A), FibreMetric(1.3, -0.2, 0.7));
        EXPECT_NEAR(wedge(g.e_u, g.e_v), 1, 1e-12);
        EXPECT_NEAR(dot(g.e_u_star, g.e_u), 1, 1e-12);
        EXPECT_NEAR(dot(g.e_u_star, g.e_v), 0, 1e-12);
        EXPECT_NEAR(dot(g.e_v_star, g.e_v), 1, 1e-12);
        EXPECT_NEAR(dot(g.e_v_star, g.e_u), 0, 1e-12);
        auto apply = [&](Vec2d v) {
            return Vec2d{A.a11 * v.x + A.a12 * v.y, A.a21 * v.x + A.a22 * v.y};
        };
        Vec2d Au = apply(g.e_u), Av = apply(g.e_v);
        EXPECT_NEAR(Au.x, g.lambda * g.e_u.x, 1e-9 * g.lambda);
        EXPECT_NEAR(Au.y, g.lambda * g.e_u.y, 1e-9 * g.lambda);
        EXPECT_NEAR(Av.x, g.e_v.x / g.lambda, 1e-9);
        EXPECT_NEAR(Av.y, g.e_v.y / g.lambda, 1e-9);
    }
}

TEST(Geometry, AngleAgainstDirectMetric)
{
    // theta is the angle between e_u* and e_v* in the dual metric; with a
    // diagonal metric the dual metric is diag(1/alpha, 1/gamma)
    Geometry g = cat(2.0, 0.0, 0.5);
    auto ip = [](Vec2d a, Vec2d b) { return a.x * b.x / 2.0 + a.y * b.y / 0.5; };
    double c = ip(g.e_u_star, g.e_v_star)
               / std::sqrt(ip(g.e_u_star, g.e_u_star) * ip(g.e_v_star, g.e_v_star));
    EXPECT_NEAR(g.cos_theta, c, 1e-12);
    EXPECT_NEAR(g.E, ip(g.e_u_star, g.e_u_star), 1e-12);
    EXPECT_NEAR(g.sin_theta * g.sin_theta + g.cos_theta * g.cos_theta, 1, 1e-12);
}

TEST(Geometry, ConstantCRelation)
{
    for (auto m : {FibreMetric(1, 0, 1), FibreMetric(1.1, 0.2, 0.8), FibreMetric(3, 1, 2)}) {
        Geometry g = geometry(GluingMap({2, 1, 1, 1}), m);
        EXPECT_NEAR(g.c * g.sqrtD * g.area * g.sin_theta, 1, 1e-12);
        EXPECT_LT(curvature(g), 0);
    }
}

TEST(Geometry, SpecialMetricHasOrthogonalDualBasis)
{
    // alpha = beta + gamma puts the cat map's e_u*, e_v* at a right angle
    EXPECT_NEAR(cat(1.1, 0.2, 0.9).cos_theta, 0, 1e-12);
    EXPECT_GT(std::fabs(cat(1.1, 0.2, 0.8).cos_theta), 0.01);
}

TEST(Geometry, Validation)
{
    EXPECT_THROW(GluingMap({1, 1, 0, 1}), ValidationError);
    EXPECT_THROW(GluingMap({2, 1, 1, 2}), ValidationError);
    EXPECT_THROW(GluingMap({-2, 1, 1, -1}), ValidationError);
    EXPECT_THROW(FibreMetric(1, 2, 1), ValidationError);
    EXPECT_THROW(FibreMetric(-1, 0, -1), ValidationError);
    EXPECT_THROW(GluingMap::parse("2,1,1"), ValidationError);
    EXPECT_THROW(FibreMetric::parse("1,x,1"), ValidationError);
    EXPECT_EQ(GluingMap::parse("2,1,1,1").matrix(), (Mat2i{2, 1, 1, 1}));
}

TEST(QDual, Examples)
{
    EXPECT_EQ(q_dual(GluingMap({2, 1, 1, 1})), (QuadraticForm{-1, 1, 1}));
    EXPECT_EQ(q_dual(GluingMap({1, 3, 1, 4})), (QuadraticForm{-3, -3, 1}));
}

TEST(Coordinates, ProductGivesForm)
{
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> u(-500, 500);
    for (Mat2i A : {Mat2i{2, 1, 1, 1}, Mat2i{1, 3, 3, 10}, Mat2i{3, 1, 2, 1}}) {
        Geometry g = geometry(GluingMap(A), FibreMetric(1, 0, 1));
        for (int i = 0; i < 1000; ++i) {
            Vec2i v{u(rng), u(rng)};
            if (v.is_zero())
                continue;
            double Q = double(g.dual_form(v));
            double pq = g.p(v) * g.q(v) * g.sqrtD;
            EXPECT_NEAR(pq, Q, 1e-9 * (1 + std::fabs(Q)) * 1e3);
        }
    }
}

TEST(Coordinates, Equivariance)
{
    Geometry g = cat(1.1, 0.2, 0.8);
    Mat2i At = g.A.transpose();
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> u(-100, 100);
    for (int i = 0; i < 200; ++i) {
        Vec2i v{u(rng), u(rng)};
        if (v.is_zero())
            continue;
        Vec2i w = At * v;
        EXPECT_NEAR(g.p(w), g.lambda * g.p(v), 1e-9 * (1 + std::fabs(g.p(w))));
        EXPECT_NEAR(g.q(w), g.q(v) / g.lambda, 1e-9 * (1 + std::fabs(g.q(v))));
        NuAlpha a = nu_alpha(g, v), b = nu_alpha(g, w), c = nu_alpha(g, -v);
        EXPECT_NEAR(b.alpha, a.alpha + 1, 1e-9);
        EXPECT_DOUBLE_EQ(b.nu, a.nu);
        EXPECT_DOUBLE_EQ(c.nu, a.nu);
        EXPECT_NEAR(c.alpha, a.alpha, 1e-12);
    }
}

TEST(Coordinates, NuExample)
{
    Geometry g = cat();
    NuAlpha na = nu_alpha(g, {1, 0});
    EXPECT_NEAR(na.nu, -8 * std::numbers::pi * std::numbers::pi * g.c, 1e-12);
    EXPECT_THROW(nu_alpha(g, {0, 0}), DomainError);
}

TEST(Orbits, PartitionAndStrip)
{
    Geometry g = cat(1.1, 0.2, 0.8);
    i64 const qmax = 400;
    auto reps = orbit_enumerate(g, qmax);
    std::set<Vec2i> reps_set;
    for (auto const & r : reps) {
        EXPECT_TRUE(in_strip(g, r.gamma));
        EXPECT_NE(r.qvalue, 0);
        EXPECT_LE(std::llabs(r.qvalue), qmax);
        EXPECT_TRUE(reps_set.insert(r.gamma).second);
    }
    for (std::size_t i = 1; i < reps.size(); ++i)
        EXPECT_LE(std::llabs(reps[i - 1].qvalue), std::llabs(reps[i].qvalue));
    // every lattice point in a box lands on exactly one listed orbit
    for (i64 x = -40; x <= 40; ++x)
        for (i64 y = -40; y <= 40; ++y) {
            Vec2i v{x, y};
            if (v.is_zero() || std::llabs(narrow(g.dual_form(v))) > qmax)
                continue;
            Vec2i s = reduce_to_strip(g, v);
            EXPECT_TRUE(reps_set.count(s)) << x << "," << y;
            EXPECT_TRUE(g.dual_form(s) == g.dual_form(v));
        }
}

TEST(Orbits, CountFollowsArea)
{
    // strip area in (p,q): 2 * int_1^lambda 2 qmax / (sqrtD p) dp
    Geometry g = cat();
    i64 const qmax = 10000;
    auto reps = orbit_enumerate(g, qmax);
    double expected = 4 * g.mu * double(qmax) / g.sqrtD;
    EXPECT_NEAR(double(reps.size()) / expected, 1, 0.02);
}

TEST(Orbits, MatchesBruteForceRepresentationCounts)
{
    // orbits with Q = n for the cat map: N(n) of the primitive form (1,-1,-1) at -n
    Geometry g = cat();
    auto reps = orbit_enumerate(g, 130);
    std::map<i64, int> by_q;
    for (auto const & r : reps)
        by_q[r.qvalue]++;
    QuadraticForm pf{1, -1, -1};
    Mat2i a0 = automorph_generator(pf);
    for (i64 n = -130; n <= 130; ++n) {
        if (n == 0)
            continue;
        // the A* orbit and the -I identification: {+-a0^k} orbits count once,
        // the strip lists gamma and -gamma separately
        EXPECT_EQ(by_q[n], 2 * rep_count_bruteforce(pf, -n, a0)) << n;
    }
}

TEST(Orbits, ResourceLimit)
{
    EXPECT_THROW(orbit_enumerate(cat(), 100'000'000'000LL), ResourceError);
    EXPECT_THROW(orbit_enumerate(cat(), 0), ValidationError);
}

TEST(Json, GeometryHashStable)
{
    EXPECT_EQ(geometry_hash(cat()), geometry_hash(cat()));
    EXPECT_NE(geometry_hash(cat()), geometry_hash(cat(1.1, 0.2, 0.8)));
    EXPECT_NE(geometry_json(cat()).find("\"curvature\""), std::string::npos);
}
