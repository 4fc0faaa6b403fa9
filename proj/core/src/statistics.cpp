#include "solspec/statistics.hpp"
#include "solspec/errors.hpp"
#include "solspec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace solspec {

std::string to_string(SymmetryMode m)
{
    return m == SymmetryMode::OrbitOnly ? "orbit-only" : "extra-involution";
}

static bool is_involution(Mat2i const & r)
{
    return r * r == Mat2i::identity() && r != Mat2i::identity() && r != -Mat2i::identity();
}

void validate_involution(Mat2i const & A, Involution const & inv)
{
    if (!is_involution(inv.r1) || !is_involution(inv.r2))
        throw ValidationError("involutions must square to I and differ from +-I: r1=" + to_string(inv.r1)
                              + " r2=" + to_string(inv.r2));
    if (inv.r2 * inv.r1 != A)
        throw ValidationError("r2 r1 = " + to_string(inv.r2 * inv.r1) + " differs from A = " + to_string(A));
}

std::optional<Involution> find_involution(Mat2i const & A)
{
    i64 b = std::max({std::llabs(A.a11), std::llabs(A.a12), std::llabs(A.a21), std::llabs(A.a22)});
    /* a nontrivial involution in GL(2,Z) has trace 0 and det -1: [[a,x],[y,-a]], a^2 + xy = 1 */
    for (i64 a = -b; a <= b; ++a)
        for (i64 x = -b; x <= b; ++x)
            for (i64 y = -b; y <= b; ++y) {
                if (a * a + x * y != 1)
                    continue;
                Mat2i r1{a, x, y, -a};
                Mat2i r2 = A * r1;
                if (is_involution(r2))
                    return Involution{r1, r2};
            }
    return std::nullopt;
}

namespace {

/* primitive generator of the +1 eigenline of a det -1 involution */
Vec2i fixed_line(Mat2i const & r)
{
    Vec2i v{r.a12, 1 - r.a11};
    if (v.is_zero())
        v = {1 - r.a22, r.a21};
    if (v.is_zero())
        throw InconsistencyError("involution " + to_string(r) + " has no fixed line");
    i64 d = gcd(v.x, v.y);
    return {v.x / d, v.y / d};
}

i128 cross(Vec2i a, Vec2i b)
{
    return i128(a.x) * b.y - i128(a.y) * b.x;
}

struct Wedge {
    Vec2i f1, f2;
    int qsign = 0; // sign of q in the wedge quadrant (p > 0)
    double s1 = 0;
};

Wedge make_wedge(Geometry const & g, Involution const & inv)
{
    Mat2i const At = g.A.transpose();
    Mat2i const R = inv.r1.transpose();
    auto orient = [&](Vec2i v) { return g.p(v) < 0 ? -v : v; };
    auto slope = [&](Vec2i v) { return 0.5 * std::log(std::fabs(g.p(v) / g.q(v))); };
    Wedge w;
    w.f1 = orient(fixed_line(R));
    w.qsign = g.q(w.f1) > 0 ? 1 : -1;
    double const s1 = w.s1 = slope(w.f1);
    double best = 1e300;
    for (int k = -3; k <= 3; ++k) {
        if (k == 0)
            continue;
        Mat2i rk = At.pow(k) * R;
        if (!is_involution(rk))
            continue;
        Vec2i f = orient(fixed_line(rk));
        if ((g.q(f) > 0 ? 1 : -1) != w.qsign)
            continue;
        double s = slope(f);
        if (s > s1 + 1e-9 && s < best) {
            best = s;
            w.f2 = f;
        }
    }
    if (best == 1e300)
        throw ValidationError("the reflection fixed lines do not bound a wedge in one quadrant");
    return w;
}

/* 1 inside, 2 on an edge, 0 outside */
int wedge_membership(Geometry const & g, Wedge const & w, Vec2i v)
{
    if (!(g.p(v) > 0) || (g.q(v) > 0 ? 1 : -1) != w.qsign)
        return 0;
    i128 o = cross(w.f1, w.f2);
    i128 a = cross(w.f1, v), b = cross(v, w.f2);
    int sa = a == 0 ? 0 : ((a > 0) == (o > 0) ? 1 : -1);
    int sb = b == 0 ? 0 : ((b > 0) == (o > 0) ? 1 : -1);
    if (sa < 0 || sb < 0)
        return 0;
    return (sa == 0 || sb == 0) ? 2 : 1;
}

} // namespace

ValueSequence value_sequence(Geometry const & g, i64 qmax, SymmetryMode mode, std::optional<Involution> const & inv)
{
    if (qmax < 1)
        throw ValidationError("qmax must be >= 1");
    ValueSequence vs;
    vs.qmax = qmax;
    vs.mode = mode;
    auto reps = orbit_enumerate(g, qmax);
    if (mode == SymmetryMode::OrbitOnly) {
        for (auto const & r : reps)
            vs.values.push_back(std::llabs(r.qvalue));
    } else {
        if (!inv)
            throw ValidationError("extra-involution mode needs an involution factorization A = r2 r1");
        validate_involution(g.A, *inv);
        Wedge const w = make_wedge(g, *inv);
        Mat2i const At = g.A.transpose();
        for (auto const & r : reps) {
            /* -I is part of the symmetry group: take the p > 0 half only */
            Vec2i const v = r.gamma;
            if (!(g.p(v) > 0) || (g.q(v) > 0 ? 1 : -1) != w.qsign)
                continue;
            /* A^T raises s = ln|p/q| / 2 by mu and the wedge is narrower
             * than that, so at most one orbit point lands in it */
            double s = 0.5 * std::log(std::fabs(g.p(v) / g.q(v)));
            int k0 = int(std::ceil((w.s1 - s) / g.mu));
            for (int k = k0 - 1; k <= k0 + 1; ++k) {
                Vec2i x = At.pow(k) * v;
                int m = wedge_membership(g, w, x);
                if (m) {
                    vs.values.push_back(std::llabs(r.qvalue));
                    vs.boundary_points += m == 2;
                    break;
                }
            }
        }
    }
    std::sort(vs.values.begin(), vs.values.end());
    return vs;
}

i64 quadrant_count(Geometry const & g, i64 qmax, Involution const & inv)
{
    validate_involution(g.A, inv);
    Wedge const w = make_wedge(g, inv);
    i64 n = 0;
    for (auto const & r : orbit_enumerate(g, qmax))
        n += g.p(r.gamma) > 0 && (g.q(r.gamma) > 0 ? 1 : -1) == w.qsign;
    return n;
}

std::map<i64, i64> spacing_histogram(ValueSequence const & vs, bool drop_degenerate)
{
    std::vector<i64> v = vs.values;
    if (drop_degenerate)
        v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() < 2)
        throw PreconditionError("spacing histogram needs at least two values");
    std::map<i64, i64> h;
    for (std::size_t i = 1; i < v.size(); ++i)
        ++h[v[i] - v[i - 1]];
    return h;
}

double zero_spacing_fraction(ValueSequence const & vs)
{
    auto h = spacing_histogram(vs, false);
    i64 total = 0;
    for (auto const & [s, c] : h)
        total += c;
    auto it = h.find(0);
    return it == h.end() ? 0.0 : double(it->second) / double(total);
}

std::vector<GrowthPoint> represented_growth(ValueSequence const & vs, std::vector<i64> const & checkpoints)
{
    std::vector<i64> d = vs.values;
    d.erase(std::unique(d.begin(), d.end()), d.end());
    std::vector<GrowthPoint> out;
    for (i64 K : checkpoints) {
        if (K < 2 || K > vs.qmax)
            throw PreconditionError("growth checkpoint " + std::to_string(K) + " outside [2, qmax]");
        GrowthPoint p;
        p.K = K;
        p.count = std::upper_bound(d.begin(), d.end(), K) - d.begin();
        p.normalized = double(p.count) * std::sqrt(std::log(double(K))) / double(K);
        out.push_back(p);
    }
    return out;
}

std::string histogram_csv(std::map<i64, i64> const & h)
{
    i64 total = 0;
    for (auto const & [s, c] : h)
        total += c;
    std::string out = "spacing,count,fraction\n";
    for (auto const & [s, c] : h)
        out += std::to_string(s) + "," + std::to_string(c) + "," + fmt12(double(c) / double(total)) + "\n";
    return out;
}

std::string growth_csv(std::vector<GrowthPoint> const & g)
{
    std::string out = "K,count,normalized\n";
    for (auto const & p : g)
        out += std::to_string(p.K) + "," + std::to_string(p.count) + "," + fmt12(p.normalized) + "\n";
    return out;
}

std::string histogram_svg(std::map<i64, i64> const & h, std::string const & title)
{
    i64 smax = 1, cmax = 1;
    for (auto const & [s, c] : h) {
        smax = std::max(smax, s);
        cmax = std::max(cmax, c);
    }
    SvgPlot plot(-0.5, double(smax) + 0.5, 0, double(cmax) * 1.05, 800, 480);
    plot.title(title);
    for (auto const & [s, c] : h)
        plot.bar(double(s) - 0.4, double(s) + 0.4, double(c));
    return plot.str();
}

} // namespace solspec
