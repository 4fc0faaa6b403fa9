#include "solspec/manifold.hpp"
#include "solspec/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace solspec {

static std::vector<std::string> split_csv(std::string const & s)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ','))
        out.push_back(cur);
    return out;
}

GluingMap::GluingMap(Mat2i m)
    : m_(m)
{
    if (m.det() != 1)
        throw ValidationError("gluing map " + to_string(m) + " has det " + to_string(m.det())
                              + ", need 1");
    if (m.trace() <= 2)
        throw ValidationError("gluing map " + to_string(m)
                              + " needs trace > 2 (hyperbolic, positive eigenvalues)");
}

GluingMap GluingMap::parse(std::string const & csv)
{
    auto f = split_csv(csv);
    if (f.size() != 4)
        throw ValidationError("matrix needs 4 comma-separated integers a11,a12,a21,a22, got '" + csv + "'");
    i64 v[4];
    for (int i = 0; i < 4; ++i) {
        std::size_t pos = 0;
        try {
            v[i] = std::stoll(f[i], &pos);
        } catch (std::exception const &) {
            pos = 0;
        }
        if (pos == 0 || pos != f[i].size())
            throw ValidationError("matrix entry '" + f[i] + "' is not an integer");
    }
    return GluingMap({v[0], v[1], v[2], v[3]});
}

FibreMetric::FibreMetric(double a, double b, double g)
    : a_(a), b_(b), g_(g)
{
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(g))
        throw ValidationError("fibre metric entries must be finite");
    if (!(a > 0) || !(g > 0) || !(a * g - b * b > 0))
        throw ValidationError("fibre metric (alpha,beta,gamma) must be positive definite");
}

FibreMetric FibreMetric::parse(std::string const & csv)
{
    auto f = split_csv(csv);
    if (f.size() != 3)
        throw ValidationError("metric needs 3 comma-separated reals alpha,beta,gamma, got '" + csv + "'");
    double v[3];
    for (int i = 0; i < 3; ++i) {
        std::size_t pos = 0;
        try {
            v[i] = std::stod(f[i], &pos);
        } catch (std::exception const &) {
            pos = 0;
        }
        if (pos == 0 || pos != f[i].size())
            throw ValidationError("metric entry '" + f[i] + "' is not a number");
    }
    return FibreMetric(v[0], v[1], v[2]);
}

Geometry geometry(GluingMap const & gm, FibreMetric const & m)
{
    Mat2i const & A = gm.matrix();
    Geometry g;
    g.A = A;
    g.metric_alpha = m.alpha();
    g.metric_beta = m.beta();
    g.metric_gamma = m.gamma();
    double t = double(A.trace());
    g.D = narrow(A.trace() * A.trace() - 4);
    g.sqrtD = std::sqrt(double(g.D));
    g.lambda = (t + g.sqrtD) / 2;
    g.mu = std::log(g.lambda);

    /* (a12, lambda - a11) and (a12, 1/lambda - a11) are eigenvectors; the
     * two second components multiply to -a12 a21, which keeps the small
     * one accurate */
    double a11 = double(A.a11), a12 = double(A.a12), a21 = double(A.a21), a22 = double(A.a22);
    double t1, t2;
    if (a22 - a11 >= 0) {
        t1 = (a22 - a11 + g.sqrtD) / 2;
        t2 = -a12 * a21 / t1;
    } else {
        t2 = (a22 - a11 - g.sqrtD) / 2;
        t1 = -a12 * a21 / t2;
    }
    Vec2d u{a12, t1}, v{a12, t2};
    if (u.x < 0)
        u = {-u.x, -u.y};
    double w = wedge(u, v); // = -a12 sqrt D up to the sign flip above
    if (w < 0) {
        v = {-v.x, -v.y};
        w = -w;
    }
    double s = 1 / std::sqrt(w);
    g.e_u = {u.x * s, u.y * s};
    g.e_v = {v.x * s, v.y * s};
    g.e_u_star = {g.e_v.y, -g.e_v.x};
    g.e_v_star = {-g.e_u.y, g.e_u.x};

    double det = m.alpha() * m.gamma() - m.beta() * m.beta();
    /* inverse Gram matrix */
    double ia = m.gamma() / det, ib = -m.beta() / det, ig = m.alpha() / det;
    auto gs = [&](Vec2d x, Vec2d y) { return ia * x.x * y.x + ib * (x.x * y.y + x.y * y.x) + ig * x.y * y.y; };
    g.E = gs(g.e_u_star, g.e_u_star);
    g.F = gs(g.e_u_star, g.e_v_star);
    g.G = gs(g.e_v_star, g.e_v_star);
    g.cos_theta = g.F / std::sqrt(g.E * g.G);
    g.sin_theta = std::sqrt(std::max(0.0, g.E * g.G - g.F * g.F) / (g.E * g.G));
    g.area = std::sqrt(det);
    g.c = 1 / (g.sqrtD * g.area * g.sin_theta);
    g.dual_form = form_from_matrix(A.transpose());
    return g;
}

QuadraticForm q_dual(GluingMap const & A)
{
    return form_from_matrix(A.matrix().transpose());
}

NuAlpha nu_alpha(Geometry const & g, Vec2i gamma)
{
    if (gamma.is_zero())
        throw DomainError("nu/alpha are undefined at gamma = 0");
    double const pi = std::numbers::pi;
    double Q = double(g.dual_form(gamma));
    double ratio = std::fabs(g.p(gamma) / g.q(gamma));
    return {8 * pi * pi * g.c * Q, std::log(std::sqrt(g.E / g.G) * ratio) / (2 * g.mu)};
}

OrbitRep make_orbit_rep(Geometry const & g, Vec2i gamma)
{
    OrbitRep r;
    r.gamma = gamma;
    r.qvalue = narrow(g.dual_form(gamma));
    NuAlpha na = nu_alpha(g, gamma);
    r.nu = na.nu;
    r.alpha = na.alpha;
    r.p = g.p(gamma);
    r.q = g.q(gamma);
    return r;
}

/* boundary points within this relative distance of |p| = 1 count as
 * inside, near |p| = lambda as outside, so each orbit is taken once */
static constexpr double kStripSnap = 1e-9;

bool in_strip(Geometry const & g, Vec2i gamma)
{
    double r = std::fabs(g.p(gamma));
    return r >= 1 - kStripSnap && r < g.lambda * (1 - kStripSnap);
}

Vec2i reduce_to_strip(Geometry const & g, Vec2i gamma)
{
    if (gamma.is_zero())
        throw DomainError("gamma = 0 has no orbit representative");
    Mat2i const At = g.A.transpose();
    Mat2i const Ati = At.inverse();
    double r = std::fabs(g.p(gamma));
    int k = int(std::floor(std::log(r) / g.mu));
    Vec2i v = gamma;
    if (k > 0)
        v = At.pow(-k) * v;
    else if (k < 0)
        v = At.pow(-k) * v;
    for (int guard = 0; guard < 4 && !in_strip(g, v); ++guard) {
        if (std::fabs(g.p(v)) < 1)
            v = At * v;
        else
            v = Ati * v;
    }
    if (!in_strip(g, v))
        throw InconsistencyError("could not reduce gamma to the fundamental strip");
    return v;
}

std::vector<OrbitRep> orbit_enumerate(Geometry const & g, i64 qmax, i64 candidate_limit)
{
    if (qmax < 1)
        throw ValidationError("qmax must be >= 1");
    Vec2d const eu = g.e_u, ev = g.e_v;
    double const qb = double(qmax) / (g.sqrtD * (1 - 2 * kStripSnap)) * (1 + 1e-12) + 1e-12;
    double const plo = 1 - 2 * kStripSnap, phi = g.lambda;
    /* gamma = p e_u* + q e_v*; x-range of the two parallelograms */
    double xmin = 1e300, xmax = -1e300;
    for (double p : {plo, phi, -plo, -phi})
        for (double q : {-qb, qb}) {
            double x = p * g.e_u_star.x + q * g.e_v_star.x;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    double estimate = (xmax - xmin) * 4 + 8 * (g.lambda - 1) * qb;
    if (!(estimate < double(candidate_limit)) || xmax - xmin > 4e18)
        throw ResourceError("qmax=" + std::to_string(qmax) + " exceeds the enumeration bound");
    i64 x0 = i64(std::floor(xmin)) - 1, x1 = i64(std::ceil(xmax)) + 1;

    std::vector<OrbitRep> out;
    i64 candidates = 0;
    for (i64 x = x0; x <= x1; ++x) {
        double fx = double(x);
        for (int sg : {1, -1}) {
            /* p in sg*[plo, phi], q in [-qb, qb]: both linear in y */
            double ylo = -1e300, yhi = 1e300;
            auto clip = [&](double cx, double cy, double lo, double hi) {
                /* lo <= cx*x + cy*y <= hi */
                double a = (lo - cx * fx) / cy, b = (hi - cx * fx) / cy;
                if (a > b)
                    std::swap(a, b);
                ylo = std::max(ylo, a);
                yhi = std::min(yhi, b);
            };
            clip(eu.x, eu.y, sg > 0 ? plo : -phi, sg > 0 ? phi : -plo);
            clip(ev.x, ev.y, -qb, qb);
            if (ylo > yhi)
                continue;
            i64 y0 = i64(std::floor(ylo)) - 1, y1 = i64(std::ceil(yhi)) + 1;
            for (i64 y = y0; y <= y1; ++y) {
                ++candidates;
                Vec2i gm{x, y};
                if (gm.is_zero())
                    continue;
                double p = g.p(gm);
                if ((p > 0) != (sg > 0) || !in_strip(g, gm))
                    continue;
                i128 Q = g.dual_form(gm);
                if (Q == 0)
                    throw InconsistencyError("nonzero lattice point with Q = 0");
                if (Q > qmax || Q < -qmax)
                    continue;
                out.push_back(make_orbit_rep(g, gm));
            }
        }
        if (candidates > candidate_limit)
            throw ResourceError("orbit enumeration exceeded " + std::to_string(candidate_limit)
                                + " candidates");
    }
    std::sort(out.begin(), out.end(), [](OrbitRep const & a, OrbitRep const & b) {
        i64 qa = a.qvalue < 0 ? -a.qvalue : a.qvalue, qb2 = b.qvalue < 0 ? -b.qvalue : b.qvalue;
        if (qa != qb2)
            return qa < qb2;
        return a.gamma < b.gamma;
    });
    return out;
}

double curvature(Geometry const & g)
{
    double s = g.sin_theta * g.mu;
    return -2 * s * s;
}

std::string geometry_json(Geometry const & g)
{
    nlohmann::ordered_json j;
    j["matrix"] = {{g.A.a11, g.A.a12}, {g.A.a21, g.A.a22}};
    j["metric"] = {g.metric_alpha, g.metric_beta, g.metric_gamma};
    j["lambda"] = g.lambda;
    j["mu"] = g.mu;
    j["D"] = g.D;
    j["e_u"] = {g.e_u.x, g.e_u.y};
    j["e_v"] = {g.e_v.x, g.e_v.y};
    j["e_u_star"] = {g.e_u_star.x, g.e_u_star.y};
    j["e_v_star"] = {g.e_v_star.x, g.e_v_star.y};
    j["E"] = g.E;
    j["F"] = g.F;
    j["G"] = g.G;
    j["cos_theta"] = g.cos_theta;
    j["sin_theta"] = g.sin_theta;
    j["area"] = g.area;
    j["c"] = g.c;
    j["curvature"] = curvature(g);
    j["dual_form"] = {g.dual_form.a, g.dual_form.b, g.dual_form.c};
    return j.dump(2);
}

std::string orbits_json(std::vector<OrbitRep> const & reps)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (auto const & r : reps) {
        nlohmann::ordered_json o;
        o["gamma"] = {r.gamma.x, r.gamma.y};
        o["qvalue"] = r.qvalue;
        o["nu"] = r.nu;
        o["alpha"] = r.alpha;
        o["p"] = r.p;
        o["q"] = r.q;
        arr.push_back(o);
    }
    return arr.dump(2);
}

std::string geometry_hash(Geometry const & g)
{
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%lld,%lld,%lld,%lld;%.17g,%.17g,%.17g", (long long)g.A.a11,
                  (long long)g.A.a12, (long long)g.A.a21, (long long)g.A.a22, g.metric_alpha,
                  g.metric_beta, g.metric_gamma);
    std::uint64_t h = 1469598103934665603ull;
    for (char const * p = buf; *p; ++p) {
        h ^= std::uint8_t(*p);
        h *= 1099511628211ull;
    }
    std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
    return buf;
}

} // namespace solspec
