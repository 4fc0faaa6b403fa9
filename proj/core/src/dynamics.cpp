#include "solspec/dynamics.hpp"
#include "solspec/errors.hpp"
#include "solspec/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

namespace solspec {

static double const kPi = std::numbers::pi;

double hamiltonian(PhasePoint const & x, Geometry const & g)
{
    double eu = std::exp(2 * g.mu * x.z), ev = 1 / eu;
    return 0.5 * (g.E * eu * x.pu * x.pu + 2 * g.F * x.pu * x.pv + g.G * ev * x.pv * x.pv)
           + 0.5 * x.pz * x.pz;
}

PhasePoint deck_transform(PhasePoint const & x, Geometry const & g)
{
    double l = g.lambda;
    return {l * x.u, x.v / l, x.z + 1, x.pu / l, l * x.pv, x.pz};
}

double radius_function(double Q)
{
    if (Q == 0)
        return 0;
    return std::sqrt(std::fabs(Q)) * std::exp(-1 / (Q * Q));
}

Invariants invariants(PhasePoint const & x, Geometry const & g)
{
    Invariants r;
    r.Q = x.pu * x.pv;
    if (r.Q == 0)
        return r;
    r.alpha = std::log(std::sqrt(g.E / g.G) * std::fabs(x.pu / x.pv)) / (2 * g.mu);
    r.alpha_defined = true;
    double R = radius_function(r.Q);
    r.f1 = R * std::cos(2 * kPi * r.alpha);
    r.f2 = R * std::sin(2 * kPi * r.alpha);
    return r;
}

BifurcationRadii bifurcation_radii(Geometry const & g)
{
    double s = std::sqrt(g.E * g.G);
    if (!(g.E * g.G - g.F * g.F > 0))
        throw DomainError("bifurcation radii need EG - F^2 > 0");
    BifurcationRadii b;
    b.q_plus = 1 / (g.F + s);
    b.q_minus = 1 / (g.F - s);
    b.r_plus = radius_function(b.q_plus);
    b.r_minus = radius_function(b.q_minus);
    return b;
}

std::array<PhasePoint, 4> critical_family_points(Geometry const & g, double alpha)
{
    double c = g.F / std::sqrt(g.E * g.G);
    double ea = std::exp(alpha * g.mu), eb = 1 / ea;
    double up = ea / std::sqrt(g.E * (1 + c)), vp = eb / std::sqrt(g.G * (1 + c));
    double um = ea / std::sqrt(g.E * (1 - c)), vm = eb / std::sqrt(g.G * (1 - c));
    double z = -alpha;
    return {{{0, 0, z, up, vp, 0}, {0, 0, z, -up, -vp, 0}, {0, 0, z, um, -vm, 0}, {0, 0, z, -um, vm, 0}}};
}

namespace {

struct Deriv {
    double u, v, z, pz;
};

Deriv field(PhasePoint const & x, Geometry const & g)
{
    double eu = std::exp(2 * g.mu * x.z), ev = 1 / eu;
    return {g.E * eu * x.pu + g.F * x.pv, g.F * x.pu + g.G * ev * x.pv, x.pz,
            -g.mu * (g.E * eu * x.pu * x.pu - g.G * ev * x.pv * x.pv)};
}

PhasePoint advance(PhasePoint const & x, Deriv const & d, double h)
{
    /* pu, pv are constants of motion and are never touched */
    return {x.u + h * d.u, x.v + h * d.v, x.z + h * d.z, x.pu, x.pv, x.pz + h * d.pz};
}

} // namespace

Trajectory integrate(PhasePoint const & x0, Geometry const & g, double duration, double h, int sample_every)
{
    if (!(h > 0) || !(duration >= 0))
        throw ValidationError("integration needs step > 0 and duration >= 0");
    if (sample_every < 1)
        sample_every = 1;
    Trajectory tr;
    double const H0 = hamiltonian(x0, g), Q0 = x0.pu * x0.pv;
    double const hs = std::fabs(H0) > 0 ? std::fabs(H0) : 1.0;
    double const qs = std::fabs(Q0) > 0 ? std::fabs(Q0) : 1.0;
    PhasePoint x = x0;
    tr.z_min = tr.z_max = x.z;
    tr.samples.push_back({0, x, H0, Q0});
    long const steps = long(std::ceil(duration / h - 1e-9));
    for (long i = 1; i <= steps; ++i) {
        double dt = std::min(h, duration - (i - 1) * h);
        Deriv k1 = field(x, g);
        Deriv k2 = field(advance(x, k1, dt / 2), g);
        Deriv k3 = field(advance(x, k2, dt / 2), g);
        Deriv k4 = field(advance(x, k3, dt), g);
        Deriv k{(k1.u + 2 * k2.u + 2 * k3.u + k4.u) / 6, (k1.v + 2 * k2.v + 2 * k3.v + k4.v) / 6,
                (k1.z + 2 * k2.z + 2 * k3.z + k4.z) / 6, (k1.pz + 2 * k2.pz + 2 * k3.pz + k4.pz) / 6};
        PhasePoint y = advance(x, k, dt);
        /* z-extremum inside the step: cubic Hermite in z with slopes pz */
        if ((x.pz > 0) != (y.pz > 0) || y.pz == 0) {
            double z0 = x.z, z1 = y.z, m0 = x.pz * dt, m1 = y.pz * dt;
            /* z(s) = h00 z0 + h10 m0 + h01 z1 + h11 m1, s in [0,1]; z'(s) = a s^2 + b s + c */
            double a = 6 * z0 + 3 * m0 - 6 * z1 + 3 * m1;
            double b = -6 * z0 - 4 * m0 + 6 * z1 - 2 * m1;
            double c = m0;
            double s = -1;
            if (std::fabs(a) < 1e-300) {
                s = b != 0 ? -c / b : -1;
            } else {
                double disc = std::max(0.0, b * b - 4 * a * c);
                double r1 = (-b + std::sqrt(disc)) / (2 * a), r2 = (-b - std::sqrt(disc)) / (2 * a);
                s = (r1 >= 0 && r1 <= 1) ? r1 : r2;
            }
            if (s >= 0 && s <= 1) {
                double s2 = s * s, s3 = s2 * s;
                double ze = (2 * s3 - 3 * s2 + 1) * z0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * z1
                            + (s3 - s2) * m1;
                tr.z_min = std::min(tr.z_min, ze);
                tr.z_max = std::max(tr.z_max, ze);
            }
        }
        x = y;
        tr.z_min = std::min(tr.z_min, x.z);
        tr.z_max = std::max(tr.z_max, x.z);
        double H = hamiltonian(x, g), Q = x.pu * x.pv;
        tr.max_energy_drift = std::max(tr.max_energy_drift, std::fabs(H - H0) / hs);
        tr.max_q_drift = std::max(tr.max_q_drift, std::fabs(Q - Q0) / qs);
        if (i % sample_every == 0 || i == steps)
            tr.samples.push_back({i == steps ? duration : double(i) * h, x, H, Q});
    }
    tr.drift_warning = tr.max_energy_drift > kDriftWarning || tr.max_q_drift > kDriftWarning;
    return tr;
}

TurningPoints turning_points(double pu, double pv, double energy, Geometry const & g)
{
    double Q = pu * pv;
    if (Q == 0)
        throw DomainError("turning points need pu pv != 0");
    double arg = (energy - g.F * Q) / (std::sqrt(g.E * g.G) * std::fabs(Q));
    if (!(arg >= 1))
        throw DomainError("energy is below the well minimum for these momenta (no oscillation)");
    double alpha = std::log(std::sqrt(g.E / g.G) * std::fabs(pu / pv)) / (2 * g.mu);
    double w = std::acosh(arg) / (2 * g.mu);
    return {-w - alpha, w - alpha};
}

FlowerImage flower_map(double pu, double pv, double mu)
{
    if (pu == 0)
        return {0, 0, true};
    double r = std::sqrt(std::fabs(pu * pv));
    double beta = std::log(std::fabs(pu)) / mu;
    double ph = 2 * kPi * beta;
    return {r * std::cos(ph), r * std::sin(ph), false};
}

std::vector<FlowerPoint> flower(Geometry const & g, i64 qmax)
{
    std::vector<FlowerPoint> out;
    for (auto const & rep : orbit_enumerate(g, qmax)) {
        FlowerImage f = flower_map(rep.p, rep.q, g.mu);
        out.push_back({f.f1, f.f2, rep.gamma, rep.qvalue, rep.p, rep.q});
    }
    return out;
}

namespace {

struct V2 {
    double x, y;
    V2 operator+(V2 o) const { return {x + o.x, y + o.y}; }
    V2 operator-(V2 o) const { return {x - o.x, y - o.y}; }
    V2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};
double dotv(V2 a, V2 b) { return a.x * b.x + a.y * b.y; }
double crossv(V2 a, V2 b) { return a.x * b.y - a.y * b.x; }

class PointIndex {
  public:
    PointIndex(std::vector<V2> pts, double cell)
        : pts_(std::move(pts)), cell_(cell)
    {
        for (std::size_t i = 0; i < pts_.size(); ++i)
            grid_[key(cx(pts_[i].x), cx(pts_[i].y))].push_back(i);
    }
    V2 const & at(std::size_t i) const { return pts_[i]; }
    /* nearest and second-nearest distances, exact within max_r */
    std::size_t nearest(V2 p, double & best, double & second, double max_r) const
    {
        best = second = std::numeric_limits<double>::infinity();
        std::size_t bi = std::size_t(-1);
        long const x0 = cx(p.x), y0 = cx(p.y);
        for (long ring = 0; ring * cell_ <= max_r + cell_; ++ring) {
            for (long i = x0 - ring; i <= x0 + ring; ++i)
                for (long j = y0 - ring; j <= y0 + ring; ++j) {
                    if (std::max(std::labs(i - x0), std::labs(j - y0)) != ring)
                        continue;
                    auto it = grid_.find(key(i, j));
                    if (it == grid_.end())
                        continue;
                    for (std::size_t k : it->second) {
                        double d = (pts_[k] - p).norm();
                        if (d < best) {
                            second = best;
                            best = d;
                            bi = k;
                        } else if (d < second) {
                            second = d;
                        }
                    }
                }
            /* every unvisited point is at least ring*cell away */
            if (second <= ring * cell_)
                break;
        }
        return bi;
    }
    std::vector<std::size_t> within(V2 p, double r) const
    {
        std::vector<std::size_t> out;
        long const x0 = cx(p.x), y0 = cx(p.y), rr = long(std::ceil(r / cell_));
        for (long i = x0 - rr; i <= x0 + rr; ++i)
            for (long j = y0 - rr; j <= y0 + rr; ++j) {
                auto it = grid_.find(key(i, j));
                if (it == grid_.end())
                    continue;
                for (std::size_t k : it->second)
                    if ((pts_[k] - p).norm() <= r)
                        out.push_back(k);
            }
        return out;
    }
  private:
    long cx(double v) const { return long(std::floor(v / cell_)); }
    static long long key(long i, long j) { return (long long)(i) * 1000003LL + j; }
    std::vector<V2> pts_;
    double cell_;
    std::unordered_map<long long, std::vector<std::size_t>> grid_;
};

/* Lagrange reduction of (d1, d2); U records [d1 d2]_new = [d1 d2]_old U */
void reduce_frame(V2 & d1, V2 & d2, Mat2i & U)
{
    U = Mat2i::identity();
    for (int it = 0; it < 64; ++it) {
        if (d2.norm() < d1.norm()) {
            std::swap(d1, d2);
            U = U * Mat2i{0, 1, 1, 0};
        }
        double k = std::round(dotv(d1, d2) / dotv(d1, d1));
        if (k == 0)
            return;
        d2 = d2 - d1 * k;
        U = U * Mat2i{1, -i64(k), 0, 1};
    }
    throw InconsistencyError("frame reduction did not terminate");
}

} // namespace

Mat2i monodromy_transport(std::vector<FlowerPoint> const & all, Geometry const & g, LoopSpec const & loop)
{
    if (!(loop.radius > 0))
        throw ValidationError("transport loop needs a positive radius");
    if (loop.family != 1 && loop.family != -1)
        throw ValidationError("transport family must be +1 or -1");
    std::vector<V2> pts;
    std::vector<Vec2i> labels;
    for (auto const & f : all) {
        if (f.pu > 0 && (f.qvalue > 0) == (loop.family > 0)) {
            pts.push_back({f.F1, f.F2});
            labels.push_back(f.gamma);
        }
    }
    if (pts.size() < 16)
        throw ValidationError("flower too sparse for transport");
    double const cov = kPi / g.mu; // area per lattice point in the flower plane
    double const spacing = std::sqrt(cov);
    PointIndex index(pts, spacing);
    double const search = 6 * spacing;

    auto snap = [&](V2 x) {
        double best, second;
        std::size_t i = index.nearest(x, best, second, search);
        if (i == std::size_t(-1) || best > 0.5 * spacing)
            throw ResourceError("flower has a hole near (" + fmt12(x.x) + "," + fmt12(x.y)
                                + "); increase qmax");
        if (second <= 1.1 * best)
            throw ResourceError("ambiguous continuation near (" + fmt12(x.x) + "," + fmt12(x.y)
                                + "); a denser flower is needed");
        return i;
    };
    auto label_diff = [&](std::size_t a, std::size_t b) {
        return Vec2i{labels[b].x - labels[a].x, labels[b].y - labels[a].y};
    };

    V2 const c{loop.cx, loop.cy};
    double const rho = loop.radius;
    double const dir = loop.counterclockwise ? 1.0 : -1.0;
    V2 start{c.x + rho * std::cos(loop.start_angle), c.y + rho * std::sin(loop.start_angle)};
    std::size_t P;
    {
        double b, s;
        P = index.nearest(start, b, s, search);
        if (P == std::size_t(-1))
            throw ResourceError("no flower point near the loop start");
    }

    /* initial frame: shortest neighbour difference and the shortest one
     * completing it to a basis of the local lattice */
    V2 d1{0, 0}, d2{0, 0};
    {
        auto nb = index.within(pts[P], 4 * spacing);
        std::vector<V2> diffs;
        for (std::size_t k : nb)
            if (k != P)
                diffs.push_back(pts[k] - pts[P]);
        std::sort(diffs.begin(), diffs.end(), [](V2 a, V2 b) { return a.norm() < b.norm(); });
        if (diffs.size() < 4)
            throw ResourceError("flower too sparse at the loop start");
        d1 = diffs[0];
        bool found = false;
        for (std::size_t k = 1; k < diffs.size(); ++k) {
            double a = std::fabs(crossv(d1, diffs[k]));
            if (a > 0.7 * cov && a < 1.3 * cov) {
                d2 = diffs[k];
                found = true;
                break;
            }
        }
        if (!found)
            throw ResourceError("could not find a local lattice basis at the loop start");
    }
    Mat2i U;
    reduce_frame(d1, d2, U);

    auto frame_labels = [&](std::size_t at, V2 a, V2 b) {
        Vec2i l1 = label_diff(at, snap(pts[at] + a));
        Vec2i l2 = label_diff(at, snap(pts[at] + b));
        return Mat2i{l1.x, l2.x, l1.y, l2.y};
    };
    Mat2i const B0 = frame_labels(P, d1, d2);
    if (B0.det() != 1 && B0.det() != -1)
        throw InconsistencyError("initial frame is not a lattice basis");

    Mat2i T = Mat2i::identity();
    double swept = 0;
    int const moves[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
    for (int step = 0; swept < 2 * kPi; ++step) {
        if (step > 100000)
            throw ResourceError("transport loop did not close");
        V2 const p = pts[P];
        double const a0 = std::atan2(p.y - c.y, p.x - c.x);
        double best_score = -1e300;
        V2 best_x{0, 0};
        double best_delta = 0;
        for (auto const & m : moves) {
            V2 x = p + d1 * m[0] + d2 * m[1];
            double delta = std::remainder(std::atan2(x.y - c.y, x.x - c.x) - a0, 2 * kPi) * dir;
            if (!(delta > 0))
                continue;
            double err = std::fabs((x - c).norm() - rho);
            double score = rho * delta - 2 * err;
            if (score > best_score) {
                best_score = score;
                best_x = x;
                best_delta = delta;
            }
        }
        if (best_score == -1e300)
            throw InconsistencyError("no forward move in the transport frame");
        std::size_t Pn = snap(best_x);
        /* carry the frame to the new cell and re-reduce it */
        V2 n1 = pts[snap(pts[Pn] + d1)] - pts[Pn];
        V2 n2 = pts[snap(pts[Pn] + d2)] - pts[Pn];
        reduce_frame(n1, n2, U);
        T = T * U;
        d1 = n1;
        d2 = n2;
        swept += std::remainder(std::atan2(pts[Pn].y - c.y, pts[Pn].x - c.x) - a0, 2 * kPi) * dir;
        (void)best_delta;
        P = Pn;
    }
    Mat2i const Bend = frame_labels(P, d1, d2);
    if (Bend.det() != 1 && Bend.det() != -1)
        throw InconsistencyError("final frame is not a lattice basis");
    Mat2i M = B0 * T * Bend.inverse();
    if (M.det() != 1)
        throw InconsistencyError("transported frame matrix is not in SL(2,Z): " + to_string(M));
    return M;
}

std::string trajectory_csv(Trajectory const & t)
{
    std::string s = "t,u,v,z,p_u,p_v,p_z,H,Q\n";
    for (auto const & x : t.samples) {
        s += fmt12(x.t) + "," + fmt12(x.x.u) + "," + fmt12(x.x.v) + "," + fmt12(x.x.z) + "," + fmt12(x.x.pu)
             + "," + fmt12(x.x.pv) + "," + fmt12(x.x.pz) + "," + fmt12(x.H) + "," + fmt12(x.Q) + "\n";
    }
    return s;
}

std::string flower_csv(std::vector<FlowerPoint> const & pts)
{
    std::string s = "gamma_x,gamma_y,F1,F2,Q\n";
    for (auto const & p : pts)
        s += std::to_string(p.gamma.x) + "," + std::to_string(p.gamma.y) + "," + fmt12(p.F1) + ","
             + fmt12(p.F2) + "," + std::to_string(p.qvalue) + "\n";
    return s;
}

std::string flower_svg(std::vector<FlowerPoint> const & pts)
{
    double r = 1;
    for (auto const & p : pts)
        r = std::max(r, std::hypot(p.F1, p.F2));
    r *= 1.05;
    SvgPlot plot(-r, r, -r, r);
    plot.title("flower");
    for (auto const & p : pts)
        plot.point(p.F1, p.F2, 1.2, p.qvalue > 0 ? "#1f4e9c" : "#c03020");
    return plot.str();
}

std::string bifurcation_svg(Geometry const & g, std::vector<Invariants> const & samples)
{
    BifurcationRadii b = bifurcation_radii(g);
    double r = std::max(b.r_plus, b.r_minus);
    for (auto const & s : samples)
        r = std::max(r, std::hypot(s.f1, s.f2));
    r *= 1.15;
    SvgPlot plot(-r, r, -r, r);
    plot.title("bifurcation diagram");
    plot.circle(0, 0, b.r_plus, "#c03020");
    plot.circle(0, 0, b.r_minus, "#1f7a3a");
    plot.point(0, 0, 2.5, "#000000");
    for (auto const & s : samples)
        plot.point(s.f1, s.f2, 1.5);
    return plot.str();
}

} // namespace solspec
