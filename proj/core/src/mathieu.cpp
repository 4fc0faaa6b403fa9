#include "solspec/mathieu.hpp"
#include "solspec/errors.hpp"
#include "solspec/semiclassics.hpp"
#include "solspec/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace solspec {

void MathieuProblem::validate() const
{
    if (!(nu_abs > 0) || !std::isfinite(nu_abs))
        throw ValidationError("Mathieu potential strength |nu| must be positive and finite");
    if (!(mu > 0) || !std::isfinite(mu))
        throw ValidationError("Mathieu mu must be positive and finite");
}

double MathieuProblem::potential(double z) const
{
    return nu_abs * std::cosh(2 * mu * z);
}

char const * to_string(Parity p)
{
    return p == Parity::Even ? "even" : "odd";
}

static SymTridiag build(MathieuProblem const & p, double Z, int intervals)
{
    double h = 2 * Z / intervals;
    double ih2 = 1 / (h * h);
    std::vector<double> d(std::size_t(intervals - 1));
    for (int i = 1; i < intervals; ++i)
        d[std::size_t(i - 1)] = 2 * ih2 + p.potential(-Z + i * h);
    return SymTridiag(std::move(d), -ih2);
}

static void check_grid(double Z, int intervals)
{
    if (!(Z > 0) || intervals < 4 || intervals % 2)
        throw ValidationError("Mathieu grid needs Z > 0 and an even interval count >= 4");
}

std::vector<double> fd_levels(MathieuProblem const & p, int kmax, double Z, int intervals)
{
    p.validate();
    check_grid(Z, intervals);
    return build(p, Z, intervals).lowest(kmax, 0.0);
}

int fd_count_below(MathieuProblem const & p, double energy, double Z, int intervals)
{
    p.validate();
    check_grid(Z, intervals);
    return build(p, Z, intervals).count_below(energy);
}

double domain_half_width(MathieuProblem const & p, double top)
{
    p.validate();
    top = std::max(top, p.nu_abs);
    double const two_mu = 2 * p.mu;
    double zt = top > p.nu_abs ? std::acosh(top / p.nu_abs) / two_mu : 0.0;
    double z10 = std::acosh(std::max(1.0, 10 * top / p.nu_abs)) / two_mu;
    /* tunnelling integral from the turning point outward */
    double dz = std::min(1e-3 / p.mu, 1e-3 / std::sqrt(top));
    double z = zt, s = 0;
    for (long step = 0; s < kWkbDecay; ++step) {
        if (step > 100'000'000)
            throw ResourceError("Mathieu domain sizing did not terminate");
        double zm = z + 0.5 * dz;
        s += std::sqrt(std::max(0.0, p.potential(zm) - top)) * dz;
        z += dz;
        /* the integrand grows exponentially; let the step follow it */
        if (step % 1000 == 999)
            dz *= 1.5;
    }
    return std::max(z10, z);
}

/* level index k - 1/2 of the semiclassical action */
static double estimate_level(MathieuProblem const & p, int k)
{
    double target = k + 0.5;
    double lo = p.nu_abs, hi = 2 * p.nu_abs + 1;
    while (action({hi, p.nu_abs, p.mu}) < target)
        hi *= 2;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        if (action({mid, p.nu_abs, p.mu}) < target)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

static std::vector<double> richardson(std::vector<double> const & a, std::vector<double> const & b,
                                      std::vector<double> const & c)
{
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double r1 = (4 * b[i] - a[i]) / 3;
        double r2 = (4 * c[i] - b[i]) / 3;
        r[i] = (16 * r2 - r1) / 15;
    }
    return r;
}

static Parity detect_parity(std::vector<double> const & f)
{
    std::size_t n = f.size() - 1;
    double ev = 0, od = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        double a = f[i], b = f[n - i];
        ev += (a - b) * (a - b);
        od += (a + b) * (a + b);
    }
    return ev <= od ? Parity::Even : Parity::Odd;
}

/* samples including the two Dirichlet endpoints, int f^2 dz = 1, first
 * significant lobe positive */
static std::vector<double> normalized_vector(SymTridiag const & T, double sigma, double h)
{
    auto v = T.eigenvector(sigma);
    std::vector<double> f(v.size() + 2, 0.0);
    std::copy(v.begin(), v.end(), f.begin() + 1);
    double s2 = 0, mx = 0;
    for (double x : f) {
        s2 += x * x;
        mx = std::max(mx, std::fabs(x));
    }
    double scale = 1 / std::sqrt(s2 * h);
    for (double x : f) {
        if (std::fabs(x) > 1e-3 * mx) {
            if (x < 0)
                scale = -scale;
            break;
        }
    }
    for (double & x : f)
        x *= scale;
    return f;
}

MathieuSolution solve(MathieuProblem const & p, int kmax, double tol, MathieuOptions const & opt)
{
    p.validate();
    if (kmax < 1)
        throw ValidationError("Mathieu solve needs kmax >= 1");
    if (!(tol > 0) || tol > 1e-4)
        throw ValidationError("Mathieu tolerance must lie in (0, 1e-4]");

    double top = 1.1 * estimate_level(p, kmax - 1);
    for (int attempt = 0; attempt < 10; ++attempt) {
        double const Z = domain_half_width(p, top);
        int N0 = int(std::ceil(2 * Z * std::sqrt(top) / 0.5));
        N0 = std::max(N0, 200);
        N0 += N0 % 2;

        std::vector<std::vector<double>> L;
        std::vector<double> R, Rprev;
        int N = N0;
        for (int j = 0;; ++j, N *= 2) {
            if (N > opt.max_intervals || N < 0) {
                std::size_t worst = 0;
                double wd = -1;
                for (std::size_t i = 0; i < R.size(); ++i) {
                    double d = std::fabs(R[i] - Rprev[i]) / std::fabs(R[i]);
                    if (d > wd) {
                        wd = d;
                        worst = i;
                    }
                }
                throw ConvergenceError("Mathieu level " + std::to_string(worst) + " (nu="
                                           + std::to_string(p.nu_abs) + ") not converged within the grid budget",
                                       Rprev.empty() ? NAN : Rprev[worst], R.empty() ? NAN : R[worst]);
            }
            SymTridiag T = build(p, Z, N);
            std::vector<double> Lj;
            if (j == 0) {
                Lj = T.lowest(kmax, 1e-3 * tol * p.nu_abs);
            } else {
                std::size_t const n = std::size_t(kmax);
                std::vector<double> guess(n), w(n), at(n);
                for (std::size_t i = 0; i < std::size_t(kmax); ++i) {
                    double prev = L[j - 1][i];
                    if (j >= 2) {
                        double d = prev - L[j - 2][i];
                        guess[i] = prev + d / 4;
                        w[i] = 0.5 * std::fabs(d) + 1e-14 * std::fabs(prev);
                    } else {
                        guess[i] = prev;
                        w[i] = 0.03 * std::fabs(prev);
                    }
                    at[i] = 1e-3 * tol * std::fabs(guess[i]);
                }
                Lj = T.refine(guess, w, at);
            }
            L.push_back(std::move(Lj));
            if (j >= 2) {
                Rprev = R;
                R = richardson(L[j - 2], L[j - 1], L[j]);
            }
            if (j >= 3) {
                bool ok = true;
                for (std::size_t i = 0; i < R.size() && ok; ++i)
                    ok = std::fabs(R[i] - Rprev[i]) < tol * std::fabs(R[i]);
                if (ok)
                    break;
            }
        }

        double actual_top = R.back();
        if (domain_half_width(p, actual_top) > Z * (1 + 1e-12)) {
            top = 1.1 * actual_top;
            continue;
        }

        MathieuSolution s;
        s.problem = p;
        s.tol = tol;
        s.levels = R;
        s.error_estimates.resize(R.size());
        for (std::size_t i = 0; i < R.size(); ++i)
            s.error_estimates[i] = std::fabs(R[i] - Rprev[i]);
        s.grids_used = int(L.size());
        for (std::size_t i = 0; i < R.size(); ++i) {
            if (i == 0 ? !(R[0] > p.nu_abs) : !(R[i] > R[i - 1]))
                throw InconsistencyError("Mathieu levels are not strictly increasing above |nu|");
        }

        /* eigenvectors on the finest grid, or parity only from the coarsest */
        int const Nv = opt.eigenvectors ? N : N0;
        std::vector<double> const & Lv = opt.eigenvectors ? L.back() : L.front();
        SymTridiag T = build(p, Z, Nv);
        double h = 2 * Z / Nv;
        s.grid = {Z, Nv, h};
        for (std::size_t i = 0; i < R.size(); ++i) {
            auto f = normalized_vector(T, Lv[i], h);
            s.parities.push_back(detect_parity(f));
            if (opt.eigenvectors)
                s.eigenvectors.push_back(std::move(f));
        }
        if (!opt.eigenvectors)
            s.grid = {};
        return s;
    }
    throw ConvergenceError("Mathieu domain sizing did not settle", top, top);
}

/* finite differences underestimate the levels, so the count on a grid
 * with h sqrt(E) = 1/4 is at least the true count below E */
static int level_count_guess(MathieuProblem const & p, double energy)
{
    p.validate();
    if (!(energy > p.nu_abs))
        return 1;
    double Z = domain_half_width(p, 1.05 * energy);
    int N = int(std::ceil(2 * Z * std::sqrt(energy) / 0.25));
    N = std::max(N, 400);
    N += N % 2;
    return fd_count_below(p, energy, Z, N) + 1;
}

MathieuSolution solve_below(MathieuProblem const & p, double energy, double tol, MathieuOptions const & opt)
{
    int K = level_count_guess(p, energy);
    for (int attempt = 0; attempt < 20; ++attempt) {
        MathieuSolution s = solve(p, K, tol, opt);
        if (s.levels.back() > energy)
            return s;
        K += std::max(2, K / 4);
    }
    throw ConvergenceError("could not bracket the levels below the requested energy", energy, K);
}

double eigenfunction(MathieuSolution const & s, int k, double z)
{
    if (k < 0 || std::size_t(k) >= s.eigenvectors.size())
        throw DomainError("eigenfunction level " + std::to_string(k) + " not available");
    MathieuGrid const & g = s.grid;
    if (!(std::fabs(z) < g.half_width))
        return 0.0;
    auto const & f = s.eigenvectors[std::size_t(k)];
    double t = (z + g.half_width) / g.spacing;
    int i = int(std::floor(t));
    i = std::clamp(i, 1, g.intervals - 2);
    double x = t - i;
    /* Lagrange cubic through i-1, i, i+1, i+2 */
    double fm = f[std::size_t(i - 1)], f0 = f[std::size_t(i)], f1 = f[std::size_t(i + 1)],
           f2 = f[std::size_t(i + 2)];
    double xm = x + 1, x1 = x - 1, x2 = x - 2;
    return -fm * x * x1 * x2 / 6 + f0 * xm * x1 * x2 / 2 - f1 * xm * x * x2 / 2 + f2 * xm * x * x1 / 6;
}

double small_nu_model(int k, double nu_abs, double mu)
{
    if (!(nu_abs > 0) || !(nu_abs < 1))
        throw DomainError("small-nu model needs 0 < |nu| < 1");
    if (k < 0 || !(mu > 0))
        throw DomainError("small-nu model needs k >= 0 and mu > 0");
    double const pi = std::numbers::pi;
    double l = std::log(nu_abs);
    return (mu * pi * k) * (mu * pi * k) / (l * l);
}

std::shared_ptr<MathieuSolution const> MathieuCache::lookup(Key const & k) const
{
    std::shared_lock lock(mutex_);
    auto it = map_.find(k);
    if (it == map_.end())
        return nullptr;
    ++hits_;
    return it->second;
}

void MathieuCache::store(Key const & k, std::shared_ptr<MathieuSolution const> v)
{
    std::unique_lock lock(mutex_);
    map_[k] = std::move(v);
}

std::shared_ptr<MathieuSolution const> MathieuCache::get(MathieuProblem const & p, int kmax, double tol,
                                                         MathieuOptions const & opt)
{
    Key k{p.nu_abs, p.mu, kmax, tol, opt.eigenvectors};
    if (auto v = lookup(k))
        return v;
    auto v = std::make_shared<MathieuSolution const>(solve(p, kmax, tol, opt));
    store(k, v);
    return v;
}

std::shared_ptr<MathieuSolution const> MathieuCache::get_below(MathieuProblem const & p, double energy,
                                                               double tol, MathieuOptions const & opt)
{
    /* find the level count first so the key stays (nu, mu, kmax, tol) */
    int K = level_count_guess(p, energy);
    for (int attempt = 0; attempt < 20; ++attempt) {
        auto s = get(p, K, tol, opt);
        if (s->levels.back() > energy)
            return s;
        K += std::max(2, K / 4);
    }
    throw ConvergenceError("could not bracket the levels below the requested energy", energy, K);
}

std::size_t MathieuCache::size() const
{
    std::shared_lock lock(mutex_);
    return map_.size();
}

std::size_t MathieuCache::hits() const
{
    return hits_;
}

} // namespace solspec
