#include "solspec/semiclassics.hpp"
#include "solspec/errors.hpp"
#include "solspec/io.hpp"
#include "solspec/spectrum.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace solspec {

static EllipticKE agm_ke(double k, double kp)
{
    double const pi = std::numbers::pi;
    double a = 1, b = kp, c = k;
    double sum = 0.5 * c * c; // 2^{n-1} c_n^2 at n = 0
    double pw = 0.5;
    for (int it = 0; it < 64; ++it) {
        if (std::fabs(c) <= 1e-17 * a)
            break;
        double an = 0.5 * (a + b);
        double bn = std::sqrt(a * b);
        c = 0.5 * (a - b);
        a = an;
        b = bn;
        pw *= 2;
        sum += pw * c * c;
    }
    double K = pi / (2 * a);
    return {K, K * (1 - sum)};
}

EllipticKE elliptic_ke(double k)
{
    if (!(k >= 0) || !(k < 1))
        throw DomainError("elliptic modulus must lie in [0, 1)");
    return agm_ke(k, std::sqrt((1 - k) * (1 + k)));
}

EllipticKE elliptic_ke_complement(double kp)
{
    if (!(kp > 0) || !(kp <= 1))
        throw DomainError("complementary modulus must lie in (0, 1]");
    return agm_ke(std::sqrt((1 - kp) * (1 + kp)), kp);
}

double f_of_g(double g)
{
    if (!(g > 0) || !(g <= 1))
        throw DomainError("f(g) needs 0 < g <= 1");
    if (g == 1)
        return 0;
    double k2 = (1 - g) / (1 + g);
    EllipticKE ke = agm_ke(std::sqrt(k2), std::sqrt(2 * g / (1 + g)));
    double diff = ke.K - ke.E;
    /* near g = 1, K - E = (pi/4) k^2 (1 + 3/8 k^2 + ...) loses digits */
    if (k2 < 1e-4) {
        double const pi = std::numbers::pi;
        diff = pi / 4 * k2 * (1 + 3.0 / 8 * k2 + 15.0 / 64 * k2 * k2 + 175.0 / 1024 * k2 * k2 * k2);
    }
    return 4 * std::sqrt(1 + g) * diff;
}

double f_integral(double rel_tol)
{
    using boost::math::quadrature::gauss_kronrod;
    double const g0 = 0.125;
    double err1 = 0, err2 = 0;
    double upper = gauss_kronrod<double, 15>::integrate([](double g) { return f_of_g(g); }, g0, 1.0,
                                                        20, rel_tol, &err1);
    /* g = exp(-s): f(g) ~ 2 s, so the tail beyond s = 60 is below 1e-24 */
    double s0 = -std::log(g0);
    double lower = gauss_kronrod<double, 15>::integrate(
        [](double s) { return f_of_g(std::exp(-s)) * std::exp(-s); }, s0, 60.0, 20, rel_tol, &err2);
    return upper + lower;
}

double ActionQuery::g() const
{
    return std::fabs(nu) / energy;
}

double action(ActionQuery const & q)
{
    if (!(q.energy > 0) || !(q.mu > 0) || !std::isfinite(q.nu))
        throw DomainError("action needs energy > 0, mu > 0 and finite nu");
    double g = q.g();
    if (!(g > 0) || g > 1)
        throw DomainError("action needs 0 < |nu|/energy <= 1");
    double const pi = std::numbers::pi;
    return std::sqrt(q.energy) * f_of_g(g) / (2 * pi * q.mu);
}

double weyl_prediction(double energy, double area)
{
    if (!(energy > 0))
        throw DomainError("Weyl prediction needs energy > 0");
    double const pi = std::numbers::pi;
    return 4 * pi / 3 * std::pow(energy, 1.5) * area / std::pow(2 * pi, 3);
}

XPlusMinus x_pm(double theta)
{
    double const pi = std::numbers::pi;
    if (!(theta > 0) || !(theta < pi))
        throw DomainError("X+- needs 0 < theta < pi");
    double s = std::sin(theta);
    double d = theta - pi / 2;
    return {4.0 / 3 * (pi / 2 + d) / s, 4.0 / 3 * (pi / 2 - d) / s};
}

long long empirical_count(SpectrumTable const & t, double energy)
{
    long long n = 0;
    for (auto const & l : t.lines) {
        if (l.energy > energy)
            break;
        n += l.multiplicity;
    }
    return n;
}

std::vector<WeylPoint> weyl_curve(SpectrumTable const & t, std::vector<double> const & energies,
                                  double area)
{
    std::vector<WeylPoint> out;
    for (double e : energies) {
        if (e > t.energy_cut)
            throw PreconditionError("Weyl point above the spectrum cutoff");
        WeylPoint w;
        w.energy = e;
        w.empirical = empirical_count(t, e);
        w.predicted = weyl_prediction(e, area);
        w.ratio = double(w.empirical) / w.predicted;
        out.push_back(w);
    }
    return out;
}

std::string weyl_csv(std::vector<WeylPoint> const & curve)
{
    std::string out = "energy,empirical,predicted,ratio\n";
    for (auto const & w : curve)
        out += fmt12(w.energy) + "," + std::to_string(w.empirical) + "," + fmt12(w.predicted) + "," + fmt12(w.ratio)
               + "\n";
    return out;
}

std::string f_table_csv(int n)
{
    if (n < 1)
        throw ValidationError("f table needs at least one point");
    std::string out = "g,f\n";
    for (int i = 1; i <= n; ++i) {
        double g = double(i) / n;
        out += fmt12(g) + "," + fmt12(f_of_g(g)) + "\n";
    }
    return out;
}

} // namespace solspec
