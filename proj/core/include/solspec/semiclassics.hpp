#pragma once

#include <string>
#include <vector>

namespace solspec {

struct SpectrumTable;

struct EllipticKE {
    double K = 0;
    double E = 0;
};

/* complete elliptic integrals by the arithmetic-geometric mean */
EllipticKE elliptic_ke(double k);
/* same, with the complementary modulus k' = sqrt(1 - k^2) supplied
 * directly so that k -> 1 keeps full precision */
EllipticKE elliptic_ke_complement(double kprime);

/* 4 sqrt(1+g) (K(k) - E(k)), k^2 = (1-g)/(1+g) */
double f_of_g(double g);

/* int_0^1 f(g) dg, adaptive Gauss-Kronrod, g = exp(-s) below g = 1/8 */
double f_integral(double rel_tol = 1e-13);

struct ActionQuery {
    double energy = 0;
    double nu = 0;
    double mu = 0;
    double g() const;
};

/* I = sqrt(Lambda) f(g) / (2 pi mu) */
double action(ActionQuery const & q);

/* Weyl: (4 pi / 3) Lambda^{3/2} area / (2 pi)^3 */
double weyl_prediction(double energy, double area);

struct XPlusMinus {
    double plus = 0;
    double minus = 0;
};
XPlusMinus x_pm(double theta);

/* eigenvalues <= energy counted with multiplicity */
long long empirical_count(SpectrumTable const & t, double energy);

struct WeylPoint {
    double energy = 0;
    long long empirical = 0;
    double predicted = 0;
    double ratio = 0;
};
std::vector<WeylPoint> weyl_curve(SpectrumTable const & t, std::vector<double> const & energies,
                                  double area);

std::string weyl_csv(std::vector<WeylPoint> const & curve);
/* (g, f(g)) at n points spaced evenly in (0, 1] */
std::string f_table_csv(int n);

} // namespace solspec
