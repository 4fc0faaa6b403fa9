#include "solspec/tridiag.hpp"
#include "solspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace solspec {

SymTridiag::SymTridiag(std::vector<double> diag, double off)
    : d_(std::move(diag))
    , e_(off)
    , e2_(off * off)
{
    if (d_.empty())
        throw ValidationError("empty tridiagonal matrix");
    double m = std::fabs(e_);
    for (double x : d_)
        m = std::max(m, std::fabs(x));
    pivmin_ = std::numeric_limits<double>::min() * std::max(1.0, m * m);
}

int SymTridiag::count_below(double x) const
{
    int n = 0;
    double q = d_[0] - x;
    if (std::fabs(q) < pivmin_)
        q = -pivmin_;
    n += q < 0;
    for (std::size_t i = 1; i < d_.size(); ++i) {
        q = d_[i] - x - e2_ / q;
        if (std::fabs(q) < pivmin_)
            q = -pivmin_;
        n += q < 0;
    }
    return n;
}

double SymTridiag::lower_bound() const
{
    double m = *std::min_element(d_.begin(), d_.end());
    return m - 2 * std::fabs(e_);
}

double SymTridiag::upper_bound() const
{
    double m = *std::max_element(d_.begin(), d_.end());
    return m + 2 * std::fabs(e_);
}

void SymTridiag::bisect(double lo, double hi, int clo, int chi, int kmax, double abs_tol,
                        std::vector<double> & out) const
{
    /* eigenvalues clo..chi-1 lie in [lo, hi) */
    double const eps = std::numeric_limits<double>::epsilon();
    for (;;) {
        if (clo >= kmax || clo == chi)
            return;
        double mid = 0.5 * (lo + hi);
        double floor_w = std::max(abs_tol, 4 * eps * std::max(std::fabs(lo), std::fabs(hi)));
        if (hi - lo <= floor_w || mid <= lo || mid >= hi) {
            for (int i = clo; i < std::min(chi, kmax); ++i)
                out[std::size_t(i)] = mid;
            return;
        }
        int cm = count_below(mid);
        if (cm == clo) {
            lo = mid;
        } else if (cm == chi) {
            hi = mid;
        } else {
            bisect(lo, mid, clo, cm, kmax, abs_tol, out);
            lo = mid;
            clo = cm;
        }
    }
}

std::vector<double> SymTridiag::lowest(int k, double abs_tol) const
{
    int n = int(d_.size());
    if (k > n)
        throw ResourceError("requested " + std::to_string(k) + " eigenvalues of a "
                            + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    std::vector<double> out(std::size_t(k), 0.0);
    if (k == 0)
        return out;
    double lo = lower_bound(), hi = upper_bound();
    double pad = 1e-12 * std::max(std::fabs(lo), std::fabs(hi)) + 1e-300;
    bisect(lo - pad, hi + pad, 0, n, k, abs_tol, out);
    return out;
}

std::vector<double> SymTridiag::refine(std::vector<double> const & guess,
                                       std::vector<double> const & w,
                                       std::vector<double> const & abs_tol) const
{
    std::size_t const k = guess.size();
    std::vector<double> out(k, 0.0);
    std::vector<char> done(k, 0);
    double const glo = lower_bound(), ghi = upper_bound();
    for (std::size_t i = 0; i < k; ++i) {
        if (done[i])
            continue;
        int const idx = int(i);
        double width = std::max(w[i], 4 * std::numeric_limits<double>::epsilon() * std::fabs(guess[i]));
        double lo = guess[i] - width, hi = guess[i] + width;
        int clo = count_below(lo), chi = count_below(hi);
        for (int grow = 0; clo > idx || chi <= idx; ++grow) {
            if (grow > 60)
                throw ConvergenceError("could not bracket eigenvalue " + std::to_string(idx), lo, hi);
            width *= 4;
            if (clo > idx) {
                lo = std::max(glo, guess[i] - width);
                clo = count_below(lo);
            }
            if (chi <= idx) {
                hi = std::min(ghi, guess[i] + width);
                chi = count_below(hi);
                if (hi >= ghi)
                    chi = std::max(chi, idx + 1);
            }
        }
        std::vector<double> tmp(std::size_t(chi), 0.0);
        bisect(lo, hi, clo, chi, chi, abs_tol[i], tmp);
        for (int j = clo; j < chi && j < int(k); ++j) {
            if (!done[std::size_t(j)]) {
                out[std::size_t(j)] = tmp[std::size_t(j)];
                done[std::size_t(j)] = 1;
            }
        }
    }
    return out;
}

std::vector<double> SymTridiag::in_range(double lo, double hi, double abs_tol) const
{
    int clo = count_below(lo), chi = count_below(hi);
    std::vector<double> all(std::size_t(chi), 0.0);
    if (chi > clo)
        bisect(lo, hi, clo, chi, chi, abs_tol, all);
    return std::vector<double>(all.begin() + clo, all.end());
}

std::vector<double> SymTridiag::eigenvector(double sigma, int iterations) const
{
    std::size_t const n = d_.size();
    /* LU of T - sigma I with partial pivoting: U has two superdiagonals */
    std::vector<double> u0(n), u1(n, 0.0), u2(n, 0.0), l(n, 0.0);
    std::vector<char> swapped(n, 0);
    double const tiny = std::max(pivmin_, 1e-300) + std::numeric_limits<double>::epsilon()
                        * (std::fabs(sigma) + std::fabs(e_));
    /* row i of the working matrix: (diag, sup1, sup2) */
    double cd = d_[0] - sigma, cs1 = n > 1 ? e_ : 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double nd = d_[i + 1] - sigma, ns1 = i + 2 < n ? e_ : 0.0, ns0 = e_;
        /* next row is (ns0, nd, ns1) in columns (i, i+1, i+2) */
        if (std::fabs(cd) >= std::fabs(ns0)) {
            double piv = std::fabs(cd) < tiny ? (cd < 0 ? -tiny : tiny) : cd;
            double m = ns0 / piv;
            u0[i] = piv;
            u1[i] = cs1;
            u2[i] = 0;
            l[i] = m;
            cd = nd - m * cs1;
            cs1 = ns1;
        } else {
            double m = cd / ns0;
            u0[i] = ns0;
            u1[i] = nd;
            u2[i] = ns1;
            l[i] = m;
            swapped[i] = 1;
            cd = cs1 - m * nd;
            cs1 = -m * ns1;
        }
    }
    u0[n - 1] = std::fabs(cd) < tiny ? (cd < 0 ? -tiny : tiny) : cd;

    std::vector<double> x(n);
    /* deterministic start vector that is not orthogonal to smooth modes */
    for (std::size_t i = 0; i < n; ++i)
        x[i] = 1.0 + 0.25 * std::sin(0.7 * double(i) + 0.3);
    for (int it = 0; it < iterations; ++it) {
        /* forward: apply L^-1 with the recorded swaps */
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (swapped[i]) {
                std::swap(x[i], x[i + 1]);
                x[i + 1] -= l[i] * x[i];
            } else {
                x[i + 1] -= l[i] * x[i];
            }
        }
        /* backward with U */
        for (std::size_t k = n; k-- > 0;) {
            double s = x[k];
            if (k + 1 < n)
                s -= u1[k] * x[k + 1];
            if (k + 2 < n)
                s -= u2[k] * x[k + 2];
            x[k] = s / u0[k];
        }
        double nrm = 0;
        for (double v : x)
            nrm += v * v;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0) || !std::isfinite(nrm))
            throw ConvergenceError("inverse iteration broke down", sigma, nrm);
        for (double & v : x)
            v /= nrm;
    }
    return x;
}

} // namespace solspec
