#include "solspec/qforms.hpp"
#include "solspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace solspec {

i128 QuadraticForm::discriminant() const
{
    return checked_sub(checked_mul(b, b), checked_mul(checked_mul(4, a), c));
}

i128 QuadraticForm::operator()(i64 x, i64 y) const
{
    i128 r = checked_mul(checked_mul(a, x), x);
    r = checked_add(r, checked_mul(checked_mul(b, x), y));
    return checked_add(r, checked_mul(checked_mul(c, y), y));
}

std::string to_string(QuadraticForm const & q)
{
    return "(" + std::to_string(q.a) + "," + std::to_string(q.b) + "," + std::to_string(q.c) + ")";
}

bool is_valid_discriminant(i64 d)
{
    if (d <= 0 || is_square(d))
        return false;
    return d % 4 == 0 || d % 4 == 1;
}

void require_valid_discriminant(i64 d)
{
    if (!is_valid_discriminant(d))
        throw ValidationError("discriminant " + std::to_string(d)
                              + " must be positive, non-square and 0 or 1 mod 4");
}

void require_valid_form(QuadraticForm const & q)
{
    i128 d = q.discriminant();
    if (d <= 0 || is_square(d))
        throw ValidationError("form " + to_string(q) + " has discriminant " + to_string(d)
                              + ", need a positive non-square");
}

void require_hyperbolic(Mat2i const & A)
{
    if (A.det() != 1)
        throw ValidationError("matrix " + to_string(A) + " is not unimodular (det "
                              + to_string(A.det()) + ")");
    i128 t = A.trace();
    if (t <= 2 && t >= -2)
        throw ValidationError("matrix " + to_string(A) + " is not hyperbolic (|trace| <= 2)");
}

QuadraticForm form_from_matrix(Mat2i const & A)
{
    require_hyperbolic(A);
    QuadraticForm q{-A.a21, narrow(i128(A.a11) - A.a22), A.a12};
    /* disc = (a11 - a22)^2 + 4 a12 a21 = tr^2 - 4 det */
    if (q.discriminant() != checked_sub(checked_mul(A.trace(), A.trace()), 4))
        throw InconsistencyError("discriminant of Q_A differs from tr^2 - 4");
    return q;
}

int kronecker(i64 a, i64 b)
{
    static int const tab[8] = {0, 1, 0, -1, 0, -1, 0, 1};
    if (b == 0)
        return (a == 1 || a == -1) ? 1 : 0;
    if (a % 2 == 0 && b % 2 == 0)
        return 0;
    int v = 0;
    while (b % 2 == 0) {
        ++v;
        b /= 2;
    }
    int k = (v % 2 == 0) ? 1 : tab[a & 7];
    if (b < 0) {
        b = -b;
        if (a < 0)
            k = -k;
    }
    for (;;) {
        if (a == 0)
            return b > 1 ? 0 : k;
        v = 0;
        while (a % 2 == 0) {
            ++v;
            a /= 2;
        }
        if (v % 2)
            k *= tab[b & 7];
        if (a & b & 2)
            k = -k;
        i64 r = a < 0 ? -a : a;
        a = b % r;
        b = r;
    }
}

PellSolution pell_fundamental(i64 d)
{
    require_valid_discriminant(d);
    i128 const s = isqrt(d);
    i128 const P0 = d % 2;
    i128 P = P0, Q = 2;
    /* convergents of omega = (P0 + sqrt d)/2 */
    i128 pm2 = 0, pm1 = 1, qm2 = 1, qm1 = 0;
    for (int iter = 0; iter < 100000; ++iter) {
        i128 a = Q > 0 ? floor_div(P + s, Q) : floor_div(-P - s - 1, -Q);
        i128 p = checked_add(checked_mul(a, pm1), pm2);
        i128 q = checked_add(checked_mul(a, qm1), qm2);
        pm2 = pm1; pm1 = p;
        qm2 = qm1; qm1 = q;
        i128 X = checked_sub(checked_mul(2, p), checked_mul(q, P0));
        i128 norm = checked_sub(checked_mul(X, X), checked_mul(checked_mul(d, q), q));
        if (norm == 4 && X > 0 && q > 0)
            return {X, q, d};
        i128 Pn = checked_sub(checked_mul(a, Q), P);
        i128 num = checked_sub(d, checked_mul(Pn, Pn));
        if (num % Q != 0)
            throw InconsistencyError("continued fraction lost integrality for d=" + std::to_string(d));
        Q = num / Q;
        P = Pn;
    }
    throw ResourceError("continued fraction of sqrt(" + std::to_string(d)
                        + ") did not reach a Pell solution");
}

Mat2i automorph_generator(QuadraticForm const & q)
{
    require_valid_form(q);
    if (!q.is_primitive())
        throw ValidationError("automorph generator needs a primitive form, got " + to_string(q));
    i64 d = narrow(q.discriminant());
    PellSolution ps = pell_fundamental(d);
    i128 bY = checked_mul(q.b, ps.Y0);
    i128 m11 = checked_sub(ps.X0, bY), m22 = checked_add(ps.X0, bY);
    if (m11 % 2 != 0 || m22 % 2 != 0)
        throw InconsistencyError("parity failure building the automorph of " + to_string(q));
    Mat2i a0{narrow(m11 / 2), narrow(checked_mul(-q.c, ps.Y0)),
             narrow(checked_mul(q.a, ps.Y0)), narrow(m22 / 2)};
    if (a0.det() != 1)
        throw InconsistencyError("automorph of " + to_string(q) + " is not unimodular");
    return a0;
}

PrimitivePart primitive_part(QuadraticForm const & q)
{
    i64 g = q.content();
    if (g == 0)
        throw ValidationError("zero form has no primitive part");
    QuadraticForm f{q.a / g, q.b / g, q.c / g};
    i64 lead = f.a != 0 ? f.a : (f.b != 0 ? f.b : f.c);
    int sign = lead > 0 ? 1 : -1;
    if (sign < 0)
        f = -f;
    return {f, g, sign};
}

PrimitivityIndex primitivity_index(Mat2i const & A)
{
    QuadraticForm qa = form_from_matrix(A);
    PrimitivePart pp = primitive_part(qa);
    Mat2i a0 = automorph_generator(pp.form);
    Mat2i const inv = a0.inverse();
    i128 const tA = A.trace() < 0 ? -A.trace() : A.trace();
    Mat2i pw = a0, pwi = inv;
    for (int r = 1; r <= 64; ++r) {
        if (pw == A) return {r, a0, 1, r};
        if (-pw == A) return {r, a0, -1, r};
        if (pwi == A) return {r, a0, 1, -r};
        if (-pwi == A) return {r, a0, -1, -r};
        if (pw.trace() > tA)
            break;
        pw = pw * a0;
        pwi = pwi * inv;
    }
    throw InconsistencyError("no r <= 64 with A = +-A0^r for A=" + to_string(A)
                             + ", A0=" + to_string(a0));
}

/* for the strict inequalities against sqrt(d) we only compare integers:
 * sqrt d is irrational */
static bool lt_sqrt(i128 x, i128 d) { return x < 0 || x * x < d; }   // x < sqrt d
static bool gt_sqrt(i128 x, i128 d) { return x > 0 && x * x > d; }   // x > sqrt d

std::vector<QuadraticForm> reduced_forms(i64 d)
{
    require_valid_discriminant(d);
    std::vector<QuadraticForm> out;
    i64 s = narrow(isqrt(d));
    for (i64 b = 1; b <= s; ++b) {
        if ((b - d) % 2 != 0)
            continue;
        i64 m = (d - b * b) / 4; // = -ac > 0
        for (i64 a = 1; a <= m; ++a) {
            if (m % a)
                continue;
            /* sqrt d - b < 2a < sqrt d + b */
            if (!gt_sqrt(2 * a + b, d) || !lt_sqrt(2 * a - b, d))
                continue;
            for (int sg : {1, -1}) {
                QuadraticForm f{sg * a, b, -sg * (m / a)};
                if (f.is_primitive())
                    out.push_back(f);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](auto const & x, auto const & y) {
        return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
    });
    return out;
}

QuadraticForm rho(QuadraticForm const & q)
{
    i128 d = q.discriminant();
    i128 s = isqrt(d);
    i128 two_c = 2 * (q.c < 0 ? -i128(q.c) : i128(q.c));
    /* largest b' = -b mod 2|c| below sqrt d */
    i128 bn = s - pos_mod(s + q.b, two_c);
    i128 num = checked_sub(checked_mul(bn, bn), d);
    if (num % (4 * i128(q.c)) != 0)
        throw InconsistencyError("rho step lost integrality at " + to_string(q));
    return {q.c, narrow(bn), narrow(num / (4 * i128(q.c)))};
}

std::vector<std::vector<QuadraticForm>> reduction_cycles(i64 d)
{
    auto forms = reduced_forms(d);
    auto key = [](QuadraticForm const & f) { return std::tuple(f.a, f.b, f.c); };
    std::set<std::tuple<i64, i64, i64>> seen;
    std::vector<std::vector<QuadraticForm>> cycles;
    for (auto const & f : forms) {
        if (seen.count(key(f)))
            continue;
        std::vector<QuadraticForm> cyc;
        QuadraticForm g = f;
        do {
            if (!seen.insert(key(g)).second)
                throw InconsistencyError("rho is not a permutation of reduced forms, d="
                                         + std::to_string(d));
            cyc.push_back(g);
            g = rho(g);
            if (cyc.size() > forms.size())
                throw InconsistencyError("rho cycle does not close, d=" + std::to_string(d));
        } while (!(g == f));
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

i64 class_number(i64 d)
{
    return i64(reduction_cycles(d).size());
}

QuadraticForm principal_form(i64 d)
{
    require_valid_discriminant(d);
    if (d % 4 == 0)
        return {1, 0, -d / 4};
    return {1, 1, (1 - d) / 4};
}

namespace {

/* Eigencoordinates of a0: p(a0 v) = lambda0 p(v), q(a0 v) = q(v)/lambda0
 * and form(v) = kappa p(v) q(v). Computed in long double; only used to
 * place solutions in a window, never to decide that a point solves. */
struct RepFrame {
    long double lam, lu_x, lu_y, lv_x, lv_y, kappa;
    long double p(Vec2i v) const { return lu_x * v.x + lu_y * v.y; }
    long double q(Vec2i v) const { return lv_x * v.x + lv_y * v.y; }
};

RepFrame rep_frame(QuadraticForm const & f, Mat2i const & a0)
{
    long double t = (long double)a0.trace();
    if (t <= 2)
        throw ValidationError("automorph " + to_string(a0) + " must have trace > 2");
    long double r = std::sqrt(t * t - 4);
    RepFrame fr{};
    fr.lam = (t + r) / 2;
    long double m21 = a0.a21, m11 = a0.a11;
    if (m21 == 0)
        throw ValidationError("automorph " + to_string(a0) + " is triangular");
    /* left eigenvectors (m21, lambda - m11) and (m21, 1/lambda - m11) */
    fr.lu_x = m21;
    fr.lu_y = fr.lam - m11;
    fr.lv_x = m21;
    fr.lv_y = 1 / fr.lam - m11;
    long double nu = std::hypot(fr.lu_x, fr.lu_y), nv = std::hypot(fr.lv_x, fr.lv_y);
    fr.lu_x /= nu; fr.lu_y /= nu;
    fr.lv_x /= nv; fr.lv_y /= nv;
    Vec2i e{1, 0};
    fr.kappa = (long double)f(e) / (fr.p(e) * fr.q(e));
    return fr;
}

/* all solutions of f = n with p in [lo, hi]; scanning x exactly */
std::vector<Vec2i> window_solutions(QuadraticForm const & f, i64 n, RepFrame const & fr,
                                    long double lo, long double hi, i64 max_candidates)
{
    /* window in (p, q): p in [lo, hi], |q| <= |n| / (|kappa| lo) */
    long double qb = std::fabs((long double)n) / (std::fabs(fr.kappa) * lo) * (1 + 1e-9L) + 1e-9L;
    /* invert [p; q] = L v */
    long double det = fr.lu_x * fr.lv_y - fr.lu_y * fr.lv_x;
    long double xmin = 1e300L, xmax = -1e300L;
    for (long double pp : {lo, hi})
        for (long double qq : {-qb, qb}) {
            long double x = (fr.lv_y * pp - fr.lu_y * qq) / det;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    i64 x0 = (i64)std::floor(xmin) - 1, x1 = (i64)std::ceil(xmax) + 1;
    if (x1 - x0 > max_candidates)
        throw ResourceError("representation scan for n=" + std::to_string(n) + " needs "
                            + std::to_string(x1 - x0) + " candidates, bound is "
                            + std::to_string(max_candidates));
    i128 const d = f.discriminant();
    std::vector<Vec2i> out;
    for (i64 x = x0; x <= x1; ++x) {
        /* c y^2 + b x y + (a x^2 - n) = 0 */
        i128 disc = checked_add(checked_mul(checked_mul(d, x), x), checked_mul(4 * i128(f.c), n));
        if (disc < 0)
            continue;
        i128 r = isqrt(disc);
        if (r * r != disc)
            continue;
        for (i128 sg : {i128(1), i128(-1)}) {
            if (sg < 0 && r == 0)
                break;
            i128 num = -i128(f.b) * x + sg * r;
            i128 den = 2 * i128(f.c);
            if (num % den != 0)
                continue;
            Vec2i v{x, narrow(num / den)};
            if (f(v) != n)
                throw InconsistencyError("root recovery failed in representation scan");
            long double p = fr.p(v);
            if (p >= lo && p <= hi)
                out.push_back(v);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

std::vector<Vec2i> rep_orbit_representatives(QuadraticForm const & f, i64 n, Mat2i const & a0,
                                             i64 max_candidates)
{
    require_valid_form(f);
    if (n == 0)
        throw ValidationError("representation count needs n != 0");
    if (a0.det() != 1 || f(a0 * Vec2i{1, 0}) != f(1, 0) || f(a0 * Vec2i{0, 1}) != f(0, 1)
        || f(a0 * Vec2i{1, 1}) != f(1, 1))
        throw ValidationError("matrix " + to_string(a0) + " is not an automorph of " + to_string(f));
    RepFrame fr = rep_frame(f, a0);
    /* slightly enlarged fundamental strip 1 <= p < lambda; duplicates
     * across the overlap are removed exactly below */
    long double const eps = 1e-6L;
    auto sols = window_solutions(f, n, fr, 1 - eps, fr.lam * (1 + eps), max_candidates);
    std::set<Vec2i> in(sols.begin(), sols.end());
    Mat2i const inv = a0.inverse();
    std::vector<Vec2i> reps;
    for (auto const & v : sols)
        if (!in.count(inv * v))
            reps.push_back(v);
    return reps;
}

i64 rep_count_bruteforce(QuadraticForm const & f, i64 n, Mat2i const & a0, i64 max_candidates)
{
    return i64(rep_orbit_representatives(f, n, a0, max_candidates).size());
}

i64 rep_count_formula(i64 d, i64 n)
{
    require_valid_discriminant(d);
    if (n <= 0)
        throw PreconditionError("divisor-sum formula needs n > 0");
    if (gcd(n, d) != 1)
        throw PreconditionError("divisor-sum formula needs gcd(n, d) = 1 (n=" + std::to_string(n)
                                + ", d=" + std::to_string(d) + "); use the brute-force count");
    i64 total = 0;
    for (i64 k = 1; k * k <= n; ++k) {
        if (n % k)
            continue;
        total += kronecker(d, k);
        if (k != n / k)
            total += kronecker(d, n / k);
    }
    return total;
}

} // namespace solspec
