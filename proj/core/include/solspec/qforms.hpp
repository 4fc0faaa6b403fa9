#pragma once

#include "solspec/intmath.hpp"

#include <vector>

namespace solspec {

/* a x^2 + b x y + c y^2 */
struct QuadraticForm {
    i64 a = 0, b = 0, c = 0;

    bool operator==(QuadraticForm const &) const = default;
    i128 discriminant() const;
    i128 operator()(i64 x, i64 y) const;
    i128 operator()(Vec2i v) const { return (*this)(v.x, v.y); }
    i64 content() const { return gcd(gcd(a, b), c); }
    bool is_primitive() const { return content() == 1; }
    QuadraticForm operator-() const { return {-a, -b, -c}; }
};

std::string to_string(QuadraticForm const & q); // (a,b,c)

/* d > 0, not a square, d = 0,1 mod 4 */
bool is_valid_discriminant(i64 d);
void require_valid_discriminant(i64 d);
void require_valid_form(QuadraticForm const & q);

/* det A = 1 and |tr A| > 2; throws ValidationError otherwise */
void require_hyperbolic(Mat2i const & A);

/* Q_A(v) = det[A v | v] = -a21 x^2 + (a11 - a22) x y + a12 y^2 */
QuadraticForm form_from_matrix(Mat2i const & A);

int kronecker(i64 d, i64 k);

struct PellSolution {
    i128 X0 = 0, Y0 = 0;
    i64 d = 0;
};

/* fundamental solution of X^2 - d Y^2 = 4 from the continued fraction
 * of (P0 + sqrt d)/2 */
PellSolution pell_fundamental(i64 d);

/* A0 = [[(X0 - b Y0)/2, -c Y0], [a Y0, (X0 + b Y0)/2]] */
Mat2i automorph_generator(QuadraticForm const & q);

/* q = sign * l * form, form primitive with first nonzero coefficient > 0 */
struct PrimitivePart {
    QuadraticForm form;
    i64 l = 1;
    int sign = 1;
};
PrimitivePart primitive_part(QuadraticForm const & q);

/* A = sign * a0^exponent with |exponent| = r. a0 is the generator of the
 * primitive part of Q_A; exponent < 0 when the sign convention of the
 * primitive form makes A a power of a0^-1. */
struct PrimitivityIndex {
    int r = 0;
    Mat2i a0;
    int sign = 1;
    int exponent = 0;
};
PrimitivityIndex primitivity_index(Mat2i const & A);

/* reduced forms (0 < b < sqrt d, sqrt d - b < 2|a| < sqrt d + b),
 * primitive only, sorted */
std::vector<QuadraticForm> reduced_forms(i64 d);
/* one rho step (a,b,c) -> (c, b', (b'^2 - d)/4c) */
QuadraticForm rho(QuadraticForm const & q);
/* reduced forms partitioned into rho cycles; each cycle starts at its
 * smallest member */
std::vector<std::vector<QuadraticForm>> reduction_cycles(i64 d);
i64 class_number(i64 d);

QuadraticForm principal_form(i64 d);

/* Solutions of q(x,y) = n counted modulo the group generated by a0 and -I.
 * max_candidates bounds the length of the scanned x-range. */
constexpr i64 kRepScanLimit = 50'000'000;
i64 rep_count_bruteforce(QuadraticForm const & q, i64 n, Mat2i const & a0,
                         i64 max_candidates = kRepScanLimit);

/* the same solutions, one representative per orbit, for reporting */
std::vector<Vec2i> rep_orbit_representatives(QuadraticForm const & q, i64 n, Mat2i const & a0,
                                             i64 max_candidates = kRepScanLimit);

/* sum over k | n of kronecker(d, k); requires gcd(n, d) = 1 */
i64 rep_count_formula(i64 d, i64 n);

} // namespace solspec
