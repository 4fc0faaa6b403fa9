#include "solspec/intmath.hpp"
#include "solspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace solspec {

i128 checked_add(i128 a, i128 b)
{
    i128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw ResourceError("128-bit integer overflow in addition");
    return r;
}

i128 checked_sub(i128 a, i128 b)
{
    i128 r;
    if (__builtin_sub_overflow(a, b, &r))
        throw ResourceError("128-bit integer overflow in subtraction");
    return r;
}

i128 checked_mul(i128 a, i128 b)
{
    i128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw ResourceError("128-bit integer overflow in multiplication");
    return r;
}

i64 checked_mul64(i64 a, i64 b)
{
    i64 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw ResourceError("64-bit integer overflow in multiplication");
    return r;
}

i64 checked_add64(i64 a, i64 b)
{
    i64 r;
    if (__builtin_add_overflow(a, b, &r))
        throw ResourceError("64-bit integer overflow in addition");
    return r;
}

i64 narrow(i128 x)
{
    if (x > INT64_MAX || x < INT64_MIN)
        throw ResourceError("value " + to_string(x) + " does not fit in 64 bits");
    return static_cast<i64>(x);
}

i128 isqrt(i128 n)
{
    if (n < 0)
        throw DomainError("isqrt of a negative number");
    if (n < 2)
        return n;
    /* floating guess, then exact Newton/adjust steps */
    i128 r = static_cast<i128>(std::sqrt(static_cast<long double>(n)));
    for (;;) {
        i128 nr = (r + n / r) / 2;
        if (nr >= r - 1 && nr <= r + 1) {
            r = nr;
            break;
        }
        r = nr;
    }
    while (r > 0 && r > n / r)
        --r;
    while ((r + 1) <= n / (r + 1))
        ++r;
    return r;
}

bool is_square(i128 n)
{
    if (n < 0)
        return false;
    i128 r = isqrt(n);
    return r * r == n;
}

i128 floor_div(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

i128 pos_mod(i128 a, i128 b)
{
    if (b < 0)
        b = -b;
    i128 r = a % b;
    return r < 0 ? r + b : r;
}

i64 gcd(i64 a, i64 b)
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string to_string(i128 x)
{
    if (x == 0)
        return "0";
    bool neg = x < 0;
    /* careful with the most negative value */
    unsigned __int128 u = neg ? (unsigned __int128)(-(x + 1)) + 1 : (unsigned __int128)x;
    std::string s;
    while (u) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg)
        s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

Mat2i Mat2i::operator*(Mat2i const & o) const
{
    auto dot = [](i64 a, i64 b, i64 c, i64 d) {
        return narrow(checked_add(checked_mul(a, b), checked_mul(c, d)));
    };
    return {dot(a11, o.a11, a12, o.a21), dot(a11, o.a12, a12, o.a22),
            dot(a21, o.a11, a22, o.a21), dot(a21, o.a12, a22, o.a22)};
}

Vec2i Mat2i::operator*(Vec2i const & v) const
{
    return {narrow(checked_add(checked_mul(a11, v.x), checked_mul(a12, v.y))),
            narrow(checked_add(checked_mul(a21, v.x), checked_mul(a22, v.y)))};
}

Mat2i Mat2i::inverse() const
{
    i128 d = det();
    if (d == 1)
        return {a22, -a12, -a21, a11};
    if (d == -1)
        return {-a22, a12, a21, -a11};
    throw DomainError("integer inverse requires determinant +-1");
}

Mat2i Mat2i::pow(int n) const
{
    Mat2i base = n < 0 ? inverse() : *this;
    unsigned e = n < 0 ? unsigned(-n) : unsigned(n);
    Mat2i r = identity();
    while (e) {
        if (e & 1)
            r = r * base;
        e >>= 1;
        if (e)
            base = base * base;
    }
    return r;
}

std::string to_string(Mat2i const & m)
{
    std::ostringstream os;
    os << m;
    return os.str();
}

std::ostream & operator<<(std::ostream & o, Mat2i const & m)
{
    return o << "[[" << m.a11 << "," << m.a12 << "],[" << m.a21 << "," << m.a22 << "]]";
}

std::ostream & operator<<(std::ostream & o, Vec2i const & v)
{
    return o << "(" << v.x << "," << v.y << ")";
}

} // namespace solspec
