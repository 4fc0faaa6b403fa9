#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace solspec {

using i64 = std::int64_t;
using i128 = __int128;

/* Checked 128-bit arithmetic. Pell solutions grow like exp(sqrt(d)), so
 * every form computation goes through these; overflow throws
 * ResourceError instead of wrapping. */
i128 checked_add(i128 a, i128 b);
i128 checked_sub(i128 a, i128 b);
i128 checked_mul(i128 a, i128 b);
i64 checked_mul64(i64 a, i64 b);
i64 checked_add64(i64 a, i64 b);
i64 narrow(i128 x);

i128 isqrt(i128 n);            // floor(sqrt(n)), n >= 0
bool is_square(i128 n);
i128 floor_div(i128 a, i128 b); // b != 0
i128 pos_mod(i128 a, i128 b);   // result in [0, |b|)
i64 gcd(i64 a, i64 b);          // non-negative
std::string to_string(i128 x);

struct Vec2i {
    i64 x = 0;
    i64 y = 0;
    bool operator==(Vec2i const &) const = default;
    auto operator<=>(Vec2i const &) const = default;
    Vec2i operator-() const { return {-x, -y}; }
    bool is_zero() const { return x == 0 && y == 0; }
};

/* 2x2 integer matrix acting on column vectors */
struct Mat2i {
    i64 a11 = 1, a12 = 0, a21 = 0, a22 = 1;

    bool operator==(Mat2i const &) const = default;
    static Mat2i identity() { return {1, 0, 0, 1}; }
    i128 det() const { return i128(a11) * a22 - i128(a12) * a21; }
    i128 trace() const { return i128(a11) + a22; }
    Mat2i transpose() const { return {a11, a21, a12, a22}; }
    Mat2i operator-() const { return {-a11, -a12, -a21, -a22}; }
    Mat2i operator*(Mat2i const & o) const;
    Vec2i operator*(Vec2i const & v) const;
    Mat2i inverse() const; // det must be +-1
    Mat2i pow(int n) const; // negative n uses the inverse
};

std::ostream & operator<<(std::ostream & o, Mat2i const & m);
std::ostream & operator<<(std::ostream & o, Vec2i const & v);
std::string to_string(Mat2i const & m); // [[a11,a12],[a21,a22]]

} // namespace solspec
