#include "solspec/errors.hpp"
#include "solspec/intmath.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>

using namespace solspec;

TEST(IntMath, IsqrtAroundSquares)
{
    for (i128 r : {i128(0), i128(1), i128(7), i128(3037000499LL), i128(1) << 60, (i128(1) << 62) + 12345}) {
        EXPECT_TRUE(isqrt(r * r) == r);
        if (r > 0) {
            EXPECT_TRUE(isqrt(r * r - 1) == r - 1);
            EXPECT_FALSE(is_square(r * r + 1) && r > 0);
        }
        EXPECT_TRUE(isqrt(r * r + 2 * r) == r);
    }
    EXPECT_TRUE(is_square(0));
    EXPECT_FALSE(is_square(-4));
}

TEST(IntMath, FloorDivAndMod)
{
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long long> u(-1000, 1000);
    for (int i = 0; i < 2000; ++i) {
        long long a = u(rng), b = u(rng);
        if (b == 0)
            continue;
        long long q = (long long)floor_div(a, b);
        EXPECT_EQ(q, (long long)std::floor(double(a) / double(b)));
        long long m = (long long)pos_mod(a, b);
        EXPECT_GE(m, 0);
        EXPECT_LT(m, std::llabs(b));
        EXPECT_EQ((a - m) % b, 0);
    }
}

TEST(IntMath, CheckedArithmeticThrows)
{
    i128 big = i128(1) << 100;
    EXPECT_THROW(checked_mul(big, big), ResourceError);
    EXPECT_THROW(checked_mul64(i64(1) << 40, i64(1) << 40), ResourceError);
    EXPECT_THROW(narrow(big), ResourceError);
    EXPECT_TRUE(checked_mul(i128(-3), i128(5)) == -15);
}

TEST(IntMath, GcdNonNegative)
{
    EXPECT_EQ(gcd(-12, 18), 6);
    EXPECT_EQ(gcd(0, -7), 7);
    EXPECT_EQ(gcd(0, 0), 0);
}

TEST(Mat2i, PowerAndInverse)
{
    Mat2i cat{2, 1, 1, 1};
    EXPECT_EQ(cat.pow(2), (Mat2i{5, 3, 3, 2}));
    EXPECT_EQ(cat.pow(-1), (Mat2i{1, -1, -1, 2}));
    EXPECT_EQ(cat.pow(3) * cat.pow(-3), Mat2i::identity());
    EXPECT_EQ(to_string(cat), "[[2,1],[1,1]]");
    EXPECT_EQ((cat * Vec2i{1, 0}), (Vec2i{2, 1}));
}

TEST(IntMath, ToString128)
{
    i128 x = i128(12448646853698LL) * 1000000007LL;
    EXPECT_EQ(to_string(x), "12448646940838527975886");
    EXPECT_EQ(to_string(-x), "-12448646940838527975886");
    EXPECT_EQ(to_string(i128(0)), "0");
}
