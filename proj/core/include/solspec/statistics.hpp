#pragma once

#include "solspec/manifold.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace solspec {

enum class SymmetryMode { OrbitOnly, ExtraInvolution };
std::string to_string(SymmetryMode m);

/* A = r2 r1 with r1^2 = r2^2 = I */
struct Involution {
    Mat2i r1, r2;
};
void validate_involution(Mat2i const & A, Involution const & inv);
/* exhaustive search over entries bounded by max |a_ij|; first hit in a
 * fixed order */
std::optional<Involution> find_involution(Mat2i const & A);

struct ValueSequence {
    std::vector<i64> values; // sorted |Q|
    i64 qmax = 0;
    SymmetryMode mode = SymmetryMode::OrbitOnly;
    i64 boundary_points = 0; // lattice points on the wedge edges (extra-involution)
};

/* Orbit-only: |Q_{A*}| over all strip representatives. Extra-involution:
 * the points of the wedge in one (p, q) quadrant bounded by the fixed line
 * of r1^T and the next fixed line of the reflection family (A^T)^k r1^T;
 * both edges kept. */
ValueSequence value_sequence(Geometry const & g, i64 qmax, SymmetryMode mode,
                             std::optional<Involution> const & inv = std::nullopt);

/* number of points of the same (p, q) quadrant as the wedge among the
 * strip representatives; the wedge count is half of this up to edges */
i64 quadrant_count(Geometry const & g, i64 qmax, Involution const & inv);

std::map<i64, i64> spacing_histogram(ValueSequence const & vs, bool drop_degenerate);
double zero_spacing_fraction(ValueSequence const & vs);

struct GrowthPoint {
    i64 K = 0;
    i64 count = 0;
    double normalized = 0; // count sqrt(ln K) / K
};
std::vector<GrowthPoint> represented_growth(ValueSequence const & vs, std::vector<i64> const & checkpoints);

std::string histogram_csv(std::map<i64, i64> const & h);
std::string growth_csv(std::vector<GrowthPoint> const & g);
std::string histogram_svg(std::map<i64, i64> const & h, std::string const & title);

} // namespace solspec
