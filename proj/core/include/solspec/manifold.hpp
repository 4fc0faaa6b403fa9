#pragma once

#include "solspec/intmath.hpp"
#include "solspec/qforms.hpp"

#include <string>
#include <vector>

namespace solspec {

struct Vec2d {
    double x = 0, y = 0;
};

inline double dot(Vec2d a, Vec2d b) { return a.x * b.x + a.y * b.y; }
inline double wedge(Vec2d a, Vec2d b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2i g, Vec2d b) { return double(g.x) * b.x + double(g.y) * b.y; }

/* Hyperbolic unimodular matrix with trace > 2 */
class GluingMap {
  public:
    explicit GluingMap(Mat2i m);
    static GluingMap parse(std::string const & csv); // "a11,a12,a21,a22"
    Mat2i const & matrix() const { return m_; }
    Mat2i dual() const { return m_.transpose(); }
  private:
    Mat2i m_;
};

/* alpha dx^2 + 2 beta dx dy + gamma dy^2 on the fibre at z = 0 */
class FibreMetric {
  public:
    FibreMetric(double alpha, double beta, double gamma);
    static FibreMetric parse(std::string const & csv);
    double alpha() const { return a_; }
    double beta() const { return b_; }
    double gamma() const { return g_; }
  private:
    double a_, b_, g_;
};

struct Geometry {
    Mat2i A;
    double metric_alpha = 0, metric_beta = 0, metric_gamma = 0;
    double lambda = 0, mu = 0;
    i64 D = 0;
    double sqrtD = 0;
    Vec2d e_u, e_v;          // eigenbasis of A, det [e_u e_v] = 1
    Vec2d e_u_star, e_v_star; // rows of [e_u e_v]^-1
    double E = 0, F = 0, G = 0;
    double cos_theta = 0, sin_theta = 0;
    double area = 0; // fibre area
    double c = 0;    // nu = 8 pi^2 c Q
    QuadraticForm dual_form; // Q_{A*}

    double p(Vec2i g) const { return dot(g, e_u); }
    double q(Vec2i g) const { return dot(g, e_v); }
};

Geometry geometry(GluingMap const & A, FibreMetric const & m);

QuadraticForm q_dual(GluingMap const & A);

struct OrbitRep {
    Vec2i gamma;
    i64 qvalue = 0;
    double alpha = 0;
    double nu = 0;
    double p = 0, q = 0;
};

struct NuAlpha {
    double nu = 0;
    double alpha = 0;
};
NuAlpha nu_alpha(Geometry const & g, Vec2i gamma);

/* One representative per A*-orbit of 0 < |Q_{A*}| <= qmax, taken in the
 * strip 1 <= |p| < lambda; ordered by |Q| then gamma. */
constexpr i64 kOrbitCandidateLimit = 400'000'000;
std::vector<OrbitRep> orbit_enumerate(Geometry const & g, i64 qmax,
                                      i64 candidate_limit = kOrbitCandidateLimit);

/* the strip representative of the orbit of gamma */
Vec2i reduce_to_strip(Geometry const & g, Vec2i gamma);
bool in_strip(Geometry const & g, Vec2i gamma);

OrbitRep make_orbit_rep(Geometry const & g, Vec2i gamma);

double curvature(Geometry const & g);

std::string geometry_json(Geometry const & g);
std::string orbits_json(std::vector<OrbitRep> const & reps);
std::string geometry_hash(Geometry const & g);

} // namespace solspec
