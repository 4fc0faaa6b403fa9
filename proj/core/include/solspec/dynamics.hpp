#pragma once

#include "solspec/manifold.hpp"

#include <array>
#include <string>
#include <vector>

namespace solspec {

struct PhasePoint {
    double u = 0, v = 0, z = 0;
    double pu = 0, pv = 0, pz = 0;
};

/* H = (E e^{2 mu z} pu^2 + 2 F pu pv + G e^{-2 mu z} pv^2)/2 + pz^2/2 */
double hamiltonian(PhasePoint const & x, Geometry const & g);

/* (lambda u, v/lambda, z + 1, pu/lambda, lambda pv, pz) */
PhasePoint deck_transform(PhasePoint const & x, Geometry const & g);

struct Invariants {
    double Q = 0;
    double alpha = 0;
    double f1 = 0, f2 = 0;
    bool alpha_defined = false;
};
Invariants invariants(PhasePoint const & x, Geometry const & g);

/* sqrt|Q| exp(-1/Q^2), extended by 0 at Q = 0 */
double radius_function(double Q);

struct BifurcationRadii {
    double r_plus = 0, r_minus = 0;
    double q_plus = 0, q_minus = 0;
};
BifurcationRadii bifurcation_radii(Geometry const & g);

/* the four degenerate families at parameter alpha on the level H = 1;
 * families 0,1 have Q = Q+*, families 2,3 have Q = Q-* */
std::array<PhasePoint, 4> critical_family_points(Geometry const & g, double alpha);

struct TrajectorySample {
    double t = 0;
    PhasePoint x;
    double H = 0, Q = 0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double max_energy_drift = 0; // relative to |H0| (absolute when H0 = 0)
    double max_q_drift = 0;
    double z_min = 0, z_max = 0; // interpolated extrema
    bool drift_warning = false;  // drift above kDriftWarning
};
constexpr double kDriftWarning = 1e-6;

/* classical RK4 with step h */
Trajectory integrate(PhasePoint const & x0, Geometry const & g, double duration, double h,
                     int sample_every = 100);

struct TurningPoints {
    double z_minus = 0, z_plus = 0;
};
TurningPoints turning_points(double pu, double pv, double energy, Geometry const & g);

struct FlowerImage {
    double f1 = 0, f2 = 0;
    bool at_origin = false;
};
/* sqrt|pu pv| (cos 2 pi beta, sin 2 pi beta), beta = ln|pu| / mu */
FlowerImage flower_map(double pu, double pv, double mu);

struct FlowerPoint {
    double F1 = 0, F2 = 0;
    Vec2i gamma;
    i64 qvalue = 0;
    double pu = 0, pv = 0;
};
/* images of the orbit representatives with |Q_{A*}| <= qmax */
std::vector<FlowerPoint> flower(Geometry const & g, i64 qmax);

struct LoopSpec {
    double cx = 0, cy = 0;
    double radius = 0;
    bool counterclockwise = true;
    int family = 1;           // sign of Q of the sheet followed (pu > 0 always)
    double start_angle = 3.141592653589793; // about the loop centre
};

/* Parallel transport of a lattice frame around the loop; returns the
 * integer matrix M with (initial frame) = M (final frame) in dual-lattice
 * coordinates. Around the origin counterclockwise this is A^T. */
Mat2i monodromy_transport(std::vector<FlowerPoint> const & pts, Geometry const & g, LoopSpec const & loop);

std::string trajectory_csv(Trajectory const & t);
std::string flower_csv(std::vector<FlowerPoint> const & pts);
std::string flower_svg(std::vector<FlowerPoint> const & pts);
std::string bifurcation_svg(Geometry const & g, std::vector<Invariants> const & samples = {});

} // namespace solspec
