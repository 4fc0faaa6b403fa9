#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <shared_mutex>
#include <tuple>
#include <vector>

namespace solspec {

/* -f'' + nu_abs cosh(2 mu z) f = Lambda f on the real line */
struct MathieuProblem {
    double nu_abs = 0;
    double mu = 0;
    void validate() const;
    double potential(double z) const;
};

enum class Parity { Even, Odd };
char const * to_string(Parity p);

/* uniform grid z_i = -Z + i h, i = 0..intervals */
struct MathieuGrid {
    double half_width = 0;
    int intervals = 0;
    double spacing = 0;
    double z(int i) const { return -half_width + i * spacing; }
};

struct MathieuOptions {
    bool eigenvectors = true;
    int max_intervals = 1 << 22;
};

struct MathieuSolution {
    MathieuProblem problem;
    double tol = 0;
    std::vector<double> levels;          // Richardson-extrapolated, ascending
    std::vector<double> error_estimates; // |R(h) - R(h/2)|
    std::vector<Parity> parities;
    MathieuGrid grid;                     // grid of the stored eigenvectors
    std::vector<std::vector<double>> eigenvectors; // intervals+1 samples, int f^2 = 1
    int grids_used = 0;
};

/* the kmax lowest levels, each certified to relative accuracy tol */
MathieuSolution solve(MathieuProblem const & p, int kmax, double tol, MathieuOptions const & opt = {});

/* every level <= energy, plus at least one level above it */
MathieuSolution solve_below(MathieuProblem const & p, double energy, double tol,
                            MathieuOptions const & opt = {});

/* cubic interpolation on the stored grid, zero outside [-Z, Z] */
double eigenfunction(MathieuSolution const & s, int k, double z);

/* (mu pi k)^2 / (ln nu)^2, indexed like the paper: k = 1 is the ground
 * level (solver index 0) */
double small_nu_model(int k, double nu_abs, double mu);

/* smallest Z with nu cosh(2 mu Z) >= 10 Lambda whose tunnelling integral
 * int sqrt(V - Lambda) from the turning point reaches kWkbDecay */
constexpr double kWkbDecay = 30.0;
double domain_half_width(MathieuProblem const & p, double top_level);

/* raw second-order finite-difference levels on a fixed grid */
std::vector<double> fd_levels(MathieuProblem const & p, int kmax, double half_width, int intervals);
int fd_count_below(MathieuProblem const & p, double energy, double half_width, int intervals);

/* Solutions keyed by (nu_abs, mu, kmax, tol, eigenvectors). Lookups take
 * a shared lock; an insert racing with another worker simply overwrites
 * an identical value. */
class MathieuCache {
  public:
    std::shared_ptr<MathieuSolution const> get(MathieuProblem const & p, int kmax, double tol,
                                               MathieuOptions const & opt = {});
    std::shared_ptr<MathieuSolution const> get_below(MathieuProblem const & p, double energy, double tol,
                                                     MathieuOptions const & opt = {});
    std::size_t size() const;
    std::size_t hits() const;
  private:
    using Key = std::tuple<double, double, int, double, bool>;
    std::shared_ptr<MathieuSolution const> lookup(Key const & k) const;
    void store(Key const & k, std::shared_ptr<MathieuSolution const> v);
    mutable std::shared_mutex mutex_;
    std::map<Key, std::shared_ptr<MathieuSolution const>> map_;
    mutable std::atomic<std::size_t> hits_{0};
};

} // namespace solspec
