#pragma once

#include "solspec/manifold.hpp"
#include "solspec/mathieu.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace solspec {

enum class LineSource { Trivial, Orbit };

struct SpectralLine {
    double energy = 0;
    long long multiplicity = 1;
    LineSource source = LineSource::Trivial;
    int index = 0; // k for trivial lines, Mathieu level l for orbit lines
    Vec2i gamma;
    i64 qvalue = 0;
    double nu = 0;
    double alpha = 0;
};

struct SpectrumTable {
    std::vector<SpectralLine> lines; // ascending energy
    double energy_cut = 0;
    double tol = 0;
    i64 qmax = 0; // orbits enumerated up to this |Q|
    int lmax = 0; // highest Mathieu level used
    std::string geometry_hash;
    std::size_t mathieu_solves = 0;
};

struct AssembleOptions {
    int threads = 1;
    MathieuCache * cache = nullptr;
};

/* every line with energy <= energy_cut; each Mathieu level certified to
 * relative accuracy tol */
SpectrumTable assemble(Geometry const & g, double energy_cut, double tol,
                       AssembleOptions const & opt = {});

/* largest |Q| for which Lambda_0(|nu|) - |nu cos theta| <= energy_cut */
i64 completeness_qmax(Geometry const & g, double energy_cut);

struct MultiplicityPrediction {
    long long m = 0;
    int r = 0;
    i64 l = 1;        // content of Q_{A*}
    int sign = 1;     // Q_{A*} = sign * l * form
    QuadraticForm form;
    i64 n = 0;        // form(gamma)
    i64 count = 0;    // orbits of form = n, by enumeration
    std::optional<i64> formula; // divisor sum, when it applies
    i64 class_number = 0;
};
MultiplicityPrediction predicted_multiplicity(GluingMap const & A, Vec2i gamma);
/* the same for a value n of the primitive form */
MultiplicityPrediction predicted_multiplicity_at(GluingMap const & A, i64 n);

enum class MergeKind { Single, Predicted, SignPair, Accidental };
char const * to_string(MergeKind k);

struct SpectralGroup {
    double energy = 0;
    long long multiplicity = 0;
    MergeKind kind = MergeKind::Single;
    std::vector<std::size_t> members; // indices into the table
    LineSource source = LineSource::Trivial;
    int index = 0;
    i64 qvalue = 0;
    long long predicted = 0; // 2 r N for orbit groups, 0 otherwise
    bool matches_prediction = false;
};

struct GroupedSpectrum {
    std::vector<SpectralGroup> groups;
    double grouping_tol = 0;
    std::size_t predicted_merges = 0;
    std::size_t sign_pair_merges = 0;
    std::size_t accidental_merges = 0;
    bool non_generic = false; // cos theta ~ 0
};

constexpr double kDefaultGroupingTol = 1e-9;

/* chains lines whose gaps are within tol * max(1, E); predictions are
 * evaluated for orbit groups when A is given */
GroupedSpectrum group_degenerate(SpectrumTable const & t, double grouping_tol,
                                 GluingMap const * A = nullptr, Geometry const * g = nullptr);

/* Phi(x, y, z) = sum_n exp(2 pi i <A*^n gamma, (x, y)>) f_l(z + alpha + n),
 * keeping the terms whose Mathieu factor can exceed trunc_tol */
class EigenfunctionField {
  public:
    EigenfunctionField(Geometry const & g, Vec2i gamma, int level, double trunc_tol,
                       double tol = 1e-9);
    std::complex<double> operator()(double x, double y, double z) const;
    double truncation_radius() const { return zt_; }
    MathieuSolution const & solution() const { return sol_; }
    NuAlpha nu_alpha() const { return na_; }
  private:
    Geometry g_;
    Vec2i gamma_;
    int level_;
    NuAlpha na_;
    MathieuSolution sol_;
    double zt_ = 0;
};

struct FieldGridSpec {
    double x = 0;
    double y0 = 0, y1 = 1;
    int ny = 64;
    double z0 = -1, z1 = 1;
    int nz = 64;
};

struct FieldSample {
    double x, y, z;
    std::complex<double> value;
};

std::vector<FieldSample> eigenfunction_field(Geometry const & g, Vec2i gamma, int level,
                                             FieldGridSpec const & spec, double trunc_tol);

/* gamma = 0 family: cos 2 pi k z or sin 2 pi k z */
double trivial_eigenfunction(int k, bool sine, double z);

std::string spectrum_csv(SpectrumTable const & t);
std::string spectrum_json(SpectrumTable const & t);
std::string groups_csv(GroupedSpectrum const & gs);

} // namespace solspec
