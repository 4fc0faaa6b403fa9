#include "selftest.hpp"

#include "solspec/dynamics.hpp"
#include "solspec/errors.hpp"
#include "solspec/io.hpp"
#include "solspec/qforms.hpp"
#include "solspec/semiclassics.hpp"
#include "solspec/spectrum.hpp"
#include "solspec/statistics.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>

namespace solspec::cli {

namespace {

double const kPi = std::numbers::pi;

class Suite {
  public:
    Suite(std::string module, std::ostream & out)
        : module_(std::move(module)), out_(out)
    {}
    void check(std::string const & name, std::function<std::string()> const & body)
    {
        ++run_;
        std::string detail;
        try {
            detail = body();
        } catch (std::exception const & e) {
            detail = std::string("threw: ") + e.what();
        }
        bool ok = detail.rfind("ok", 0) == 0;
        failed_ += !ok;
        out_ << "selftest " << module_ << " " << name << ": " << (ok ? "pass" : "FAIL") << " (" << detail << ")\n";
    }
    bool finish()
    {
        out_ << "selftest " << module_ << ": " << run_ - failed_ << "/" << run_ << " passed\n";
        return failed_ == 0;
    }
  private:
    std::string module_;
    std::ostream & out_;
    int run_ = 0, failed_ = 0;
};

std::string verdict(bool ok, std::string const & detail)
{
    return (ok ? "ok: " : "bad: ") + detail;
}

void forms_suite(Suite & s, Geometry const & g)
{
    s.check("pell", [] {
        int n = 0;
        for (i64 d = 5; d <= 300; ++d) {
            if (!is_valid_discriminant(d))
                continue;
            auto p = pell_fundamental(d);
            if (p.X0 * p.X0 - i128(d) * p.Y0 * p.Y0 != 4)
                return verdict(false, "d=" + std::to_string(d) + " not a solution");
            i64 y = 1;
            while (y <= 1'000'000 && !is_square(d * y * y + 4))
                ++y;
            if (y <= 1'000'000 ? p.Y0 != y : p.Y0 <= 1'000'000)
                return verdict(false, "d=" + std::to_string(d));
            ++n;
        }
        return verdict(true, std::to_string(n) + " discriminants");
    });
    s.check("divisor_sum", [] {
        int n = 0;
        QuadraticForm q = principal_form(5);
        Mat2i a0 = automorph_generator(q);
        for (i64 k = 1; k <= 200; ++k) {
            if (gcd(k, 5) != 1)
                continue;
            if (rep_count_formula(5, k) != rep_count_bruteforce(q, k, a0))
                return verdict(false, "n=" + std::to_string(k));
            ++n;
        }
        return verdict(true, std::to_string(n) + " values at d=5");
    });
    s.check("automorph", [&g] {
        PrimitivityIndex pi = primitivity_index(g.A.transpose());
        Mat2i back = pi.a0.pow(pi.exponent);
        if (pi.sign < 0)
            back = -back;
        return verdict(back == g.A.transpose(), "r=" + std::to_string(pi.r));
    });
    s.check("class_number", [&g] {
        i64 d = narrow(primitive_part(g.dual_form).form.discriminant());
        i64 h = class_number(d);
        std::size_t forms = 0;
        for (auto const & c : reduction_cycles(d))
            forms += c.size();
        return verdict(h >= 1 && forms == reduced_forms(d).size(), "h=" + std::to_string(h));
    });
}

void spectrum_suite(Suite & s, Geometry const & g)
{
    SpectrumTable t = assemble(g, 600, 1e-9);
    s.check("ordered", [&t] {
        for (std::size_t i = 1; i < t.lines.size(); ++i)
            if (t.lines[i].energy < t.lines[i - 1].energy)
                return verdict(false, "line " + std::to_string(i));
        return verdict(true, std::to_string(t.lines.size()) + " lines");
    });
    s.check("trivial_lines", [&t] {
        int k = 0;
        for (auto const & l : t.lines)
            if (l.source == LineSource::Trivial) {
                if (std::fabs(l.energy - 4 * kPi * kPi * l.index * l.index) > 1e-9 * std::max(1.0, l.energy)
                    || l.multiplicity != (l.index == 0 ? 1 : 2))
                    return verdict(false, "k=" + std::to_string(l.index));
                ++k;
            }
        return verdict(k == int(std::floor(std::sqrt(600.0) / (2 * kPi))) + 1, std::to_string(k) + " trivial lines");
    });
    s.check("multiplicities", [&t, &g] {
        GluingMap A(g.A);
        GroupedSpectrum gs = group_degenerate(t, kDefaultGroupingTol, &A, &g);
        std::size_t bad = 0;
        for (auto const & gr : gs.groups)
            if (gr.source == LineSource::Orbit && (gr.kind == MergeKind::Accidental || !gr.matches_prediction))
                ++bad;
        return verdict(bad == 0, std::to_string(gs.groups.size()) + " groups, " + std::to_string(bad)
                                     + " unexplained" + (gs.non_generic ? ", non-generic metric" : ""));
    });
}

void weyl_suite(Suite & s, Geometry const & g)
{
    s.check("f_integral", [] {
        double e = std::fabs(f_integral() - 2 * kPi / 3);
        return verdict(e < 1e-8, "error " + fmt12(e));
    });
    s.check("x_pm", [] {
        double worst = 0;
        for (int i = 1; i < 20; ++i) {
            double th = kPi * i / 20;
            auto x = x_pm(th);
            worst = std::max(worst, std::fabs(std::sin(th) * (x.plus + x.minus) - 4 * kPi / 3));
        }
        return verdict(worst < 1e-12, "worst " + fmt12(worst));
    });
    s.check("action_count", [] {
        for (double E : {50.0, 200.0}) {
            auto sol = solve_below({1.0, 1.0}, E, 1e-10);
            long long n = std::count_if(sol.levels.begin(), sol.levels.end(), [E](double l) { return l <= E; });
            double I = action({E, 1.0, 1.0});
            if (std::fabs(double(n) - I) > 1)
                return verdict(false, "Lambda=" + fmt12(E) + " count " + std::to_string(n) + " I=" + fmt12(I));
        }
        return verdict(true, "counts within 1 of I");
    });
    s.check("weyl_500", [&g] {
        SpectrumTable t = assemble(g, 500, 1e-8);
        auto w = weyl_curve(t, {500}, g.area);
        return verdict(std::fabs(w[0].ratio - 1) < 0.15, "ratio " + fmt12(w[0].ratio));
    });
}

void spacing_suite(Suite & s, Geometry const & g)
{
    ValueSequence vs = value_sequence(g, 2500, SymmetryMode::OrbitOnly);
    s.check("orbit_count", [&] {
        double r = double(vs.values.size()) / 2500, e = 4 * g.mu / g.sqrtD;
        return verdict(std::fabs(r / e - 1) < 0.2, "ratio " + fmt12(r) + " vs " + fmt12(e));
    });
    s.check("histogram", [&] {
        auto h = spacing_histogram(vs, false);
        auto hd = spacing_histogram(vs, true);
        long long n = 0;
        for (auto const & kv : h)
            n += kv.second;
        return verdict(n + 1 == (long long)vs.values.size() && !hd.count(0), std::to_string(n) + " spacings");
    });
    s.check("growth", [&] {
        auto gr = represented_growth(vs, {100, 1000, 2500});
        bool ok = gr[0].count <= gr[1].count && gr[1].count <= gr[2].count;
        return verdict(ok, "counts " + std::to_string(gr[0].count) + "," + std::to_string(gr[1].count) + ","
                               + std::to_string(gr[2].count));
    });
    s.check("involution", [&] {
        auto inv = find_involution(g.A);
        if (!inv)
            return verdict(true, "A has no involution factorization");
        ValueSequence w = value_sequence(g, 2500, SymmetryMode::ExtraInvolution, inv);
        i64 quad = quadrant_count(g, 2500, *inv);
        i64 diff = std::llabs(2 * i64(w.values.size()) - quad);
        return verdict(diff <= w.boundary_points, "2*" + std::to_string(w.values.size()) + " vs "
                                                     + std::to_string(quad) + ", edges "
                                                     + std::to_string(w.boundary_points));
    });
}

void flower_suite(Suite & s, Geometry const & g)
{
    s.check("jacobian", [&g] {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.2, 5);
        double worst = 0;
        for (int i = 0; i < 50; ++i) {
            double pu = u(rng), pv = u(rng), h = 1e-5 * pu, k = 1e-5 * pv;
            auto f = [&](double a, double b) { return flower_map(a, b, g.mu); };
            auto a = f(pu + h, pv), b = f(pu - h, pv), c = f(pu, pv + k), d = f(pu, pv - k);
            double j = ((a.f1 - b.f1) / (2 * h)) * ((c.f2 - d.f2) / (2 * k))
                       - ((a.f2 - b.f2) / (2 * h)) * ((c.f1 - d.f1) / (2 * k));
            worst = std::max(worst, std::fabs(std::fabs(j) / (kPi / g.mu) - 1));
        }
        return verdict(worst < 1e-6, "worst relative " + fmt12(worst));
    });
    s.check("transport", [&g] {
        auto pts = flower(g, 3600);
        LoopSpec loop;
        loop.radius = 0.55 * std::sqrt(3600 / g.sqrtD);
        Mat2i M = monodromy_transport(pts, g, loop);
        return verdict(M.det() == 1 && M.trace() == g.A.trace(), to_string(M));
    });
}

void geodesic_suite(Suite & s, Geometry const & g)
{
    PhasePoint x{0.1, -0.2, 0.3, 0.6, 0.4, 0.5};
    double sc = 1 / std::sqrt(hamiltonian(x, g));
    x.pu *= sc;
    x.pv *= sc;
    x.pz *= sc;
    s.check("drift", [&] {
        Trajectory t = integrate(x, g, 20, 1e-3);
        return verdict(t.max_energy_drift < 1e-8 && t.max_q_drift == 0, "H drift " + fmt12(t.max_energy_drift));
    });
    s.check("caustics", [&] {
        Trajectory t = integrate(x, g, 20, 1e-3);
        TurningPoints tp = turning_points(x.pu, x.pv, 1.0, g);
        double e = std::max(std::fabs(tp.z_minus - t.z_min), std::fabs(tp.z_plus - t.z_max));
        return verdict(e < 1e-6, "mismatch " + fmt12(e));
    });
    s.check("deck", [&] {
        PhasePoint y = deck_transform(x, g);
        Invariants a = invariants(x, g), b = invariants(y, g);
        double e = std::max({std::fabs(hamiltonian(y, g) - 1), std::fabs(a.f1 - b.f1), std::fabs(a.f2 - b.f2),
                             std::fabs(a.alpha - b.alpha - 1)});
        return verdict(e < 1e-12, "residual " + fmt12(e));
    });
    s.check("critical_families", [&] {
        BifurcationRadii b = bifurcation_radii(g);
        double e = 0;
        for (double al : {-0.3, 0.0, 0.45}) {
            auto pts = critical_family_points(g, al);
            for (int i = 0; i < 4; ++i) {
                Invariants v = invariants(pts[std::size_t(i)], g);
                double r = std::hypot(v.f1, v.f2);
                e = std::max({e, std::fabs(r - (i < 2 ? b.r_plus : b.r_minus)), std::fabs(hamiltonian(pts[std::size_t(i)], g) - 1)});
            }
        }
        return verdict(e < 1e-10, "residual " + fmt12(e));
    });
}

void field_suite(Suite & s, Geometry const & g)
{
    s.check("gluing", [&g] {
        double const tt = 1e-8;
        EigenfunctionField phi(g, {1, 0}, 0, tt);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-3, 3);
        double worst = 0;
        for (int i = 0; i < 20; ++i) {
            double x = u(rng), y = u(rng), z = u(rng) / 3;
            double ax = double(g.A.a11) * x + double(g.A.a12) * y, ay = double(g.A.a21) * x + double(g.A.a22) * y;
            worst = std::max(worst, std::abs(phi(ax, ay, z + 1) - phi(x, y, z)));
        }
        return verdict(worst < 10 * tt, "residual " + fmt12(worst));
    });
}

} // namespace

bool run_selftest(std::string const & module, Geometry const & g, std::ostream & out)
{
    Suite s(module, out);
    if (module == "forms")
        forms_suite(s, g);
    else if (module == "spectrum")
        spectrum_suite(s, g);
    else if (module == "weyl")
        weyl_suite(s, g);
    else if (module == "spacing")
        spacing_suite(s, g);
    else if (module == "flower")
        flower_suite(s, g);
    else if (module == "geodesic")
        geodesic_suite(s, g);
    else if (module == "field")
        field_suite(s, g);
    else
        throw ValidationError("no self-test for " + module);
    return s.finish();
}

} // namespace solspec::cli
