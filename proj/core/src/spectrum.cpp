#include "solspec/spectrum.hpp"
#include "solspec/errors.hpp"
#include "solspec/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

namespace solspec {

static double const kPi = std::numbers::pi;

static double nu_of(Geometry const & g, i64 absq)
{
    return 8 * kPi * kPi * g.c * double(absq);
}

/* lowest possible orbit energy at |Q|: Lambda_0(|nu|) - |nu cos theta|,
 * increasing in |Q| because dLambda_0/d|nu| = <cosh> >= 1 */
static double lowest_orbit_energy(Geometry const & g, i64 absq)
{
    double nu = nu_of(g, absq);
    MathieuSolution s = solve({nu, g.mu}, 1, 1e-9, {false});
    return s.levels[0] - nu * std::fabs(g.cos_theta);
}

i64 completeness_qmax(Geometry const & g, double energy_cut)
{
    /* a little slack so borderline orbits are never dropped */
    double const cut = energy_cut * (1 + 1e-6) + 1e-9;
    if (lowest_orbit_energy(g, 1) > cut)
        return 0;
    i64 lo = 1, hi = 2;
    while (lowest_orbit_energy(g, hi) <= cut) {
        lo = hi;
        if (hi > (i64(1) << 40))
            throw ResourceError("energy cut too large for orbit enumeration");
        hi *= 2;
    }
    while (hi - lo > 1) {
        i64 mid = lo + (hi - lo) / 2;
        if (lowest_orbit_energy(g, mid) <= cut)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

static bool line_less(SpectralLine const & a, SpectralLine const & b)
{
    if (a.energy != b.energy)
        return a.energy < b.energy;
    if (a.source != b.source)
        return a.source == LineSource::Trivial;
    if (a.qvalue != b.qvalue)
        return a.qvalue < b.qvalue;
    if (a.gamma != b.gamma)
        return a.gamma < b.gamma;
    return a.index < b.index;
}

SpectrumTable assemble(Geometry const & g, double energy_cut, double tol, AssembleOptions const & opt)
{
    if (!(energy_cut > 0) || !std::isfinite(energy_cut))
        throw ValidationError("energy cut must be positive and finite");
    if (!(tol > 0) || tol > 1e-4)
        throw ValidationError("Mathieu tolerance must lie in (0, 1e-4]");
    SpectrumTable t;
    t.energy_cut = energy_cut;
    t.tol = tol;
    t.geometry_hash = geometry_hash(g);

    for (int k = 0;; ++k) {
        double e = 4 * kPi * kPi * double(k) * double(k);
        if (e > energy_cut)
            break;
        SpectralLine l;
        l.energy = e;
        l.multiplicity = k == 0 ? 1 : 2;
        l.source = LineSource::Trivial;
        l.index = k;
        t.lines.push_back(l);
    }

    t.qmax = completeness_qmax(g, energy_cut);
    if (t.qmax >= 1) {
        auto reps = orbit_enumerate(g, t.qmax);
        /* one Mathieu problem per distinct |Q| */
        std::vector<std::pair<std::size_t, std::size_t>> ranges;
        for (std::size_t i = 0; i < reps.size();) {
            std::size_t j = i;
            i64 aq = std::abs(reps[i].qvalue);
            while (j < reps.size() && std::abs(reps[j].qvalue) == aq)
                ++j;
            ranges.emplace_back(i, j);
            i = j;
        }
        MathieuCache local;
        MathieuCache & cache = opt.cache ? *opt.cache : local;
        std::vector<std::shared_ptr<MathieuSolution const>> sols(ranges.size());
        std::atomic<std::size_t> next{0};
        std::exception_ptr err;
        std::mutex err_mutex;
        auto work = [&]() {
            for (;;) {
                std::size_t r = next.fetch_add(1);
                if (r >= ranges.size())
                    return;
                try {
                    auto [b, e] = ranges[r];
                    double bound = -1e300;
                    for (std::size_t i = b; i < e; ++i)
                        bound = std::max(bound, energy_cut - reps[i].nu * g.cos_theta);
                    double nu = std::fabs(reps[b].nu);
                    if (bound <= nu)
                        continue;
                    sols[r] = cache.get_below({nu, g.mu}, bound, tol, {false});
                } catch (...) {
                    std::lock_guard lock(err_mutex);
                    if (!err)
                        err = std::current_exception();
                    next = ranges.size();
                }
            }
        };
        int nt = std::max(1, opt.threads);
        if (nt == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            for (int i = 0; i < nt; ++i)
                pool.emplace_back(work);
            for (auto & th : pool)
                th.join();
        }
        if (err)
            std::rethrow_exception(err);

        for (std::size_t r = 0; r < ranges.size(); ++r) {
            if (!sols[r])
                continue;
            ++t.mathieu_solves;
            auto const & lv = sols[r]->levels;
            for (std::size_t i = ranges[r].first; i < ranges[r].second; ++i) {
                double shift = reps[i].nu * g.cos_theta;
                for (std::size_t l = 0; l < lv.size(); ++l) {
                    double e = lv[l] + shift;
                    if (e > energy_cut)
                        break;
                    SpectralLine line;
                    line.energy = e;
                    line.multiplicity = 1;
                    line.source = LineSource::Orbit;
                    line.index = int(l);
                    line.gamma = reps[i].gamma;
                    line.qvalue = reps[i].qvalue;
                    line.nu = reps[i].nu;
                    line.alpha = reps[i].alpha;
                    t.lines.push_back(line);
                    t.lmax = std::max(t.lmax, int(l));
                }
            }
        }
    }
    std::sort(t.lines.begin(), t.lines.end(), line_less);
    return t;
}

MultiplicityPrediction predicted_multiplicity_at(GluingMap const & A, i64 n)
{
    Mat2i const At = A.dual();
    PrimitivePart pp = primitive_part(form_from_matrix(At));
    PrimitivityIndex pi = primitivity_index(At);
    MultiplicityPrediction m;
    m.r = pi.r;
    m.l = pp.l;
    m.sign = pp.sign;
    m.form = pp.form;
    m.n = n;
    Mat2i a0 = automorph_generator(pp.form);
    m.count = rep_count_bruteforce(pp.form, m.n, a0);
    i64 d = narrow(pp.form.discriminant());
    m.class_number = class_number(d);
    if (m.n > 0 && m.class_number == 1 && gcd(m.n, d) == 1) {
        m.formula = rep_count_formula(d, m.n);
        if (*m.formula != m.count)
            throw InconsistencyError("divisor-sum and enumerated representation counts disagree at n="
                                     + std::to_string(m.n));
    }
    m.m = 2LL * m.r * m.count;
    return m;
}

MultiplicityPrediction predicted_multiplicity(GluingMap const & A, Vec2i gamma)
{
    if (gamma.is_zero())
        throw DomainError("multiplicity prediction needs gamma != 0");
    QuadraticForm qd = form_from_matrix(A.dual());
    PrimitivePart pp = primitive_part(qd);
    i128 v = qd(gamma);
    i128 scale = i128(pp.sign) * pp.l;
    if (v % scale != 0)
        throw InconsistencyError("Q_{A*}(gamma) is not a multiple of its content");
    return predicted_multiplicity_at(A, narrow(v / scale));
}

char const * to_string(MergeKind k)
{
    switch (k) {
        case MergeKind::Single: return "single";
        case MergeKind::Predicted: return "predicted";
        case MergeKind::SignPair: return "sign_pair";
        case MergeKind::Accidental: return "accidental";
    }
    return "?";
}

GroupedSpectrum group_degenerate(SpectrumTable const & t, double tol, GluingMap const * A,
                                 Geometry const * g)
{
    if (!(tol > 0))
        throw ValidationError("grouping tolerance must be positive");
    GroupedSpectrum out;
    out.grouping_tol = tol;
    out.non_generic = g && std::fabs(g->cos_theta) < 1e-12;
    std::map<i64, long long> predicted_by_q;
    auto predicted = [&](SpectralLine const & l) -> long long {
        auto it = predicted_by_q.find(l.qvalue);
        if (it != predicted_by_q.end())
            return it->second;
        long long m = predicted_multiplicity(*A, l.gamma).m;
        predicted_by_q[l.qvalue] = m;
        return m;
    };

    auto const & L = t.lines;
    for (std::size_t i = 0; i < L.size();) {
        std::size_t j = i + 1;
        while (j < L.size() && L[j].energy - L[j - 1].energy <= tol * std::max(1.0, std::fabs(L[j].energy)))
            ++j;
        SpectralGroup gr;
        gr.energy = L[i].energy;
        gr.source = L[i].source;
        gr.index = L[i].index;
        gr.qvalue = L[i].qvalue;
        bool same_q = true, same_absq = true, orbit_only = true, same_level = true;
        for (std::size_t k = i; k < j; ++k) {
            gr.members.push_back(k);
            gr.multiplicity += L[k].multiplicity;
            orbit_only = orbit_only && L[k].source == LineSource::Orbit;
            same_level = same_level && L[k].index == L[i].index;
            same_q = same_q && L[k].qvalue == L[i].qvalue;
            same_absq = same_absq && std::abs(L[k].qvalue) == std::abs(L[i].qvalue);
        }
        if (j - i == 1)
            gr.kind = MergeKind::Single;
        else if (orbit_only && same_level && same_q)
            gr.kind = MergeKind::Predicted;
        else if (orbit_only && same_level && same_absq)
            gr.kind = MergeKind::SignPair;
        else
            gr.kind = MergeKind::Accidental;

        if (gr.kind == MergeKind::Predicted)
            ++out.predicted_merges;
        else if (gr.kind == MergeKind::SignPair)
            ++out.sign_pair_merges;
        else if (gr.kind == MergeKind::Accidental)
            ++out.accidental_merges;

        if (A && gr.source == LineSource::Orbit && gr.kind != MergeKind::Accidental) {
            if (gr.kind == MergeKind::SignPair) {
                /* one prediction per sign present */
                std::map<i64, long long> per;
                for (std::size_t k = i; k < j; ++k)
                    per[L[k].qvalue] = predicted(L[k]);
                for (auto const & kv : per)
                    gr.predicted += kv.second;
            } else {
                gr.predicted = predicted(L[i]);
            }
            gr.matches_prediction = gr.predicted == gr.multiplicity;
        }
        out.groups.push_back(std::move(gr));
        i = j;
    }
    return out;
}

EigenfunctionField::EigenfunctionField(Geometry const & g, Vec2i gamma, int level, double trunc_tol,
                                       double tol)
    : g_(g), gamma_(gamma), level_(level)
{
    if (gamma.is_zero())
        throw DomainError("use trivial_eigenfunction for gamma = 0");
    if (!(trunc_tol > 0))
        throw ValidationError("truncation tolerance must be positive");
    if (level < 0)
        throw ValidationError("Mathieu level must be >= 0");
    na_ = solspec::nu_alpha(g, gamma);
    sol_ = solve({std::fabs(na_.nu), g.mu}, level + 1, tol, {true});
    auto const & f = sol_.eigenvectors[std::size_t(level)];
    /* outermost sample still above trunc_tol, one spacing of margin */
    int n = sol_.grid.intervals;
    zt_ = 0;
    for (int i = 0; i <= n; ++i) {
        if (std::fabs(f[std::size_t(i)]) >= trunc_tol || std::fabs(f[std::size_t(n - i)]) >= trunc_tol) {
            zt_ = std::fabs(sol_.grid.z(i)) + 2 * sol_.grid.spacing;
            break;
        }
    }
}

std::complex<double> EigenfunctionField::operator()(double x, double y, double z) const
{
    double s = z + na_.alpha;
    i64 nmin = i64(std::ceil(-zt_ - s)), nmax = i64(std::floor(zt_ - s));
    std::complex<double> sum = 0;
    if (nmax < nmin)
        return sum;
    Mat2i const At = g_.A.transpose();
    Vec2i gm = At.pow(int(nmin)) * gamma_;
    for (i64 n = nmin; n <= nmax; ++n) {
        double ph = double(gm.x) * x + double(gm.y) * y;
        ph -= std::floor(ph);
        double f = eigenfunction(sol_, level_, s + double(n));
        sum += std::polar(f, 2 * kPi * ph);
        if (n < nmax)
            gm = At * gm;
    }
    return sum;
}

std::vector<FieldSample> eigenfunction_field(Geometry const & g, Vec2i gamma, int level,
                                             FieldGridSpec const & spec, double trunc_tol)
{
    if (spec.ny < 1 || spec.nz < 1)
        throw ValidationError("field grid needs at least one point per axis");
    EigenfunctionField phi(g, gamma, level, trunc_tol);
    std::vector<FieldSample> out;
    out.reserve(std::size_t(spec.ny) * std::size_t(spec.nz));
    for (int iz = 0; iz < spec.nz; ++iz) {
        double z = spec.nz == 1 ? spec.z0 : spec.z0 + (spec.z1 - spec.z0) * iz / (spec.nz - 1);
        for (int iy = 0; iy < spec.ny; ++iy) {
            double y = spec.ny == 1 ? spec.y0 : spec.y0 + (spec.y1 - spec.y0) * iy / (spec.ny - 1);
            out.push_back({spec.x, y, z, phi(spec.x, y, z)});
        }
    }
    return out;
}

double trivial_eigenfunction(int k, bool sine, double z)
{
    return sine ? std::sin(2 * kPi * k * z) : std::cos(2 * kPi * k * z);
}

std::string spectrum_csv(SpectrumTable const & t)
{
    std::string s = "energy,multiplicity,source_kind,k_or_l,gamma_x,gamma_y,qvalue\n";
    for (auto const & l : t.lines) {
        s += fmt12(l.energy) + "," + std::to_string(l.multiplicity) + ","
             + (l.source == LineSource::Trivial ? "trivial" : "orbit") + "," + std::to_string(l.index)
             + "," + std::to_string(l.gamma.x) + "," + std::to_string(l.gamma.y) + ","
             + std::to_string(l.qvalue) + "\n";
    }
    return s;
}

std::string spectrum_json(SpectrumTable const & t)
{
    /* numbers are rounded to 12 significant digits so the output is
     * byte-stable */
    auto r12 = [](double x) { return std::stod(fmt12(x)); };
    nlohmann::ordered_json j;
    j["geometry_hash"] = t.geometry_hash;
    j["energy_cut"] = r12(t.energy_cut);
    j["tol"] = r12(t.tol);
    j["qmax"] = t.qmax;
    j["lmax"] = t.lmax;
    auto arr = nlohmann::ordered_json::array();
    for (auto const & l : t.lines) {
        nlohmann::ordered_json o;
        o["energy"] = r12(l.energy);
        o["multiplicity"] = l.multiplicity;
        o["source"] = l.source == LineSource::Trivial ? "trivial" : "orbit";
        o["k_or_l"] = l.index;
        if (l.source == LineSource::Orbit) {
            o["gamma"] = {l.gamma.x, l.gamma.y};
            o["qvalue"] = l.qvalue;
        }
        arr.push_back(o);
    }
    j["lines"] = arr;
    return j.dump(1);
}

std::string groups_csv(GroupedSpectrum const & gs)
{
    std::string s = "energy,multiplicity,kind,source_kind,k_or_l,qvalue,predicted,matches\n";
    for (auto const & g : gs.groups) {
        s += fmt12(g.energy) + "," + std::to_string(g.multiplicity) + "," + to_string(g.kind) + ","
             + (g.source == LineSource::Trivial ? "trivial" : "orbit") + "," + std::to_string(g.index)
             + "," + std::to_string(g.qvalue) + "," + std::to_string(g.predicted) + ","
             + (g.matches_prediction ? "1" : "0") + "\n";
    }
    return s;
}

} // namespace solspec
