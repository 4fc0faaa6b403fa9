#include "solspec/cli.hpp"
#include "selftest.hpp"

#include "solspec/dynamics.hpp"
#include "solspec/errors.hpp"
#include "solspec/io.hpp"
#include "solspec/qforms.hpp"
#include "solspec/semiclassics.hpp"
#include "solspec/spectrum.hpp"
#include "solspec/statistics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <new>
#include <numbers>
#include <ostream>
#include <sstream>

namespace solspec::cli {

namespace {

struct Common {
    std::string matrix = "2,1,1,1";
    std::string metric = "1,0,1";
    std::string json_config;
    std::string out;
    int threads = 1;
    bool selftest = false;
};

struct FormsOpts {
    std::vector<i64> n;
    i64 d = 0;
};

struct SpectrumOpts {
    double energy = 2000;
    double tol = 1e-9;
    double grouping_tol = kDefaultGroupingTol;
    i64 report_n = 0;
};

struct WeylOpts {
    double energy = 2000;
    std::vector<double> points;
    double tol = 1e-8;
};

struct SpacingOpts {
    std::vector<i64> qmax{900, 3600, 8100};
    std::string mode = "orbit-only";
    std::string involution;
    std::vector<i64> growth;
};

struct FlowerOpts {
    i64 qmax = 3600;
    bool transport = false;
    std::string loop;
    bool clockwise = false;
    int family = 1;
};

struct GeodesicOpts {
    std::string initial = "0,0,0,0.6,0.4,0.5";
    bool normalize = true;
    double duration = 100;
    double step = 1e-3;
    int sample_every = 100;
};

struct FieldOpts {
    std::string gamma = "1,0";
    int level = 0;
    double x = 0;
    std::string y_range = "0,1";
    std::string z_range = "-1,1";
    int ny = 32;
    int nz = 64;
    double trunc_tol = 1e-8;
};

std::vector<double> parse_reals(std::string const & s, std::size_t n, char const * what)
{
    std::vector<double> v;
    std::istringstream is(s);
    std::string f;
    while (std::getline(is, f, ',')) {
        std::size_t pos = 0;
        double x = 0;
        try {
            x = std::stod(f, &pos);
        } catch (std::exception const &) {
            pos = 0;
        }
        if (pos == 0 || pos != f.size() || !std::isfinite(x))
            throw ValidationError(std::string(what) + " entry '" + f + "' is not a number");
        v.push_back(x);
    }
    if (v.size() != n)
        throw ValidationError(std::string(what) + " needs " + std::to_string(n) + " comma-separated values, got '"
                              + s + "'");
    return v;
}

Vec2i parse_vec2i(std::string const & s, char const * what)
{
    auto v = parse_reals(s, 2, what);
    if (v[0] != std::floor(v[0]) || v[1] != std::floor(v[1]) || std::fabs(v[0]) > 1e15 || std::fabs(v[1]) > 1e15)
        throw ValidationError(std::string(what) + " needs integers, got '" + s + "'");
    return {i64(v[0]), i64(v[1])};
}

Mat2i parse_mat(std::string const & s, char const * what)
{
    auto v = parse_reals(s, 4, what);
    for (double x : v)
        if (x != std::floor(x) || std::fabs(x) > 1e15)
            throw ValidationError(std::string(what) + " needs integers, got '" + s + "'");
    return {i64(v[0]), i64(v[1]), i64(v[2]), i64(v[3])};
}

class Emitter {
  public:
    Emitter(std::string dir, std::ostream & out)
        : dir_(std::move(dir)), out_(out)
    {
        if (!dir_.empty()) {
            std::error_code ec;
            std::filesystem::create_directories(dir_, ec);
            if (ec)
                throw ResourceError("cannot create output directory " + dir_ + ": " + ec.message());
        }
    }
    void file(std::string const & name, std::string const & content)
    {
        if (dir_.empty())
            return;
        std::string p = join_path(dir_, name);
        write_text_file(p, content);
        out_ << "file=" << p << "\n";
    }
  private:
    std::string dir_;
    std::ostream & out_;
};

/* JSON keys mirror the long flag names; values given there win over
 * the command line */
void apply_json_config(CLI::App & sub, std::string const & path)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (nlohmann::json::exception const & e) {
        throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object())
        throw ValidationError("config file " + path + " must hold a JSON object");
    auto scalar = [&](nlohmann::json const & v, std::string const & key) -> std::string {
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_boolean())
            return v.get<bool>() ? "true" : "false";
        if (v.is_number_integer())
            return std::to_string(v.get<long long>());
        if (v.is_number())
            return v.dump();
        throw ValidationError("config key '" + key + "' has an unsupported value");
    };
    for (auto const & [key, val] : j.items()) {
        if (key == "json-config")
            throw ValidationError("config files cannot nest");
        CLI::Option * opt = sub.get_option_no_throw("--" + key);
        if (!opt)
            throw ValidationError("unknown config key '" + key + "' for " + sub.get_name());
        opt->clear();
        if (val.is_array()) {
            if (opt->get_expected_max() > 1) {
                for (auto const & e : val)
                    opt->add_result(scalar(e, key));
            } else {
                std::string joined;
                for (auto const & e : val)
                    joined += (joined.empty() ? "" : ",") + scalar(e, key);
                opt->add_result(joined);
            }
        } else {
            opt->add_result(scalar(val, key));
        }
        try {
            opt->run_callback();
        } catch (CLI::Error const & e) {
            throw ValidationError("config key '" + key + "': " + e.what());
        }
    }
}

void add_common(CLI::App * s, Common & c)
{
    s->add_option("--matrix", c.matrix, "gluing matrix a11,a12,a21,a22 (row-major)")->capture_default_str();
    s->add_option("--metric", c.metric, "fibre metric alpha,beta,gamma")->capture_default_str();
    s->add_option("--json-config", c.json_config, "JSON file whose keys override the flags");
    s->add_option("--out", c.out, "directory for CSV/JSON/SVG output");
    s->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1, 1024))->capture_default_str();
    s->add_flag("--selftest", c.selftest, "run this module's invariant suite at reduced scale");
}

void print_groups_report(std::ostream & out, GroupedSpectrum const & gs, GluingMap const & A, i64 report_n)
{
    PrimitivePart pp = primitive_part(form_from_matrix(A.dual()));
    i64 bad = 0, checked = 0;
    for (auto const & gr : gs.groups) {
        if (gr.source != LineSource::Orbit || gr.multiplicity < 2)
            continue;
        i64 n = gr.qvalue / (pp.sign * pp.l);
        if (std::llabs(n) > report_n)
            continue;
        ++checked;
        bool ok = gr.kind != MergeKind::Accidental && gr.matches_prediction;
        bad += !ok;
        out << "group energy=" << fmt12(gr.energy) << " n=" << n << " level=" << gr.index
            << " multiplicity=" << gr.multiplicity << " predicted=" << gr.predicted << " kind=" << to_string(gr.kind)
            << " ok=" << (ok ? 1 : 0) << "\n";
    }
    out << "degenerate_groups_checked=" << checked << " mismatches=" << bad << "\n";
}

int cmd_forms(Common const & c, FormsOpts const & o, std::ostream & out)
{
    Emitter em(c.out, out);
    nlohmann::json j;
    if (o.d != 0) {
        require_valid_discriminant(o.d);
        auto pell = pell_fundamental(o.d);
        out << "discriminant=" << o.d << "\n";
        out << "pell=" << to_string(pell.X0) << "," << to_string(pell.Y0) << "\n";
        out << "class_number=" << class_number(o.d) << "\n";
        auto cyc = reduction_cycles(o.d);
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            out << "cycle" << i << "=";
            for (std::size_t k = 0; k < cyc[i].size(); ++k)
                out << (k ? " " : "") << to_string(cyc[i][k]);
            out << "\n";
        }
        j["discriminant"] = o.d;
        j["class_number"] = class_number(o.d);
        em.file("forms.json", j.dump(2) + "\n");
        return kExitOk;
    }
    GluingMap A = GluingMap::parse(c.matrix);
    QuadraticForm qd = q_dual(A);
    PrimitivePart pp = primitive_part(qd);
    i64 d = narrow(pp.form.discriminant());
    auto pell = pell_fundamental(d);
    Mat2i a0 = automorph_generator(pp.form);
    PrimitivityIndex pi = primitivity_index(A.dual());
    i64 h = class_number(d);
    out << "matrix=" << to_string(A.matrix()) << "\n";
    out << "dual_form=" << to_string(qd) << "\n";
    out << "discriminant=" << to_string(qd.discriminant()) << "\n";
    out << "primitive_form=" << to_string(pp.form) << " content=" << pp.l << " sign=" << pp.sign << "\n";
    out << "pell=" << to_string(pell.X0) << "," << to_string(pell.Y0) << "\n";
    out << "automorph=" << to_string(a0) << "\n";
    out << "primitivity_index=" << pi.r << "\n";
    out << "class_number=" << h << "\n";
    j["matrix"] = {A.matrix().a11, A.matrix().a12, A.matrix().a21, A.matrix().a22};
    j["dual_form"] = {qd.a, qd.b, qd.c};
    j["primitive_form"] = {pp.form.a, pp.form.b, pp.form.c};
    j["content"] = pp.l;
    j["sign"] = pp.sign;
    j["discriminant"] = d;
    j["pell"] = {to_string(pell.X0), to_string(pell.Y0)};
    j["automorph"] = {a0.a11, a0.a12, a0.a21, a0.a22};
    j["primitivity_index"] = pi.r;
    j["class_number"] = h;
    j["values"] = nlohmann::json::array();
    for (i64 n : o.n) {
        if (n == 0)
            throw ValidationError("n must be nonzero");
        MultiplicityPrediction m = predicted_multiplicity_at(A, n);
        out << "n=" << n << " N=" << m.count << " m=" << m.m;
        nlohmann::json e{{"n", n}, {"N", m.count}, {"m", m.m}};
        if (n > 0 && gcd(n, d) == 1) {
            i64 ds = rep_count_formula(d, n);
            out << " divisor_sum=" << ds;
            e["divisor_sum"] = ds;
        }
        out << "\n";
        auto reps = rep_orbit_representatives(pp.form, n, a0);
        out << "representatives=";
        for (std::size_t k = 0; k < reps.size(); ++k)
            out << (k ? " " : "") << "(" << reps[k].x << "," << reps[k].y << ")";
        out << "\n";
        j["values"].push_back(e);
    }
    em.file("forms.json", j.dump(2) + "\n");
    return kExitOk;
}

int cmd_spectrum(Common const & c, SpectrumOpts const & o, std::ostream & out)
{
    GluingMap A = GluingMap::parse(c.matrix);
    Geometry g = geometry(A, FibreMetric::parse(c.metric));
    if (!(o.energy > 0))
        throw ValidationError("--energy must be positive");
    if (!(o.tol > 0 && o.tol < 1e-3))
        throw ValidationError("--tol must lie in (0, 1e-3)");
    Emitter em(c.out, out);
    MathieuCache cache;
    AssembleOptions opt;
    opt.threads = c.threads;
    opt.cache = &cache;
    SpectrumTable t = assemble(g, o.energy, o.tol, opt);
    GroupedSpectrum gs = group_degenerate(t, o.grouping_tol, &A, &g);
    long long total = 0;
    for (auto const & l : t.lines)
        total += l.multiplicity;
    out << "energy_cut=" << fmt12(t.energy_cut) << " qmax=" << t.qmax << " lmax=" << t.lmax << "\n";
    out << "lines=" << t.lines.size() << " eigenvalues=" << total << " groups=" << gs.groups.size() << "\n";
    out << "predicted_merges=" << gs.predicted_merges << " sign_pair_merges=" << gs.sign_pair_merges
        << " accidental_merges=" << gs.accidental_merges << " grouping_tol=" << fmt12(gs.grouping_tol) << "\n";
    out << "cos_theta=" << fmt12(g.cos_theta) << " non_generic=" << (gs.non_generic ? 1 : 0) << "\n";
    if (o.report_n > 0)
        print_groups_report(out, gs, A, o.report_n);
    em.file("spectrum.csv", spectrum_csv(t));
    em.file("spectrum.json", spectrum_json(t));
    em.file("groups.csv", groups_csv(gs));
    return kExitOk;
}

int cmd_weyl(Common const & c, WeylOpts const & o, std::ostream & out)
{
    GluingMap A = GluingMap::parse(c.matrix);
    Geometry g = geometry(A, FibreMetric::parse(c.metric));
    if (!(o.energy > 0))
        throw ValidationError("--energy must be positive");
    std::vector<double> pts = o.points;
    if (pts.empty())
        pts = {o.energy / 4, o.energy / 2, o.energy};
    for (double e : pts)
        if (!(e > 0) || e > o.energy)
            throw ValidationError("--points must lie in (0, energy]");
    Emitter em(c.out, out);
    AssembleOptions opt;
    opt.threads = c.threads;
    SpectrumTable t = assemble(g, o.energy, o.tol, opt);
    auto curve = weyl_curve(t, pts, g.area);
    for (auto const & w : curve)
        out << "energy=" << fmt12(w.energy) << " empirical=" << w.empirical << " predicted=" << fmt12(w.predicted)
            << " ratio=" << fmt12(w.ratio) << "\n";
    em.file("weyl.csv", weyl_csv(curve));
    em.file("f_of_g.csv", f_table_csv(200));
    return kExitOk;
}

int cmd_spacing(Common const & c, SpacingOpts const & o, std::ostream & out)
{
    GluingMap A = GluingMap::parse(c.matrix);
    Geometry g = geometry(A, FibreMetric::parse(c.metric));
    SymmetryMode mode;
    if (o.mode == "orbit-only")
        mode = SymmetryMode::OrbitOnly;
    else if (o.mode == "extra-involution")
        mode = SymmetryMode::ExtraInvolution;
    else
        throw ValidationError("--mode must be orbit-only or extra-involution");
    std::optional<Involution> inv;
    if (mode == SymmetryMode::ExtraInvolution) {
        if (!o.involution.empty()) {
            Mat2i r1 = parse_mat(o.involution, "involution");
            inv = Involution{r1, A.matrix() * r1};
        } else {
            inv = find_involution(A.matrix());
            if (!inv)
                throw ValidationError("no involution factorization A = R2 R1 found; use orbit-only mode");
        }
        validate_involution(A.matrix(), *inv);
        out << "involution r1=" << to_string(inv->r1) << " r2=" << to_string(inv->r2) << "\n";
    }
    if (o.qmax.empty())
        throw ValidationError("--qmax needs at least one value");
    Emitter em(c.out, out);
    double const expected = mode == SymmetryMode::OrbitOnly ? 4 * g.mu / g.sqrtD : g.mu / (2 * g.sqrtD);
    ValueSequence last;
    for (i64 q : o.qmax) {
        ValueSequence vs = value_sequence(g, q, mode, inv);
        auto h = spacing_histogram(vs, false);
        auto hd = spacing_histogram(vs, true);
        std::vector<i64> d = vs.values;
        d.erase(std::unique(d.begin(), d.end()), d.end());
        out << "qmax=" << q << " mode=" << to_string(mode) << " count=" << vs.values.size()
            << " ratio=" << fmt12(double(vs.values.size()) / double(q)) << " expected_ratio=" << fmt12(expected)
            << " zero_fraction=" << fmt12(zero_spacing_fraction(vs)) << " distinct=" << d.size()
            << " boundary=" << vs.boundary_points << "\n";
        std::string tag = "spacing_" + std::to_string(q);
        em.file(tag + ".csv", histogram_csv(h));
        em.file(tag + "_nodeg.csv", histogram_csv(hd));
        em.file(tag + ".svg", histogram_svg(h, "spacings, qmax " + std::to_string(q)));
        em.file(tag + "_nodeg.svg", histogram_svg(hd, "spacings without degeneracies, qmax " + std::to_string(q)));
        if (q >= (last.values.empty() ? 0 : last.qmax))
            last = std::move(vs);
    }
    if (!o.growth.empty()) {
        auto gr = represented_growth(last, o.growth);
        for (auto const & p : gr)
            out << "K=" << p.K << " represented=" << p.count << " normalized=" << fmt12(p.normalized) << "\n";
        em.file("growth.csv", growth_csv(gr));
    }
    return kExitOk;
}

int cmd_flower(Common const & c, FlowerOpts const & o, std::ostream & out)
{
    GluingMap A = GluingMap::parse(c.matrix);
    Geometry g = geometry(A, FibreMetric::parse(c.metric));
    if (o.qmax < 1)
        throw ValidationError("--qmax must be >= 1");
    Emitter em(c.out, out);
    auto pts = flower(g, o.qmax);
    out << "points=" << pts.size() << " jacobian=" << fmt12(std::numbers::pi / g.mu) << "\n";
    if (o.transport) {
        LoopSpec loop;
        if (o.loop.empty()) {
            loop.radius = 0.55 * std::sqrt(double(o.qmax) / g.sqrtD);
        } else {
            auto v = parse_reals(o.loop, 3, "loop");
            loop.cx = v[0];
            loop.cy = v[1];
            loop.radius = v[2];
        }
        loop.counterclockwise = !o.clockwise;
        loop.family = o.family;
        Mat2i M = monodromy_transport(pts, g, loop);
        out << "loop centre=" << fmt12(loop.cx) << "," << fmt12(loop.cy) << " radius=" << fmt12(loop.radius)
            << (loop.counterclockwise ? " counterclockwise" : " clockwise") << "\n";
        out << "monodromy=" << to_string(M) << "\n";
    }
    em.file("flower.csv", flower_csv(pts));
    em.file("flower.svg", flower_svg(pts));
    return kExitOk;
}

int cmd_geodesic(Common const & c, GeodesicOpts const & o, std::ostream & out)
{
    GluingMap A = GluingMap::parse(c.matrix);
    Geometry g = geometry(A, FibreMetric::parse(c.metric));
    auto v = parse_reals(o.initial, 6, "initial");
    PhasePoint x0{v[0], v[1], v[2], v[3], v[4], v[5]};
    double H = hamiltonian(x0, g);
    if (o.normalize) {
        if (!(H > 0))
            throw ValidationError("cannot normalize a zero-momentum initial point");
        double s = 1 / std::sqrt(H);
        x0.pu *= s;
        x0.pv *= s;
        x0.pz *= s;
        H = hamiltonian(x0, g);
    }
    Emitter em(c.out, out);
    Trajectory tr = integrate(x0, g, o.duration, o.step, o.sample_every);
    out << "H=" << fmt12(H) << " max_energy_drift=" << fmt12(tr.max_energy_drift)
        << " max_q_drift=" << fmt12(tr.max_q_drift) << " drift_warning=" << (tr.drift_warning ? 1 : 0) << "\n";
    out << "z_min=" << fmt12(tr.z_min) << " z_max=" << fmt12(tr.z_max) << "\n";
    if (x0.pu * x0.pv != 0) {
        try {
            TurningPoints tp = turning_points(x0.pu, x0.pv, H, g);
            out << "turning_points z_minus=" << fmt12(tp.z_minus) << " z_plus=" << fmt12(tp.z_plus) << "\n";
            out << "caustic_mismatch=" << fmt12(std::max(std::fabs(tp.z_minus - tr.z_min), std::fabs(tp.z_plus - tr.z_max)))
                << "\n";
        } catch (DomainError const & e) {
            out << "turning_points none (" << e.what() << ")\n";
        }
    }
    Invariants inv = invariants(x0, g);
    out << "Q=" << fmt12(inv.Q) << " alpha=" << (inv.alpha_defined ? fmt12(inv.alpha) : std::string("undefined"))
        << " f1=" << fmt12(inv.f1) << " f2=" << fmt12(inv.f2) << "\n";
    BifurcationRadii b = bifurcation_radii(g);
    out << "bifurcation R_plus=" << fmt12(b.r_plus) << " R_minus=" << fmt12(b.r_minus) << " Q_plus=" << fmt12(b.q_plus)
        << " Q_minus=" << fmt12(b.q_minus) << "\n";
    em.file("trajectory.csv", trajectory_csv(tr));
    std::vector<Invariants> samples;
    for (auto const & s : tr.samples)
        samples.push_back(invariants(s.x, g));
    em.file("bifurcation.svg", bifurcation_svg(g, samples));
    return kExitOk;
}

int cmd_field(Common const & c, FieldOpts const & o, std::ostream & out)
{
    GluingMap A = GluingMap::parse(c.matrix);
    Geometry g = geometry(A, FibreMetric::parse(c.metric));
    Vec2i gamma = parse_vec2i(o.gamma, "gamma");
    auto yr = parse_reals(o.y_range, 2, "y-range");
    auto zr = parse_reals(o.z_range, 2, "z-range");
    if (o.ny < 1 || o.nz < 1)
        throw ValidationError("--ny and --nz must be >= 1");
    FieldGridSpec spec{o.x, yr[0], yr[1], o.ny, zr[0], zr[1], o.nz};
    Emitter em(c.out, out);
    auto samples = eigenfunction_field(g, gamma, o.level, spec, o.trunc_tol);
    NuAlpha na = nu_alpha(g, gamma);
    double vmax = 0;
    std::string csv = "x,y,z,re,im\n";
    for (auto const & s : samples) {
        vmax = std::max(vmax, std::abs(s.value));
        csv += fmt12(s.x) + "," + fmt12(s.y) + "," + fmt12(s.z) + "," + fmt12(s.value.real()) + ","
               + fmt12(s.value.imag()) + "\n";
    }
    /* gluing check on a fixed set of points */
    EigenfunctionField phi(g, gamma, o.level, o.trunc_tol);
    double res = 0;
    for (int i = 0; i < 16; ++i) {
        double x = 0.37 * i - 2.1, y = 0.23 * i + 0.4, z = 0.11 * i - 0.8;
        double ax = double(A.matrix().a11) * x + double(A.matrix().a12) * y;
        double ay = double(A.matrix().a21) * x + double(A.matrix().a22) * y;
        res = std::max(res, std::abs(phi(ax, ay, z + 1) - phi(x, y, z)));
    }
    out << "gamma=(" << gamma.x << "," << gamma.y << ") level=" << o.level << " nu=" << fmt12(na.nu)
        << " alpha=" << fmt12(na.alpha) << " energy="
        << fmt12(phi.solution().levels[std::size_t(o.level)] + na.nu * g.cos_theta) << "\n";
    out << "samples=" << samples.size() << " max_abs=" << fmt12(vmax) << " truncation_radius="
        << fmt12(phi.truncation_radius()) << " gluing_residual=" << fmt12(res) << "\n";
    em.file("field.csv", csv);
    return kExitOk;
}

std::string one_line(std::string s)
{
    for (char & ch : s)
        if (ch == '\n' || ch == '\r')
            ch = ' ';
    return s;
}

} // namespace

int run(int argc, char const * const * argv, std::ostream & out, std::ostream & err)
{
    CLI::App app{"solspec: spectra of Sol-manifolds"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Common common;
    FormsOpts fo;
    SpectrumOpts so;
    WeylOpts wo;
    SpacingOpts po;
    FlowerOpts lo;
    GeodesicOpts go;
    FieldOpts io;

    auto * forms = app.add_subcommand("forms", "discriminant, Pell, class number, representation counts");
    add_common(forms, common);
    forms->add_option("--n", fo.n, "values of the primitive form to count");
    forms->add_option("--d", fo.d, "analyse a bare discriminant instead of a matrix");

    auto * spectrum = app.add_subcommand("spectrum", "assemble and group the spectrum");
    add_common(spectrum, common);
    spectrum->add_option("--energy", so.energy, "energy cut")->capture_default_str();
    spectrum->add_option("--tol", so.tol, "relative accuracy of each level")->capture_default_str();
    spectrum->add_option("--grouping-tol", so.grouping_tol, "relative gap that merges levels")->capture_default_str();
    spectrum->add_option("--report-n", so.report_n, "list degenerate orbit groups with |n| up to this");

    auto * weyl = app.add_subcommand("weyl", "empirical counting function against Weyl's law");
    add_common(weyl, common);
    weyl->add_option("--energy", wo.energy, "largest energy")->capture_default_str();
    weyl->add_option("--points", wo.points, "energies to sample (default energy/4, energy/2, energy)");
    weyl->add_option("--tol", wo.tol, "relative accuracy of each level")->capture_default_str();

    auto * spacing = app.add_subcommand("spacing", "spacing histograms and represented-integer growth");
    add_common(spacing, common);
    spacing->add_option("--qmax", po.qmax, "bounds on |Q|")->capture_default_str();
    spacing->add_option("--mode", po.mode, "orbit-only or extra-involution")->capture_default_str();
    spacing->add_option("--involution", po.involution, "R1 as a11,a12,a21,a22 (R2 = A R1)");
    spacing->add_option("--growth", po.growth, "checkpoints K for the represented-integer count");

    auto * flw = app.add_subcommand("flower", "Sol-flower points and monodromy transport");
    add_common(flw, common);
    flw->add_option("--qmax", lo.qmax, "bound on |Q|")->capture_default_str();
    flw->add_flag("--transport", lo.transport, "transport a lattice frame around a loop");
    flw->add_option("--loop", lo.loop, "loop centre and radius cx,cy,r (default: around the origin)");
    flw->add_flag("--clockwise", lo.clockwise, "traverse the loop clockwise");
    flw->add_option("--family", lo.family, "sign of Q on the sheet followed")->check(CLI::IsMember({1, -1}));

    auto * geo = app.add_subcommand("geodesic", "integrate a geodesic and check the caustics");
    add_common(geo, common);
    geo->add_option("--initial", go.initial, "u,v,z,p_u,p_v,p_z")->capture_default_str();
    geo->add_flag("--normalize,!--no-normalize", go.normalize, "scale the momenta to H = 1");
    geo->add_option("--duration", go.duration, "integration time")->capture_default_str();
    geo->add_option("--step", go.step, "RK4 step")->capture_default_str();
    geo->add_option("--sample-every", go.sample_every, "steps between stored samples")->capture_default_str();

    auto * fld = app.add_subcommand("field", "averaged eigenfunction on a (y, z) slice");
    add_common(fld, common);
    fld->add_option("--gamma", io.gamma, "dual lattice vector x,y")->capture_default_str();
    fld->add_option("--level", io.level, "Mathieu level")->capture_default_str();
    fld->add_option("--x", io.x, "fixed x of the slice")->capture_default_str();
    fld->add_option("--y-range", io.y_range, "y0,y1")->capture_default_str();
    fld->add_option("--z-range", io.z_range, "z0,z1")->capture_default_str();
    fld->add_option("--ny", io.ny, "samples in y")->capture_default_str();
    fld->add_option("--nz", io.nz, "samples in z")->capture_default_str();
    fld->add_option("--trunc-tol", io.trunc_tol, "truncation of the orbit sum")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const & e) {
        if (e.get_exit_code() == 0)
            return app.exit(e, out, err);
        err << "solspec: error kind=usage: " << one_line(e.what()) << "\n";
        return kExitInvalid;
    }

    try {
        CLI::App * sub = app.get_subcommands().front();
        if (!common.json_config.empty())
            apply_json_config(*sub, common.json_config);
        std::string const name = sub->get_name();
        if (common.selftest) {
            Geometry g = geometry(GluingMap::parse(common.matrix), FibreMetric::parse(common.metric));
            return run_selftest(name, g, out) ? kExitOk : kExitFailure;
        }
        if (name == "forms")
            return cmd_forms(common, fo, out);
        if (name == "spectrum")
            return cmd_spectrum(common, so, out);
        if (name == "weyl")
            return cmd_weyl(common, wo, out);
        if (name == "spacing")
            return cmd_spacing(common, po, out);
        if (name == "flower")
            return cmd_flower(common, lo, out);
        if (name == "geodesic")
            return cmd_geodesic(common, go, out);
        if (name == "field")
            return cmd_field(common, io, out);
        throw InconsistencyError("unhandled subcommand " + name);
    } catch (Error const & e) {
        err << "solspec: error kind=" << e.kind_name() << ": " << one_line(e.what()) << "\n";
        switch (e.kind()) {
            case ErrorKind::Validation:
            case ErrorKind::Precondition:
            case ErrorKind::Domain:
                return kExitInvalid;
            case ErrorKind::Resource:
            case ErrorKind::Convergence:
                return kExitResource;
            case ErrorKind::Inconsistency:
                return kExitFailure;
        }
        return kExitFailure;
    } catch (std::bad_alloc const &) {
        err << "solspec: error kind=resource: out of memory\n";
        return kExitResource;
    } catch (std::exception const & e) {
        err << "solspec: error kind=internal: " << one_line(e.what()) << "\n";
        return kExitFailure;
    }
}

} // namespace solspec::cli
