#include "CLI11.hpp"
#include "json.hpp"

#include "whitcaus/caustics.hpp"
#include "whitcaus/oscint.hpp"
#include "whitcaus/parallel.hpp"
#include "whitcaus/whittaker.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace whitcaus;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Report {
    std::string command;
    json inputs = json::object();
    json outputs = json::object();
    json checks = json::array();
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void check(const std::string& name, bool pass, const std::string& detail = "") {
        checks.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    }
    bool ok() const {
        for (const auto& c : checks)
            if (!c["pass"].get<bool>()) return false;
        return true;
    }
    json to_json() const {
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return {{"command", command}, {"inputs", inputs}, {"outputs", outputs}, {"checks", checks}, {"pass", ok()},
                {"wall_time", wall}};
    }
};

std::string fmt(double x, int prec = 10) {
    std::ostringstream os;
    os << std::setprecision(prec) << x;
    return os.str();
}

void print_text(const json& j, const std::string& indent = "") {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_object()) {
            std::cout << indent << it.key() << ":\n";
            print_text(*it, indent + "  ");
        } else if (it->is_array() && !it->empty() && (*it)[0].is_object()) {
            std::cout << indent << it.key() << ":\n";
            for (const auto& e : *it) std::cout << indent << "  - " << e.dump() << "\n";
        } else {
            std::cout << indent << it.key() << ": " << it->dump() << "\n";
        }
    }
}

int emit(const Report& r, bool as_json) {
    const json j = r.to_json();
    if (as_json) {
        std::cout << j.dump() << std::endl;
    } else {
        std::cout << "command: " << r.command << "\n";
        print_text(j["outputs"]);
        for (const auto& c : r.checks) {
            std::cout << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>();
            if (!c["detail"].get<std::string>().empty()) std::cout << "  (" << c["detail"].get<std::string>() << ")";
            std::cout << "\n";
        }
        std::cout << "wall_time: " << fmt(j["wall_time"].get<double>(), 4) << " s\n";
    }
    return r.ok() ? 0 : 1;
}

// ----- point input -----------------------------------------------------------

struct PointArgs {
    double y1 = 0, y2 = 0;
    bool exact = false;
    std::string y1sq, y2sq;
};

ChamberPoint make_point(const PointArgs& a, json& inputs) {
    if (a.exact) {
        if (a.y1sq.empty() || a.y2sq.empty()) throw UsageError("--exact needs --y1sq and --y2sq");
        Rational s1, s2;
        try {
            s1 = parse_rational(a.y1sq);
            s2 = parse_rational(a.y2sq);
        } catch (const std::exception& e) {
            throw UsageError(std::string("bad rational: ") + e.what());
        }
        if (sgn(s1) <= 0 || sgn(s2) <= 0) throw UsageError("y1^2 and y2^2 must be positive");
        inputs["y1sq"] = a.y1sq;
        inputs["y2sq"] = a.y2sq;
        return ChamberPoint::from_squares(s1, s2);
    }
    if (!(a.y1 > 0) || !(a.y2 > 0)) throw UsageError("y1 and y2 must be positive");
    inputs["y1"] = a.y1;
    inputs["y2"] = a.y2;
    return ChamberPoint::from_double(a.y1, a.y2);
}

void add_point_options(CLI::App* c, PointArgs& a) {
    c->add_option("--y1", a.y1, "first simple-root coordinate");
    c->add_option("--y2", a.y2, "second simple-root coordinate");
    c->add_flag("--exact", a.exact, "read y1^2, y2^2 as exact rationals");
    c->add_option("--y1sq", a.y1sq, "y1^2 as a rational string (with --exact)");
    c->add_option("--y2sq", a.y2sq, "y2^2 as a rational string (with --exact)");
}

std::string rat_str(const Rational& q) { return q.get_str(); }

// ----- zone / fiber ------------------------------------------------------------

Report cmd_zone(const PointArgs& a, double tol) {
    Report r;
    r.command = "zone";
    ChamberPoint p = make_point(a, r.inputs);
    r.inputs["tol"] = tol;
    r.inputs["exact"] = a.exact;
    r.outputs["zone"] = to_string(zone(p, tol));
    const Rational d1 = outer_defect(p), d2 = inner_defect(p);
    r.outputs["defect1"] = d1.get_d();
    r.outputs["defect2"] = d2.get_d();
    if (a.exact) {
        r.outputs["defect1_exact"] = rat_str(d1);
        r.outputs["defect2_exact"] = rat_str(d2);
    }
    return r;
}

json fiber_json(const Fiber& f) {
    json pts = json::array();
    for (const auto& fp : f.points) {
        json e = {{"x1", fp.jacobi.x1},
                  {"x2", fp.jacobi.x2},
                  {"y1", fp.jacobi.y1},
                  {"y2", fp.jacobi.y2},
                  {"multiplicity", fp.multiplicity},
                  {"degeneracy", to_string(fp.degeneracy)},
                  {"c1_degenerate", fp.c1_degenerate}};
        const auto s = spectrum(fp.jacobi.to_sym());
        e["spectrum"] = {s[0], s[1], s[2]};
        pts.push_back(e);
    }
    return pts;
}

Report cmd_fiber(const PointArgs& a, double tol) {
    Report r;
    r.command = "fiber";
    ChamberPoint p = make_point(a, r.inputs);
    r.inputs["tol"] = tol;
    Fiber f = tol > 0 ? fiber(p, tol) : fiber(p);
    r.outputs["zone"] = to_string(f.zone);
    r.outputs["count"] = f.points.size();
    r.outputs["points"] = fiber_json(f);
    double worst = 0;
    for (const auto& fp : f.points) {
        const auto s = spectrum(fp.jacobi.to_sym());
        worst = std::max({worst, std::abs(s[0] - 1), std::abs(s[1]), std::abs(s[2] + 1)});
    }
    r.check("isospectral", worst < 1e-10, "max spectrum deviation " + fmt(worst, 3));
    return r;
}

// ----- whittaker -----------------------------------------------------------------

Report cmd_whittaker(int n, double t, double tau, const PointArgs& a, double tol, const std::string& predict) {
    Report r;
    r.command = "whittaker";
    r.inputs["n"] = n;
    r.inputs["predict"] = predict;
    r.inputs["tol"] = tol;
    WhittakerConfig cfg;
    cfg.quad.rel_tol = tol;
    if (n == 2) {
        if (!(tau > 0)) throw UsageError("--tau (or --t) must be positive for n = 2");
        if (!(a.y1 > 0)) throw UsageError("y1 must be positive");
        r.inputs["tau"] = tau;
        r.inputs["y"] = a.y1;
        auto res = jacquet_whittaker(ChamberPoint::from_double(a.y1, a.y1), SpectralParam::gl2(tau), cfg);
        const double oracle = kGL2Norm * std::sqrt(a.y1) * std::abs(jacquet_integral_gl2_bessel(a.y1, tau));
        const double rel = std::abs(std::abs(res.value) - oracle) / oracle;
        r.outputs["W_re"] = res.value.real();
        r.outputs["W_im"] = res.value.imag();
        r.outputs["absW"] = std::abs(res.value);
        r.outputs["err"] = res.err_estimate;
        r.outputs["absW_bessel"] = oracle;
        r.outputs["rel_diff"] = rel;
        r.check("bessel_agreement", rel <= std::max(1e-4, 10 * tol), "relative difference " + fmt(rel, 3));
        return r;
    }
    if (n != 3) throw UsageError("--n must be 2 or 3");
    if (!(t > 0)) throw UsageError("--t must be positive");
    ChamberPoint p = make_point(a, r.inputs);
    r.inputs["t"] = t;
    const auto nu = SpectralParam::self_dual(t);
    const Zone z = zone(p, 2e-3);
    auto res = jacquet_whittaker(p, nu, cfg);
    const double absW = std::abs(res.value);
    r.outputs["zone"] = to_string(z);
    r.outputs["W_re"] = res.value.real();
    r.outputs["W_im"] = res.value.imag();
    r.outputs["absW"] = absW;
    r.outputs["err"] = res.err_estimate;
    r.outputs["absW_over_t34"] = absW / std::pow(t, 0.75);
    r.outputs["in_pearcey_window"] = in_pearcey_window(p, t);
    if (z == Zone::Shadow) {
        // light-zone values are O(t^{3/4}) at the cusp and O(1) in the bulk
        const bool decay = absW < 1e-4;
        r.outputs["rapid_decay"] = decay;
        r.check("shadow_decay", decay, "|W| = " + fmt(absW, 3));
    }
    if (predict == "morse") {
        const cplx m = predict_morse(p, nu);
        r.outputs["predict_re"] = m.real();
        r.outputs["predict_im"] = m.imag();
        r.outputs["predict_rel_err"] = std::abs(m - res.value) / std::max(absW, 1e-300);
    } else if (predict == "pearcey") {
        const auto pp = predict_pearcey(p, nu);
        r.outputs["predict_re"] = pp.value.real();
        r.outputs["predict_im"] = pp.value.imag();
        r.outputs["predict_rel_err"] = std::abs(pp.value - res.value) / std::max(absW, 1e-300);
        r.outputs["pearcey_plus"] = {{"pe_y1", pp.plus.pe_y1}, {"pe_y2", pp.plus.pe_y2}, {"abs", std::abs(pp.plus.value)}};
        r.outputs["pearcey_minus"] = {
            {"pe_y1", pp.minus.pe_y1}, {"pe_y2", pp.minus.pe_y2}, {"abs", std::abs(pp.minus.value)}};
    } else if (predict != "none") {
        throw UsageError("--predict must be morse, pearcey or none");
    }
    return r;
}

// ----- verify --------------------------------------------------------------------

void suite_caustics(Report& r) {
    std::vector<Rational> expect{1, 12, -21, -56, -3, 30, 10};
    RatPoly e = build_E(ChamberPoint::from_squares(Rational(1, 4), Rational(1, 4)));
    bool same = e.degree() == 6;
    for (int i = 0; same && i <= 6; ++i) same = e.coeff(i) == expect[i];
    r.check("E(1/2,1/2) coefficients", same);
    r.check("E(1/2,1/2) six real roots", real_roots(e).size() == 6);

    RatPoly e2 = build_E(ChamberPoint::from_squares(Rational(3, 8), Rational(3, 8)));
    r.check("E(light2 sample) two real roots", real_roots(e2).size() == 2);

    RatPoly ec = build_E(ChamberPoint::from_squares(Rational(1, 3), Rational(1, 3)));
    RatPoly q(std::vector<Rational>{-1, 2, 2});
    RatPoly q3 = q * q * q;
    r.check("E(cusp) proportional to (2t^2+2t-1)^3", ec * q3.lead() == q3 * ec.lead());

    struct Sample {
        const char* name;
        ChamberPoint p;
        double tol;
        std::size_t count;
    };
    const std::vector<Sample> samples{
        {"light1 (0.257,0.129)", ChamberPoint::from_double(0.257, 0.129), 0.0, 6},
        {"light2 (0.614,0.573)", ChamberPoint::from_double(0.614, 0.573), 2e-3, 2},
        {"caustic1 (0.739,0.674)", ChamberPoint::from_double(0.739, 0.674), 2e-3, 1},
        {"caustic2 (0.525,0.382)", ChamberPoint::from_double(0.525, 0.382), 1e-2, 4},
        {"cusp (1/3,1/3)", ChamberPoint::from_squares(Rational(1, 3), Rational(1, 3)), 0.0, 2},
    };
    for (const auto& s : samples) {
        Fiber f = s.tol > 0 ? fiber(s.p, s.tol) : fiber(s.p);
        r.check(std::string("fiber ") + s.name, f.points.size() == s.count,
                std::to_string(f.points.size()) + " points, zone " + to_string(f.zone));
    }
    r.check("fiber (2,2) empty", fiber(ChamberPoint::from_double(2, 2)).points.empty());
}

void suite_hessian(Report& r) {
    const CuspReport c = hessian_invariants_at_cusp();
    r.outputs["det_q0_plus"] = c.plus.det_q0;
    r.outputs["det_q0_minus"] = c.minus.det_q0;
    r.outputs["det_q0_plus_expected"] = c.plus.det_q0_expected;
    r.outputs["det_q0_minus_expected"] = c.minus.det_q0_expected;
    r.outputs["amplitude_ratio"] = c.ratio;
    r.outputs["amplitude_ratio_expected"] = c.ratio_expected;
    r.outputs["amplitude_ratio_with_quartic"] = c.ratio_with_quartic;
    r.check("corank 1 at both cusp critical points", c.corank_ok);
    r.check("transverse signatures +2, -2", c.signature_ok);
    r.check("delta^{1/2} = (12 +- 6 sqrt3)^{-1}", c.delta_ok);
    r.check("|det Q0| = (13 -+ 4 sqrt3)/288", c.det_ok,
            "computed " + fmt(c.plus.det_q0, 8) + ", " + fmt(c.minus.det_q0, 8) + "; see decisions ledger");
    r.check("amplitude ratio 121/(2767+1596 sqrt3)", c.ratio_ok, "computed " + fmt(c.ratio, 8));
}

void suite_gl2(Report& r) {
    double worst = 0, worst_direct = 0;
    for (double tau : {5.0, 10.0})
        for (int i = 0; i < 10; ++i) {
            const double y = 0.1 * std::pow(tau / 0.1, i / 9.0);
            const cplx a = jacquet_integral_gl2(y, tau).value, b = jacquet_integral_gl2_bessel(y, tau);
            const double k = bessel_kit_direct(tau, 2 * M_PI * y);
            const double c = 2 * std::sqrt(M_PI) * std::exp(-log_gamma(cplx(0.5, tau)).real()) * std::abs(k);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
            worst_direct = std::max(worst_direct, std::abs(std::abs(a) - c) / c);
        }
    r.outputs["gl2_worst_rel_bessel"] = worst;
    r.outputs["gl2_worst_rel_direct"] = worst_direct;
    r.check("GL2 contour vs Bessel form (20 points)", worst <= 1e-4, fmt(worst, 3));
    r.check("GL2 contour vs direct K quadrature (20 points)", worst_direct <= 1e-4, fmt(worst_direct, 3));
    const auto rep = supnorm_scan({10, 20, 40, 80}, 2);
    r.outputs["gl2_supnorm_slope"] = rep.slope;
    r.check("GL2 sup-norm slope 1/6 +- 0.05", std::abs(rep.slope - 1.0 / 6) <= 0.05, fmt(rep.slope, 4));
}

void suite_stade(Report& r, bool slow) {
    for (double s : {1.0, 2.0}) {
        const auto st = stade_check(s, SpectralParam::gl2(5));
        r.outputs["gl2_stade_sigma" + fmt(s)] = st.lhs / st.rhs;
        r.check("GL2 Stade sigma=" + fmt(s), std::abs(st.lhs / st.rhs - 1) < 0.01, fmt(st.lhs / st.rhs, 8));
    }
    std::vector<std::pair<double, double>> gl3{{1.0, 1.0}, {2.5, 1.0}};
    if (slow) gl3.push_back({2.5, 3.0});
    for (auto [s, t] : gl3) {
        const auto st = stade_check(s, SpectralParam::self_dual(t));
        const std::string key = "gl3_stade_sigma" + fmt(s) + "_t" + fmt(t);
        r.outputs[key] = st.lhs / st.rhs;
        if (s == 1.0) r.outputs["gl3_fitted_norm"] = st.fitted_norm;
        r.check("GL3 Stade sigma=" + fmt(s) + " t=" + fmt(t), std::abs(st.lhs / st.rhs - 1) < 0.01,
                fmt(st.lhs / st.rhs, 8));
    }
}

Report cmd_verify(const std::string& suite, bool slow) {
    Report r;
    r.command = "verify";
    r.inputs["suite"] = suite;
    r.inputs["slow"] = slow;
    const bool all = suite == "all";
    if (!all && suite != "caustics" && suite != "hessian" && suite != "stade" && suite != "gl2")
        throw UsageError("unknown suite " + suite);
    if (all || suite == "caustics") suite_caustics(r);
    if (all || suite == "hessian") suite_hessian(r);
    if (all || suite == "gl2") suite_gl2(r);
    if (all || suite == "stade") suite_stade(r, slow);
    return r;
}

// ----- scan ----------------------------------------------------------------------

std::vector<double> parse_grid(const std::string& spec) {
    double a, b, h;
    char c1, c2;
    std::istringstream is(spec);
    if (!(is >> a >> c1 >> b >> c2 >> h) || c1 != ':' || c2 != ':' || !(h > 0) || b < a)
        throw UsageError("--grid expects a:b:step");
    std::vector<double> v;
    const long n = std::lround(std::floor((b - a) / h + 1e-9));
    for (long i = 0; i <= n; ++i) {
        const double x = a + i * h;
        if (x > 0) v.push_back(x);
    }
    return v;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) v.push_back(std::stod(item));
    if (v.empty()) throw UsageError("empty --t-list");
    return v;
}

Report cmd_scan(const std::string& mode, const std::string& grid_spec, const std::string& t_list, int n, int grid,
                double tol, const std::string& out) {
    Report r;
    r.command = "scan";
    r.inputs["mode"] = mode;
    r.inputs["out"] = out;
    if (out.empty()) throw UsageError("--out is required");
    std::ofstream os(out);
    if (!os) throw UsageError("cannot open " + out);
    os << std::setprecision(12);
    if (mode == "zones") {
        r.inputs["grid"] = grid_spec;
        r.inputs["tol"] = tol;
        const auto ys = parse_grid(grid_spec);
        struct Row {
            Zone z;
            double d1, d2;
            std::size_t count;
        };
        std::vector<Row> rows(ys.size() * ys.size());
        parallel_for(rows.size(), [&](std::size_t k) {
            const auto p = ChamberPoint::from_double(ys[k / ys.size()], ys[k % ys.size()]);
            const Zone z = zone(p, tol);
            const std::size_t count = (z == Zone::Shadow) ? 0 : (tol > 0 ? fiber(p, tol) : fiber(p)).points.size();
            rows[k] = {z, outer_defect(p).get_d(), inner_defect(p).get_d(), count};
        });
        os << "y1,y2,zone,defect1,defect2,fiber_count\n";
        std::map<std::string, int> hist;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            os << ys[k / ys.size()] << ',' << ys[k % ys.size()] << ',' << to_string(rows[k].z) << ',' << rows[k].d1
               << ',' << rows[k].d2 << ',' << rows[k].count << '\n';
            hist[to_string(rows[k].z)]++;
        }
        r.outputs["rows"] = rows.size();
        r.outputs["zones"] = hist;
        return r;
    }
    if (mode != "supnorm") throw UsageError("--mode must be zones or supnorm");
    if (n != 2 && n != 3) throw UsageError("--n must be 2 or 3");
    const auto ts = t_list.empty() ? (n == 2 ? std::vector<double>{10, 20, 40, 80} : std::vector<double>{20, 40, 80})
                                   : parse_list(t_list);
    r.inputs["n"] = n;
    r.inputs["t_list"] = ts;
    r.inputs["grid"] = grid;
    const auto rep = supnorm_scan(ts, n, grid);
    os << "t,y1,y2,absW,err\n";
    for (const auto& p : rep.points) os << p.t << ',' << p.y1 << ',' << p.y2 << ',' << p.absW << ',' << p.err << '\n';
    json maxima = json::array();
    for (auto [t, m] : rep.maxima) maxima.push_back({{"t", t}, {"max_absW", m}});
    r.outputs["rows"] = rep.points.size();
    r.outputs["maxima"] = maxima;
    r.outputs["slope"] = rep.slope;
    r.outputs["expected_slope"] = rep.expected;
    const double band = n == 2 ? 0.05 : 0.1;
    r.check("sup-norm slope", std::abs(rep.slope - rep.expected) <= band,
            fmt(rep.slope, 4) + " vs " + fmt(rep.expected, 4) + " +- " + fmt(band));
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Whittaker functions near caustics: fibers, zones and oscillatory integrals"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "print a single JSON line");

    PointArgs pa;
    double tol = 0.0;

    auto* zc = app.add_subcommand("zone", "classify a chamber point");
    add_point_options(zc, pa);
    zc->add_option("--tol", tol, "caustic membership tolerance (0 = exact)");
    zc->add_flag("--json", as_json);

    auto* fc = app.add_subcommand("fiber", "list the fiber of the moment map over a point");
    add_point_options(fc, pa);
    fc->add_option("--tol", tol, "snap to a caustic within this tolerance");
    fc->add_flag("--json", as_json);

    int n = 3;
    double t = 0, tau = 0, wtol = 1e-6;
    std::string predict = "none";
    auto* wc = app.add_subcommand("whittaker", "evaluate the Jacquet integral");
    add_point_options(wc, pa);
    wc->add_option("--n", n, "rank: 2 or 3");
    wc->add_option("--t", t, "spectral scale (n = 3), or tau for n = 2");
    wc->add_option("--tau", tau, "GL2 spectral parameter");
    wc->add_option("--tol", wtol, "relative quadrature tolerance");
    wc->add_option("--predict", predict, "morse | pearcey | none");
    wc->add_flag("--json", as_json);

    std::string suite = "all";
    bool slow = false;
    auto* vc = app.add_subcommand("verify", "run a verification suite");
    vc->add_option("--suite", suite, "caustics | hessian | stade | gl2 | all");
    vc->add_flag("--slow", slow, "include slow checks");
    vc->add_flag("--json", as_json);

    std::string mode = "zones", grid_spec = "0:1.2:0.005", t_list, out;
    int scan_n = 2, scan_grid = 9;
    auto* sc = app.add_subcommand("scan", "sweep zones or sup-norms into a CSV file");
    sc->add_option("--mode", mode, "zones | supnorm");
    sc->add_option("--grid", grid_spec, "zones: a:b:step for both coordinates");
    sc->add_option("--t-list", t_list, "supnorm: comma-separated t (tau for n = 2)");
    sc->add_option("--n", scan_n, "supnorm: rank 2 or 3");
    sc->add_option("--box", scan_grid, "supnorm n = 3: minimum points per axis of the window box");
    sc->add_option("--tol", tol, "zones: caustic membership tolerance");
    sc->add_option("--out", out, "output CSV path");
    sc->add_flag("--json", as_json);

    CLI11_PARSE(app, argc, argv);

    try {
        Report r;
        if (*zc) r = cmd_zone(pa, tol);
        else if (*fc) r = cmd_fiber(pa, tol);
        else if (*wc) r = cmd_whittaker(n, t, tau > 0 ? tau : t, pa, wtol, predict);
        else if (*vc) r = cmd_verify(suite, slow);
        else r = cmd_scan(mode, grid_spec, t_list, scan_n, scan_grid, tol, out);
        return emit(r, as_json);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
