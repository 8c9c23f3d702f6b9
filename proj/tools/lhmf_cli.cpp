// Command-line front end: eval, verify, fourier, geodesics.
//
// Exit codes: 0 success / all checks pass, 1 bad configuration, 2 point on or
// near the exceptional set, 3 series did not converge, 4 a verification failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lhmf/lhmf.hpp"

using namespace lhmf;
using nlohmann::json;

namespace {

enum exit_code { ok = 0, bad_config = 1, singular = 2, no_convergence = 3, check_failed = 4 };

/// "u+vi", "u-vi" or "vi"; v must be positive.
Point parse_tau(const std::string &text)
{
    std::string s;
    for (char c : text)
        if (c != ' ') s += c;
    if (s.size() < 2 || s.back() != 'i') throw config_error("tau '" + text + "': expected u+vi");
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    try {
        std::size_t used = 0;
        double u = 0.0, v;
        if (split == std::string::npos) {
            v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument("trailing");
        } else {
            const std::string a = s.substr(0, split), b = s.substr(split);
            u = std::stod(a, &used);
            if (used != a.size()) throw std::invalid_argument("trailing");
            v = std::stod(b, &used);
            if (used != b.size()) throw std::invalid_argument("trailing");
        }
        if (!(v > 0)) throw config_error("tau '" + text + "': imaginary part must be positive");
        return Point(u, v);
    } catch (const config_error &) {
        throw;
    } catch (const std::exception &) {
        throw config_error("tau '" + text + "': expected u+vi");
    }
}

std::vector<double> parse_colon_list(const std::string &text, std::size_t n, const char *what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception &) {
            throw config_error(std::string(what) + " '" + text + "': bad number '" + item + "'");
        }
    }
    if (out.size() != n) throw config_error(std::string(what) + " '" + text + "': expected " + std::to_string(n) + " fields");
    return out;
}

/// u0:u1:v0:v1:nu:nv, endpoints included.
std::vector<Point> parse_grid(const std::string &text)
{
    const auto g = parse_colon_list(text, 6, "grid");
    const int nu = static_cast<int>(g[4]), nv = static_cast<int>(g[5]);
    if (nu < 1 || nv < 1 || g[4] != nu || g[5] != nv) throw config_error("grid: nu and nv must be positive integers");
    std::vector<Point> out;
    for (int j = 0; j < nv; ++j)
        for (int i = 0; i < nu; ++i) {
            const double u = nu == 1 ? g[0] : g[0] + (g[1] - g[0]) * i / (nu - 1);
            const double v = nv == 1 ? g[2] : g[2] + (g[3] - g[2]) * j / (nv - 1);
            if (!(v > 0)) throw config_error("grid: v must be positive");
            out.emplace_back(u, v);
        }
    return out;
}

json cjson(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

void emit(const std::string &text, const std::string &path)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw config_error("cannot open output '" + path + "'");
    out << text;
}

series_fn parse_fn(const std::string &fn)
{
    if (fn == "f") return series_fn::f;
    if (fn == "g") return series_fn::g;
    if (fn == "F") return series_fn::F;
    if (fn == "G") return series_fn::G;
    throw config_error("unknown function '" + fn + "'");
}

struct EvalOptions {
    std::string fn = "F";
    int k = 2;
    long long D = 5;
    std::vector<std::string> taus;
    std::string grid;
    std::optional<double> tol;
    std::optional<long long> initial_bound, max_bound, fixed_bound;
    bool richardson = false;
    long long bound = 100000;  // c_inf partial-sum bound
    int jet_order = 0;
    std::string method = "rows";
    std::string format = "json";
    std::string output;
};

int cmd_eval(const EvalOptions &o)
{
    const Discriminant disc(o.D);
    json cfg{{"fn", o.fn}, {"k", o.k}, {"D", o.D}};
    json results = json::array();
    if (o.fn == "c_inf") {
        const auto c = c_infinity(o.k, disc, o.bound);
        cfg["bound"] = o.bound;
        results.push_back({{"value", c.value}, {"tail_bound", c.tail_bound}, {"bound", c.bound}, {"closed_form", c_infinity_closed(o.k, disc)}});
    } else {
        std::vector<Point> pts;
        for (const auto &t : o.taus) pts.push_back(parse_tau(t));
        if (!o.grid.empty()) {
            const auto g = parse_grid(o.grid);
            pts.insert(pts.end(), g.begin(), g.end());
        }
        if (pts.empty()) throw config_error("eval: give --tau or --grid");
        if (o.jet_order < 0) throw config_error("eval: jet order must be >= 0");
        if (o.fn == "P") {
            for (const auto &p : pts) {
                const Jet P = local_polynomial_jet(o.k, disc, p, o.jet_order);
                json r{{"tau", {{"u", p.u}, {"v", p.v}}}, {"value", cjson(P.value())}, {"proximity", e_d_proximity(p, disc)}};
                results.push_back(r);
            }
        } else {
            const auto fn = parse_fn(o.fn);
            TruncationParams t = o.fixed_bound ? TruncationParams::fixed(*o.fixed_bound) : default_truncation(fn, o.k);
            if (!o.fixed_bound) {
                if (o.tol) t.stagnation_tol = *o.tol;
                if (o.initial_bound) t.initial_bound = *o.initial_bound;
                if (o.max_bound) t.max_bound = *o.max_bound;
                if (o.richardson) t.richardson = true;
            }
            if (o.method != "rows" && o.method != "box") throw config_error("eval: method must be rows or box");
            const auto method = o.method == "rows" ? series_method::rows : series_method::box;
            if (o.jet_order > 0 && (fn == series_fn::f || fn == series_fn::g)) throw config_error("eval: jets are available for F and G only");
            cfg["truncation"] = {{"initial_bound", t.initial_bound}, {"stagnation_tol", std::isfinite(t.stagnation_tol) ? json(t.stagnation_tol) : json("fixed")},
                                 {"max_bound", t.max_bound}, {"richardson", t.richardson}};
            cfg["jet_order"] = o.jet_order;
            if (fn == series_fn::f || fn == series_fn::g) cfg["method"] = o.method;
            for (const auto &p : pts) {
                SeriesValue r;
                switch (fn) {
                case series_fn::f: r = eval_f(o.k, disc, p, t, method); break;
                case series_fn::g: r = eval_g(o.k, disc, p, t, method); break;
                case series_fn::F: r = eval_F(o.k, disc, p, t, o.jet_order); break;
                case series_fn::G: r = eval_G(o.k, disc, p, t, o.jet_order); break;
                }
                json row{{"tau", {{"u", p.u}, {"v", p.v}}}, {"value", cjson(r.value)}, {"tail_estimate", r.tail_estimate},
                         {"bound_used", r.bound_used}, {"proximity", r.proximity}};
                if (r.jet) {
                    json coeffs = json::array();
                    for (int d = 0; d <= r.jet->order(); ++d)
                        for (int j = 0; j <= d; ++j) coeffs.push_back({{"i", d - j}, {"j", j}, {"c", cjson((*r.jet)(d - j, j))}});
                    row["jet"] = coeffs;
                }
                results.push_back(row);
            }
        }
    }
    if (o.format == "csv") {
        std::ostringstream os;
        os.precision(17);
        if (o.fn == "c_inf") {
            os << "value,tail_bound,bound,closed_form\n";
            const auto &r = results[0];
            os << r["value"].get<double>() << "," << r["tail_bound"].get<double>() << "," << r["bound"].get<long long>() << ","
               << r["closed_form"].get<double>() << "\n";
        } else {
            os << "u,v,re,im,tail_estimate,bound_used,proximity\n";
            for (const auto &r : results)
                os << r["tau"]["u"].get<double>() << "," << r["tau"]["v"].get<double>() << "," << r["value"]["re"].get<double>() << ","
                   << r["value"]["im"].get<double>() << "," << r.value("tail_estimate", 0.0) << "," << r.value("bound_used", 0LL) << ","
                   << r["proximity"].get<double>() << "\n";
        }
        emit(os.str(), o.output);
    } else if (o.format == "json") {
        emit(json{{"schema_version", report_schema_version}, {"command", "eval"}, {"config", cfg}, {"results", results}}.dump(2) + "\n", o.output);
    } else {
        throw config_error("eval: format must be json or csv");
    }
    return ok;
}

struct VerifyOptions {
    std::string identity = "all";
    int k = 2;
    long long D = 5;
    int points = 20;
    std::optional<double> tol;
    unsigned long long seed = 7;
    long long bound = default_paired_bound;
    std::string format = "json";
    std::string output;
};

int cmd_verify(const VerifyOptions &o)
{
    SuiteConfig cfg;
    cfg.k = o.k;
    cfg.D = o.D;
    cfg.points = o.points;
    cfg.seed = o.seed;
    cfg.paired_bound = o.bound;
    cfg.tolerance = o.tol;
    if (o.bound < 1) throw config_error("verify: bound must be >= 1");
    const auto reports = run_suite(o.identity, cfg);
    if (o.format == "json") {
        emit(reports_json(reports, cfg).dump(2) + "\n", o.output);
    } else if (o.format == "table") {
        emit(reports_table(reports), o.output);
    } else {
        throw config_error("verify: format must be json or table");
    }
    const bool all = std::all_of(reports.begin(), reports.end(), [](const auto &r) { return r.passed; });
    return all ? ok : check_failed;
}

struct FourierOptions {
    std::string fn = "f";
    int k = 6;
    long long D = 5;
    int n = 10;
    double v0 = 0.9;
    int grid = 64;
    double tol = 1e-9;
    std::string output;
};

int cmd_fourier(const FourierOptions &o)
{
    CuspExpansion e;
    json cfg{{"fn", o.fn}, {"k", o.k}, {"n", o.n}, {"v0", o.v0}, {"grid", o.grid}, {"tol", o.tol}};
    if (o.fn == "zero") {
        e = fourier_coefficients([](const Point &) { return cplx{}; }, o.k, o.v0, o.n, o.grid, o.tol);
    } else {
        const Discriminant disc(o.D);
        cfg["D"] = o.D;
        if (o.fn == "f") {
            auto t = default_truncation(series_fn::f, o.k);
            if (o.k >= 4) t.stagnation_tol = 1e-13;
            cfg["stagnation_tol"] = t.stagnation_tol;
            e = fourier_coefficients([&](const Point &p) { return eval_f(o.k, disc, p, t).value; }, o.k, o.v0, o.n, o.grid, o.tol);
        } else if (o.fn == "g") {
            if (!(o.v0 > disc.sqrt() / 2)) throw config_error("fourier: g needs v0 > sqrt(D)/2");
            const auto t = default_truncation(series_fn::g, o.k);
            cfg["stagnation_tol"] = t.stagnation_tol;
            e = fourier_coefficients([&](const Point &p) { return eval_g(o.k, disc, p, t).value; }, o.k + 1, o.v0, o.n, o.grid, o.tol);
        } else {
            throw config_error("fourier: fn must be f, g or zero");
        }
    }
    json j = e;
    emit(json{{"schema_version", report_schema_version}, {"command", "fourier"}, {"config", cfg}, {"expansion", j}}.dump(2) + "\n", o.output);
    return ok;
}

struct GeodesicOptions {
    long long D = 5;
    std::string window = "-1:1:0:1.5";
    double min_radius = 0.05;
    std::string format = "csv";
    std::string output;
};

int cmd_geodesics(const GeodesicOptions &o)
{
    const Discriminant disc(o.D);
    const auto w = parse_colon_list(o.window, 4, "window");
    const GeodesicWindow win{w[0], w[1], w[2], w[3]};
    const auto forms = geodesics_in_window(disc, win, o.min_radius);
    if (o.format == "csv")
        emit(geodesics_csv(forms), o.output);
    else if (o.format == "svg")
        emit(geodesics_svg(forms, win), o.output);
    else
        throw config_error("geodesics: format must be csv or svg");
    return ok;
}

}  // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Locally harmonic Maass forms: evaluation, identity checks, Fourier extraction, geodesics"};
    app.require_subcommand(1);

    EvalOptions eo;
    auto *eval = app.add_subcommand("eval", "Evaluate f, g, F, G, the local polynomial P or c_inf");
    eval->add_option("--fn", eo.fn, "f | g | F | G | P | c_inf")->check(CLI::IsMember({"f", "g", "F", "G", "P", "c_inf"}));
    eval->add_option("--k", eo.k, "k >= 2");
    eval->add_option("--D", eo.D, "non-square discriminant");
    eval->add_option("--tau", eo.taus, "point u+vi (repeatable)");
    eval->add_option("--grid", eo.grid, "u0:u1:v0:v1:nu:nv");
    eval->add_option("--tol", eo.tol, "stagnation tolerance");
    eval->add_option("--initial-bound", eo.initial_bound, "first box bound");
    eval->add_option("--max-bound", eo.max_bound, "largest box bound");
    eval->add_option("--fixed-bound", eo.fixed_bound, "evaluate at this single bound");
    eval->add_flag("--richardson", eo.richardson, "extrapolate box sums with a 1/B tail");
    eval->add_option("--bound", eo.bound, "partial-sum bound for c_inf");
    eval->add_option("--jet-order", eo.jet_order, "jet order (F, G, P)");
    eval->add_option("--method", eo.method, "rows | box (f, g)");
    eval->add_option("--format", eo.format, "json | csv");
    eval->add_option("-o,--output", eo.output, "output file (default stdout)");

    VerifyOptions vo;
    auto *verify = app.add_subcommand("verify", "Check identities at seeded sample points");
    std::string ids = "all";
    for (const auto &n : identity_names()) ids += " | " + n;
    verify->add_option("identity", vo.identity, ids);
    verify->add_option("--k", vo.k, "k >= 2");
    verify->add_option("--D", vo.D, "non-square discriminant");
    verify->add_option("--points", vo.points, "number of sample points");
    verify->add_option("--tol", vo.tol, "override every tolerance");
    verify->add_option("--seed", vo.seed, "sample-point seed");
    verify->add_option("--bound", vo.bound, "paired truncation bound");
    verify->add_option("--format", vo.format, "json | table");
    verify->add_option("-o,--output", vo.output, "output file (default stdout)");

    FourierOptions fo;
    auto *fourier = app.add_subcommand("fourier", "Extract Fourier coefficients of f_{k,D} or g_{k+1,D}");
    fourier->add_option("--fn", fo.fn, "f | g | zero");
    fourier->add_option("--k", fo.k, "k");
    fourier->add_option("--D", fo.D, "non-square discriminant");
    fourier->add_option("--n", fo.n, "number of coefficients");
    fourier->add_option("--v0", fo.v0, "extraction height");
    fourier->add_option("--grid", fo.grid, "DFT points (> 2n)");
    fourier->add_option("--tol", fo.tol, "relative tolerance of the two-height check");
    fourier->add_option("-o,--output", fo.output, "output file (default stdout)");

    GeodesicOptions go;
    auto *geo = app.add_subcommand("geodesics", "Export the geodesics of E_D meeting a window");
    geo->add_option("--D", go.D, "non-square discriminant");
    geo->add_option("--window", go.window, "u0:u1:v0:v1");
    geo->add_option("--min-radius", go.min_radius, "smallest radius drawn");
    geo->add_option("--format", go.format, "csv | svg");
    geo->add_option("-o,--output", go.output, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? ok : bad_config;
    }

    try {
        if (*eval) return cmd_eval(eo);
        if (*verify) return cmd_verify(vo);
        if (*fourier) return cmd_fourier(fo);
        if (*geo) return cmd_geodesics(go);
    } catch (const config_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_config;
    } catch (const near_singular_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return singular;
    } catch (const convergence_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return no_convergence;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return bad_config;
    }
    return bad_config;
}
