// Command-line front end: enumeration, kernel data, curve tracing, gluing
// checks, boundary-value solutions and the exact excursion series, with JSON
// output throughout (CSV only for curve point dumps).
//
// Exit codes: 0 ok, 2 validation failure, 3 numeric failure.

#include <complex>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "trikernel/bvp.hpp"
#include "trikernel/checks.hpp"
#include "trikernel/json_io.hpp"

using namespace trikernel;

namespace {

int error_exit_code(const Error& e) {
    static const char* validation[] = {"InvalidArgument",  "HypothesisViolated",
                                       "StartOutsideDomain", "StepsTooLarge",
                                       "DegenerateModel",  "PoleAlreadyAtY2",
                                       "KernelZero",       "ConvergenceDomainViolated",
                                       "EvaluationAtPole", "UnboundedContour",
                                       "OnCurve",          "DivisionByZeroSeries"};
    for (const char* v : validation)
        if (e.code() == v) return 2;
    return 3;
}

void emit(const Json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
    }
}

double parse_t(const std::string& s, const StepSet& steps) {
    Rat r = parse_rational(s);
    double t = to_double(r);
    if (!(t > 0 && t < 1.0 / static_cast<double>(steps.size())))
        throw InvalidArgument("t must lie in (0, 1/|S|) = (0, 1/" +
                              std::to_string(steps.size()) + ")");
    return t;
}

Domain parse_domain(const std::string& d) {
    if (d == "3q" || d == "three-quadrant") return Domain::ThreeQuadrant;
    if (d == "quadrant" || d == "1q") return Domain::Quadrant;
    if (d == "lower-wedge" || d == "wedge") return Domain::LowerWedge;
    if (d == "plane" || d == "full") return Domain::FullPlane;
    throw InvalidArgument("unknown domain '" + d + "'");
}

Json poly_to_json(const Poly<double>& p) {
    Json a = Json::array();
    for (long k = 0; k <= p.degree(); ++k) a.push_back(p.coeff(static_cast<size_t>(k)));
    return a;
}

struct Options {
    std::string model, t_str = "0.1", domain = "3q", out, method = "thm2", y_str = "0";
    int n = 10, order = 24, n_points = 2048, max_iter = 400;
    bool all_layers = false, transform = false, circle = false, check_all = false;
    std::pair<int, int> start{0, 0};
};

int run_enumerate(const Options& o) {
    StepSet s = load_model(o.model);
    CountTable t = count_walks(s, parse_domain(o.domain), o.start, o.n);
    Json j = count_layer_to_json(t, o.n);
    j["model"] = step_set_to_json(s);
    j["domain"] = domain_name(t.domain());
    j["start"] = Json::array({o.start.first, o.start.second});
    if (o.all_layers) {
        Json layers = Json::array();
        for (int n = 0; n <= o.n; ++n) layers.push_back(count_layer_to_json(t, n));
        j["layers"] = layers;
    }
    emit(j, o.out);
    return 0;
}

int run_kernel(const Options& o) {
    StepSet s = load_model(o.model);
    if (o.transform) s = phi_transform(s);
    KernelData kd = build_kernel(s);
    double t = parse_t(o.t_str, s);
    Json j;
    j["model"] = step_set_to_json(s);
    j["t"] = t;
    j["a"] = poly_to_json(kd.a_num(t));
    j["b"] = poly_to_json(kd.b_num(t));
    j["c"] = poly_to_json(kd.c_num(t));
    j["d"] = poly_to_json(kd.d_num(t));
    j["at"] = poly_to_json(kd.at_num(t));
    j["bt"] = poly_to_json(kd.bt_num(t));
    j["ct"] = poly_to_json(kd.ct_num(t));
    j["dt"] = poly_to_json(kd.dt_num(t));
    BranchPointsNum bp = branch_points_numeric(kd, t);
    j["branch_points"]["x"] = Json::array({bp.x1, bp.x2, bp.x3});
    j["branch_points"]["x4"] = bp.x4 ? Json(*bp.x4) : Json("inf");
    j["branch_points"]["y"] = Json::array({bp.y1, bp.y2, bp.y3});
    j["branch_points"]["y4"] = bp.y4 ? Json(*bp.y4) : Json("inf");
    j["sqrt_d_positive_on"] = Json::array({bp.x2, bp.x3});
    emit(j, o.out);
    return 0;
}

int run_curve(const Options& o) {
    StepSet s = load_model(o.model);
    if (o.transform) s = phi_transform(s);
    KernelData kd = build_kernel(s);
    double t = parse_t(o.t_str, s);
    Contour c = trace_curve(kd, t, o.n_points);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!o.out.empty()) {
        file.open(o.out);
        os = &file;
    }
    (*os) << "# model=" << o.model << " t=" << t
          << " unbounded=" << (c.unbounded ? 1 : 0) << "\n";
    (*os) << "x_param,re_y,im_y\n";
    const double m = 0.5 * (c.bp.x1 + c.bp.x2), h = 0.5 * (c.bp.x2 - c.bp.x1);
    for (int k = 0; k < c.n; ++k) {
        double th = 2.0 * M_PI * k / c.n;
        Cplx z = c.pts[static_cast<size_t>(k)];
        if (!std::isfinite(z.real()) || std::abs(z) > 1e9) continue;
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", m + h * std::cos(th),
                      z.real(), z.imag());
        (*os) << buf;
    }
    return 0;
}

int run_gluing(const Options& o) {
    StepSet hat = load_model(o.model);
    ModelValidation v = validate(hat);
    if (!v.satisfies_H)
        throw HypothesisViolated("model must be symmetric without antidiagonal jumps");
    StepSet s = phi_transform(hat);
    KernelData kd = build_kernel(s);
    double t = parse_t(o.t_str, s);
    Contour curve = trace_curve(kd, t, o.n_points);
    if (curve.unbounded)
        throw UnboundedContour("transformed curve is unbounded; gluing checks need a "
                               "bounded curve");
    DiagonalEvaluator ev = build_evaluator(hat, t, {o.n_points, false});

    Json checks = Json::array();
    auto add = [&](const std::string& name, double residual, double tol) {
        Json c;
        c["name"] = name;
        c["max_residual"] = residual;
        c["tol"] = tol;
        c["pass"] = residual <= tol;
        checks.push_back(c);
    };
    bool weier = std::string(ev.w->kind()) == "weierstrass";
    double sym = 0;
    for (int k = 1; k <= 50; ++k) {
        Cplx y = curve.pts[(static_cast<size_t>(k) * curve.pts.size()) / 52];
        sym = std::max(sym, std::abs(ev.w->value(y) - ev.w->value(std::conj(y))));
    }
    add("gluing identification w(y) = w(conj y)", sym, weier ? 1e-6 : 1e-8);
    WOdeReport ode = check_w_ode(*ev.w, kd, t, 20);
    add("differential equation of w", ode.max_rel_residual, weier ? 1e-5 : 1e-7);
    if (o.check_all) {
        AntiTuttePair pair = anti_tutte_pair(ev.w, kd, t);
        double dec = 0, mod = 0;
        for (size_t k = 5; k < curve.pts.size() / 2; k += 41) {
            Cplx y = curve.pts[k];
            Cplx lhs = sqrt_dt_bvp(kd, t, std::conj(y)) / sqrt_dt_bvp(kd, t, y);
            Cplx rhs = pair.f(std::conj(y)) / pair.f(y);
            dec = std::max(dec, std::abs(lhs - rhs));
            mod = std::max(mod, std::abs(std::abs(pair.g(y)) - 1.0));
        }
        add("decoupling identity", dec, 1e-6);
        add("|g| = 1 on the curve", mod, 1e-6);
    }
    Json j;
    j["model"] = step_set_to_json(hat);
    j["transformed"] = step_set_to_json(s);
    j["t"] = t;
    j["gluing_kind"] = ev.w->kind();
    j["checks"] = checks;
    emit(j, o.out);
    for (const auto& c : checks)
        if (!c["pass"].get<bool>()) return 3;
    return 0;
}

int run_solve(const Options& o) {
    StepSet hat = load_model(o.model);
    double t = parse_t(o.t_str, hat);
    EvaluatorOptions opts;
    opts.n_contour = o.n_points;
    opts.deform_to_circle = o.circle;
    DiagonalEvaluator ev = build_evaluator(hat, t, opts);
    Cplx y;
    {
        auto comma = o.y_str.find(',');
        if (comma == std::string::npos) {
            y = Cplx(to_double(parse_rational(o.y_str)), 0);
        } else {
            y = Cplx(to_double(parse_rational(o.y_str.substr(0, comma))),
                     to_double(parse_rational(o.y_str.substr(comma + 1))));
        }
    }
    Json j;
    j["model"] = step_set_to_json(hat);
    j["t"] = t;
    j["y"] = Json::array({y.real(), y.imag()});
    j["index"] = ev.index;
    j["gluing_kind"] = ev.w->kind();
    if (o.method == "thm1") {
        Cplx v = theorem1_D(ev, y);
        j["method"] = "index-minus-one";
        j["value"] = Json::array({v.real(), v.imag()});
        j["contour"] = "curve";
    } else {
        CauchyIntegralResult r = theorem2_D_detailed(ev, y);
        j["method"] = "decoupled";
        j["value"] = Json::array({r.value.real(), r.value.imag()});
        j["error_estimate"] = r.error_estimate;
        j["contour"] = r.contour;
        j["contour_note"] = o.circle
                                ? "unit-circle deformation: valid when the integrand is "
                                  "analytic between the curve and the circle"
                                : "traced kernel curve";
    }
    j["n_points"] = o.n_points;
    emit(j, o.out);
    return 0;
}

int run_d0_series(const Options& o) {
    PuiseuxSeries d0 = theorem2_D0_series(o.order);
    Json j;
    j["model"] = "reverse-kreweras";
    j["order"] = o.order;
    j["series"] = series_to_json(d0.truncated(o.order * d0.ramification()));
    emit(j, o.out);
    return 0;
}

int run_group(const Options& o) {
    StepSet s = load_model(o.model);
    GroupOrder g = group_order(s, o.max_iter);
    Json j;
    j["model"] = step_set_to_json(s);
    if (g.finite)
        j["order"] = g.order;
    else
        j["infinite_bound"] = g.bound;
    emit(j, o.out);
    return 0;
}

int run_phi(const Options& o) {
    StepSet s = load_model(o.model);
    Json j;
    j["model"] = step_set_to_json(s);
    j["image"] = step_set_to_json(phi_transform(s));
    j["image_small_steps"] = phi_transform(s).small_steps();
    emit(j, o.out);
    return 0;
}

int run_verify(const Options& o) {
    StepSet hat = load_model(o.model);
    double t = parse_t(o.t_str, hat);
    std::vector<CheckResult> checks = verify_model(hat, t, std::min(o.order, 10));
    Json arr = Json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        Json e;
        e["name"] = c.name;
        e["residual"] = c.residual;
        e["tol"] = c.tol;
        e["pass"] = c.pass;
        if (!c.note.empty()) e["note"] = c.note;
        arr.push_back(e);
        all_pass = all_pass && c.pass;
    }
    Json j;
    j["model"] = step_set_to_json(hat);
    j["t"] = t;
    j["checks"] = arr;
    j["pass"] = all_pass;
    emit(j, o.out);
    return all_pass ? 0 : 3;
}

int run_models(const Options& o) {
    Json arr = Json::array();
    for (const auto& name : model_preset_names()) {
        Json e;
        e["name"] = name;
        e["steps"] = step_set_to_json(*model_preset(name))["steps"];
        arr.push_back(e);
    }
    Json j;
    j["presets"] = arr;
    emit(j, o.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-quadrant lattice walks: exact enumeration and the kernel/"
                 "boundary-value analytic pipeline"};
    app.require_subcommand(1);
    Options o;

    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("--model", o.model, "preset name or JSON file")->required();
    };
    auto add_t = [&](CLI::App* cmd) {
        cmd->add_option("--t", o.t_str, "series variable, rational or decimal (in (0,1/|S|))");
    };
    auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", o.out, "output file"); };

    auto* c_enum = app.add_subcommand("enumerate", "exact walk counts in a domain");
    add_model(c_enum);
    c_enum->add_option("--domain", o.domain, "3q | quadrant | lower-wedge | plane");
    c_enum->add_option("--n", o.n, "number of steps")->required();
    c_enum->add_option("--start-i", o.start.first, "start abscissa");
    c_enum->add_option("--start-j", o.start.second, "start ordinate");
    c_enum->add_flag("--all-layers", o.all_layers, "emit every layer up to n");
    add_out(c_enum);

    auto* c_kernel = app.add_subcommand("kernel", "kernel coefficients and branch points");
    add_model(c_kernel);
    add_t(c_kernel);
    c_kernel->add_flag("--transform", o.transform, "apply the change of variable first");
    bool json_flag = false;
    c_kernel->add_flag("--json", json_flag, "(default) JSON output");
    add_out(c_kernel);

    auto* c_curve = app.add_subcommand("curve", "trace the kernel curve to CSV");
    add_model(c_curve);
    add_t(c_curve);
    c_curve->add_flag("--transform", o.transform, "apply the change of variable first");
    c_curve->add_option("--n-points", o.n_points, "number of samples");
    add_out(c_curve);

    auto* c_gluing = app.add_subcommand("gluing",
                                        "conformal gluing checks (transformed model)");
    add_model(c_gluing);
    add_t(c_gluing);
    c_gluing->add_option("--n-points", o.n_points, "curve samples");
    std::string check_what = "all";
    c_gluing->add_option("--check", check_what, "all | basic");
    add_out(c_gluing);

    auto* c_solve = app.add_subcommand("solve", "diagonal section value at a point");
    add_model(c_solve);
    add_t(c_solve);
    c_solve->add_option("--method", o.method, "thm1 | thm2");
    c_solve->add_option("--y", o.y_str, "evaluation point, re or re,im");
    c_solve->add_option("--n-points", o.n_points, "contour samples");
    c_solve->add_flag("--circle", o.circle, "deform the contour to the unit circle");
    add_out(c_solve);

    auto* c_d0 = app.add_subcommand("d0-series", "exact diagonal excursion series "
                                                 "(reverse Kreweras)");
    c_d0->add_option("--order", o.order, "truncation order in t");
    add_out(c_d0);

    auto* c_verify = app.add_subcommand("verify", "run the per-model property suite");
    add_model(c_verify);
    add_t(c_verify);
    c_verify->add_option("--order", o.order, "series order for the counting identities");
    bool verify_all = false;
    c_verify->add_flag("--all", verify_all, "(default) run everything");
    add_out(c_verify);

    auto* c_group = app.add_subcommand("group", "order of the kernel group");
    add_model(c_group);
    c_group->add_option("--max-iter", o.max_iter, "orbit iteration cap");
    add_out(c_group);

    auto* c_phi = app.add_subcommand("phi", "image of a model under the change of variable");
    add_model(c_phi);
    add_out(c_phi);

    auto* c_models = app.add_subcommand("models", "list named presets");
    add_out(c_models);

    CLI11_PARSE(app, argc, argv);
    o.check_all = (check_what == "all");

    try {
        if (app.got_subcommand(c_enum)) return run_enumerate(o);
        if (app.got_subcommand(c_kernel)) return run_kernel(o);
        if (app.got_subcommand(c_curve)) return run_curve(o);
        if (app.got_subcommand(c_gluing)) return run_gluing(o);
        if (app.got_subcommand(c_solve)) return run_solve(o);
        if (app.got_subcommand(c_d0)) return run_d0_series(o);
        if (app.got_subcommand(c_verify)) return run_verify(o);
        if (app.got_subcommand(c_group)) return run_group(o);
        if (app.got_subcommand(c_phi)) return run_phi(o);
        if (app.got_subcommand(c_models)) return run_models(o);
    } catch (const Error& e) {
        Json j;
        j["error"]["code"] = e.code();
        j["error"]["message"] = e.what();
        std::cerr << j.dump(2) << "\n";
        return error_exit_code(e);
    } catch (const std::exception& e) {
        Json j;
        j["error"]["code"] = "Internal";
        j["error"]["message"] = e.what();
        std::cerr << j.dump(2) << "\n";
        return 3;
    }
    return 0;
}
