#include "specmoment/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "specmoment/moment_engine.hpp"
#include "specmoment/reconstruction.hpp"

namespace specmoment::cli {

namespace {

using nlohmann::json;

std::string fmt_g(double v, int sig) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", sig, v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error("cannot parse " + what + " value '" + s + "'");
    }
}

int to_int(const std::string& s, const std::string& what) {
    const double v = to_double(s, what);
    if (v != std::floor(v)) throw Error(what + " must be an integer, got '" + s + "'");
    return static_cast<int>(v);
}

// name[:key=val,key=val] mini-grammar shared by --model and --function.
struct Descriptor {
    std::string name;
    std::map<std::string, std::string> params;
};

Descriptor parse_descriptor(const std::string& s) {
    Descriptor d;
    const auto colon = s.find(':');
    d.name = s.substr(0, colon);
    if (colon != std::string::npos) {
        for (const auto& kv : split(s.substr(colon + 1), ',')) {
            if (kv.empty()) continue;
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw Error("descriptor parameter '" + kv + "' is not key=value");
            d.params[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
    }
    return d;
}

// All flags for every subcommand; presence tracked through CLI11 counts
// so config-file values only fill unset flags.
struct Flags {
    std::string model = "exponential";
    std::string function;
    std::string config_path;
    std::string format;
    std::string coeffs;
    std::string grid;
    std::string times;
    std::string nlist;
    double beta = 2.0, hbar = 1.0, radius = 1.0, tau0 = 1.0;
    double band = 1.0, time = 1.0;
    int degree = 2;
    double tau = 0.0, rho1 = 0.0, rho2 = 0.0;
    double tol = 1e-10, sigma = 1.0;
    int nodes = 0, laguerre = 40;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--model", f.model, "model descriptor name[:key=val,...]");
    sub->add_option("--function", f.function, "test-function descriptor name[:key=val,...]");
    sub->add_option("--config", f.config_path, "JSON config supplying any of the flags");
    sub->add_option("--format", f.format, "output format: plain, csv or json")
        ->check(CLI::IsMember({"plain", "csv", "json"}));
    sub->add_option("--beta", f.beta, "free-particle inverse temperature");
    sub->add_option("--hbar", f.hbar, "free-particle hbar");
    sub->add_option("--r", f.radius, "uniform-model support radius");
    sub->add_option("--tau0", f.tau0, "strip-model analyticity radius");
    sub->add_option("--band", f.band, "sinc/bump band limit");
    sub->add_option("--time", f.time, "complex-exponential time parameter");
    sub->add_option("--degree", f.degree, "monomial degree");
    sub->add_option("--coeffs", f.coeffs, "polynomial coefficients a0,a1,...");
    sub->add_option("--tau", f.tau, "contour radius override");
    sub->add_option("--rho1", f.rho1, "inner annulus ratio override");
    sub->add_option("--rho2", f.rho2, "outer annulus ratio override");
    sub->add_option("--nodes", f.nodes, "contour node count override");
    sub->add_option("--laguerre", f.laguerre, "outer quadrature order");
    sub->add_option("--tol", f.tol, "target tolerance for automatic node selection");
}

// Post-merge view of everything a subcommand needs.
struct Resolved {
    models::SpectralModel model = models::SpectralModel::exponential();
    std::optional<engine::TestFunction> function;
    engine::EngineOptions opts;
    std::string format;
    double sigma = 1.0;
    std::vector<double> grid;
    std::vector<double> times;
    std::vector<int> nlist;
};

bool flag_set(const CLI::App* sub, const std::string& name) {
    return sub->count(name) > 0;
}

void merge_config(const CLI::App* sub, Flags& f) {
    if (f.config_path.empty()) return;
    std::ifstream in(f.config_path);
    if (!in) throw Error("cannot open config file '" + f.config_path + "'");
    json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw Error("config parse failure: " + std::string(e.what()));
    }

    const auto take_str = [&](const char* key, std::string& dst, const std::string& flag) {
        if (cfg.contains(key) && !flag_set(sub, flag)) dst = cfg[key].get<std::string>();
    };
    const auto take_num = [&](const char* key, double& dst, const std::string& flag) {
        if (cfg.contains(key) && !flag_set(sub, flag)) dst = cfg[key].get<double>();
    };

    // model/function entries may be descriptor strings or {name, params} objects
    if (cfg.contains("model") && !flag_set(sub, "--model")) {
        if (cfg["model"].is_string()) {
            f.model = cfg["model"].get<std::string>();
        } else {
            std::string desc = cfg["model"].value("name", "exponential");
            for (const auto& [k, v] : cfg["model"].items())
                if (k != "name") desc += (desc.find(':') == std::string::npos ? ":" : ",") +
                                         k + "=" + fmt_g(v.get<double>(), 17);
            f.model = desc;
        }
    }
    if (cfg.contains("function") && !flag_set(sub, "--function")) {
        if (cfg["function"].is_string()) {
            f.function = cfg["function"].get<std::string>();
        } else {
            std::string desc = cfg["function"].value("name", "");
            if (cfg["function"].contains("coeffs")) {
                std::string cs;
                for (const auto& c : cfg["function"]["coeffs"])
                    cs += (cs.empty() ? "" : ",") + fmt_g(c.get<double>(), 17);
                if (!flag_set(sub, "--coeffs")) f.coeffs = cs;
            }
            for (const auto& [k, v] : cfg["function"].items())
                if (k != "name" && k != "coeffs")
                    desc += (desc.find(':') == std::string::npos ? ":" : ",") + k + "=" +
                            fmt_g(v.get<double>(), 17);
            f.function = desc;
        }
    }
    take_str("format", f.format, "--format");
    take_str("grid", f.grid, "--grid");
    take_str("times", f.times, "--times");
    take_str("n_list", f.nlist, "--n-list");
    take_num("tau", f.tau, "--tau");
    take_num("rho1", f.rho1, "--rho1");
    take_num("rho2", f.rho2, "--rho2");
    take_num("tol", f.tol, "--tol");
    take_num("sigma", f.sigma, "--sigma");
    if (cfg.contains("nodes") && !flag_set(sub, "--nodes")) f.nodes = cfg["nodes"].get<int>();
    if (cfg.contains("laguerre") && !flag_set(sub, "--laguerre"))
        f.laguerre = cfg["laguerre"].get<int>();
}

double param_or(const Descriptor& d, std::initializer_list<const char*> keys, double fallback,
                bool have_flag, double flag_value) {
    if (have_flag) return flag_value;
    for (const char* k : keys) {
        const auto it = d.params.find(k);
        if (it != d.params.end()) return to_double(it->second, k);
    }
    return fallback;
}

models::SpectralModel build_model(const CLI::App* sub, const Flags& f) {
    const Descriptor d = parse_descriptor(f.model);
    std::map<std::string, double> params;
    for (const auto& [k, v] : d.params) params[k] = to_double(v, "model parameter " + k);
    if (flag_set(sub, "--beta")) params["beta"] = f.beta;
    if (flag_set(sub, "--hbar")) params["hbar"] = f.hbar;
    if (flag_set(sub, "--r")) params["r"] = f.radius;
    if (flag_set(sub, "--tau0")) params["tau0"] = f.tau0;
    return models::SpectralModel::from_descriptor(d.name, params);
}

engine::TestFunction build_function(const CLI::App* sub, const Flags& f) {
    if (f.function.empty()) throw Error("missing --function (or config 'function')");
    const Descriptor d = parse_descriptor(f.function);
    const std::string& n = d.name;
    if (n == "exp" || n == "ce")
        return pw::PaleyWiener::complex_exponential(
            param_or(d, {"t", "time"}, 1.0, flag_set(sub, "--time"), f.time));
    if (n == "sinc")
        return pw::PaleyWiener::sinc(
            param_or(d, {"band", "b"}, 1.0, flag_set(sub, "--band"), f.band));
    if (n == "bump")
        return pw::PaleyWiener::bump_transform(
            param_or(d, {"band", "b"}, 1.0, flag_set(sub, "--band"), f.band));
    if (n == "mono" || n == "monomial")
        return pw::PaleyWiener::monomial(static_cast<int>(
            param_or(d, {"k", "degree"}, 2.0, flag_set(sub, "--degree"), f.degree)));
    if (n == "poly" || n == "polynomial") {
        std::string cs = f.coeffs;
        const auto it = d.params.find("coeffs");
        if (cs.empty() && it != d.params.end()) cs = it->second;
        if (cs.empty()) throw Error("polynomial needs --coeffs a0,a1,... (or coeffs=a0|a1|...)");
        std::vector<double> a;
        for (const auto& part : split(cs, cs.find('|') != std::string::npos ? '|' : ','))
            a.push_back(to_double(part, "coefficient"));
        return pw::PaleyWiener::polynomial(std::move(a));
    }
    if (n == "one") return pw::PaleyWiener::polynomial({1.0});
    if (n == "gauss") return engine::gauss_function();
    throw Error("unknown function '" + n + "'");
}

engine::EngineOptions build_opts(const CLI::App* sub, const Flags& f) {
    engine::EngineOptions o;
    if (flag_set(sub, "--tau") || f.tau > 0.0) o.tau = f.tau;
    if (flag_set(sub, "--rho1") || f.rho1 > 0.0) o.rho1 = f.rho1;
    if (flag_set(sub, "--rho2") || f.rho2 > 0.0) o.rho2 = f.rho2;
    if (flag_set(sub, "--nodes") || f.nodes > 0) o.n_nodes = f.nodes;
    o.tolerance = f.tol;
    o.laguerre_order = f.laguerre;
    return o;
}

std::vector<double> parse_grid(const std::string& s) {
    if (s.empty()) throw Error("missing --grid (or config 'grid')");
    std::vector<double> g;
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw Error("grid must be start:stop:step");
        const double a = to_double(parts[0], "grid start");
        const double b = to_double(parts[1], "grid stop");
        const double h = to_double(parts[2], "grid step");
        if (!(h > 0.0)) throw Error("grid step must be positive");
        if ((b - a) / h > 1e6) throw Error("grid too fine");
        for (double x = a; x <= b + 1e-9 * std::max(1.0, std::abs(b)); x += h) g.push_back(x);
    } else {
        for (const auto& part : split(s, ',')) g.push_back(to_double(part, "grid point"));
    }
    return g;
}

void echo_plan(std::ostream& err, const engine::ExecutionPlan& plan) {
    err << "# plan: route=" << engine::route_name(plan.route)
        << " tau=" << fmt_g(plan.contour.tau, 7) << " rho1=" << fmt_g(plan.contour.rho1, 7)
        << " rho2=" << fmt_g(plan.contour.rho2, 7) << " n_nodes=" << plan.contour.n_nodes
        << " -- " << plan.justification << "\n";
}

engine::MomentResult dispatch(const models::SpectralModel& model,
                              const engine::TestFunction& f,
                              const engine::ExecutionPlan& plan,
                              const engine::EngineOptions& opts) {
    engine::MomentResult res;
    if (plan.route == engine::Route::FastPath) {
        res = engine::moment_fast(model, f, plan.contour);
    } else {
        int order = opts.laguerre_order;
        if (plan.route == engine::Route::BranchCutAnalytic ||
            plan.route == engine::Route::StripBandLimited)
            order = std::max(order, 64);
        res = engine::moment_iterated(model, f, plan.contour, order);
    }
    res.plan = plan;
    return res;
}

int cmd_moment(const CLI::App* sub, Flags& f, std::ostream& out, std::ostream& err) {
    merge_config(sub, f);
    const auto model = build_model(sub, f);
    const auto func = build_function(sub, f);
    const auto opts = build_opts(sub, f);
    const auto plan = engine::route_validity(model, func, opts);
    echo_plan(err, plan);
    const auto res = dispatch(model, func, plan, opts);
    const double value = res.real_value();
    const std::string format = f.format.empty() ? "plain" : f.format;
    if (format == "plain") {
        out << "route = " << engine::route_name(res.plan.route) << "\n"
            << "nodes = " << res.nodes_used << "\n"
            << "value = " << fmt_g(value, 7) << "\n";
        if (res.a_priori_bound) out << "bound = " << fmt_g(*res.a_priori_bound, 7) << "\n";
    } else if (format == "csv") {
        out << "value,apriori_bound,route,n_nodes\n" << fmt_g(value, 17) << ',';
        if (res.a_priori_bound) out << fmt_g(*res.a_priori_bound, 17);
        out << ',' << engine::route_name(res.plan.route) << ',' << res.nodes_used << "\n";
    } else {
        out << "{\"value\":" << fmt_g(value, 17) << ",\"apriori_bound\":"
            << (res.a_priori_bound ? fmt_g(*res.a_priori_bound, 17) : "null")
            << ",\"route\":\"" << engine::route_name(res.plan.route)
            << "\",\"n_nodes\":" << res.nodes_used << "}\n";
    }
    return 0;
}

int cmd_validate(const CLI::App* sub, Flags& f, std::ostream& out, std::ostream&) {
    merge_config(sub, f);
    const auto model = build_model(sub, f);
    const auto func = build_function(sub, f);
    const auto opts = build_opts(sub, f);
    try {
        const auto plan = engine::route_validity(model, func, opts);
        out << "route = " << engine::route_name(plan.route) << "\n"
            << "justification = " << plan.justification << "\n"
            << "contour: tau = " << fmt_g(plan.contour.tau, 7)
            << ", rho1 = " << fmt_g(plan.contour.rho1, 7)
            << ", rho2 = " << fmt_g(plan.contour.rho2, 7)
            << ", n_nodes = " << plan.contour.n_nodes << "\n";
        return 0;
    } catch (const NoValidRoute& e) {
        out << e.what() << "\n";
        return 2;
    }
}

int cmd_spectrum(const CLI::App* sub, Flags& f, std::ostream& out, std::ostream& err) {
    merge_config(sub, f);
    const auto model = build_model(sub, f);
    const auto func = build_function(sub, f);
    const auto* kernel = std::get_if<pw::PaleyWiener>(&func);
    if (!kernel) throw Error("spectrum kernel must be one of the band-limited kinds");
    if (!(f.sigma > 0.0)) throw Error("--sigma must be positive");
    const auto opts = build_opts(sub, f);
    const auto grid = parse_grid(f.grid);
    const auto scan = recon::spectrum_scan(model, *kernel, grid, f.sigma, opts);

    size_t failures = 0;
    for (const auto& p : scan.points) {
        if (!p.error.empty()) {
            ++failures;
            err << "# point omega0=" << fmt_g(p.omega0, 7) << ": " << p.error << "\n";
        }
    }
    for (const auto& p : scan.points) {
        if (p.error.empty()) {
            err << "# plan: route=" << p.route << " n_nodes=" << p.nodes
                << " sigma=" << fmt_g(p.sigma, 7) << "\n";
            break;
        }
    }
    const std::string format = f.format.empty() ? "csv" : f.format;
    if (format == "csv") {
        out << recon::scan_to_csv(scan);
    } else if (format == "json") {
        out << recon::scan_to_json(scan) << "\n";
    } else {
        for (const auto& p : scan.points) {
            out << "omega0 = " << fmt_g(p.omega0, 7) << "  value = "
                << (p.value ? fmt_g(*p.value, 7) : "n/a") << "  route = " << p.route << "\n";
        }
    }
    if (!scan.points.empty() && failures == scan.points.size()) return 2;
    return 0;
}

int cmd_reconstruct(const CLI::App* sub, Flags& f, std::ostream& out, std::ostream& err) {
    merge_config(sub, f);
    const auto model = build_model(sub, f);
    const auto opts = build_opts(sub, f);
    if (f.times.empty()) throw Error("missing --times (or config 'times')");
    std::vector<double> times;
    for (const auto& part : split(f.times, ',')) times.push_back(to_double(part, "time"));

    struct Row {
        double t;
        engine::MomentResult res;
    };
    std::vector<Row> rows;
    for (double t : times) rows.push_back({t, recon::correlation_reconstruct(model, t, opts)});
    if (!rows.empty()) echo_plan(err, rows.front().res.plan);

    const std::string format = f.format.empty() ? "csv" : f.format;
    if (format == "csv") {
        out << "t,value_re,value_im,route,n_nodes\n";
        for (const auto& r : rows)
            out << fmt_g(r.t, 17) << ',' << fmt_g(r.res.value.real(), 17) << ','
                << fmt_g(r.res.value.imag(), 17) << ',' << engine::route_name(r.res.plan.route)
                << ',' << r.res.nodes_used << "\n";
    } else if (format == "json") {
        out << "[";
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i) out << ",";
            out << "{\"t\":" << fmt_g(rows[i].t, 17)
                << ",\"value_re\":" << fmt_g(rows[i].res.value.real(), 17)
                << ",\"value_im\":" << fmt_g(rows[i].res.value.imag(), 17) << ",\"route\":\""
                << engine::route_name(rows[i].res.plan.route)
                << "\",\"n_nodes\":" << rows[i].res.nodes_used << "}";
        }
        out << "]\n";
    } else {
        for (const auto& r : rows)
            out << "t = " << fmt_g(r.t, 7) << "  value = " << fmt_g(r.res.value.real(), 7)
                << (std::abs(r.res.value.imag()) > 1e-12
                        ? " + " + fmt_g(r.res.value.imag(), 7) + "i"
                        : "")
                << "  route = " << engine::route_name(r.res.plan.route) << "\n";
    }
    return 0;
}

int cmd_converge(const CLI::App* sub, Flags& f, std::ostream& out, std::ostream& err) {
    merge_config(sub, f);
    const auto model = build_model(sub, f);
    const auto func = build_function(sub, f);
    engine::EngineOptions opts = build_opts(sub, f);
    if (f.nlist.empty()) throw Error("missing --n-list (or config 'n_list')");
    std::vector<int> ns;
    for (const auto& part : split(f.nlist, ',')) ns.push_back(to_int(part, "node count"));
    if (ns.empty()) throw Error("--n-list must name at least one node count");

    engine::EngineOptions probe = opts;
    probe.n_nodes.reset();
    const auto plan = engine::route_validity(model, func, probe);
    if (plan.route != engine::Route::FastPath)
        throw NoValidRoute("converge studies the collapsed fast route; the router selected " +
                           std::string(engine::route_name(plan.route)));
    echo_plan(err, plan);

    const int n_ref = std::min(8192, 2 * *std::max_element(ns.begin(), ns.end()));
    engine::EngineOptions ref_opts = opts;
    ref_opts.n_nodes = n_ref;
    const auto ref =
        engine::moment_fast(model, func, engine::route_validity(model, func, ref_opts).contour);

    out << "n_nodes,value,abs_error,apriori_bound,route\n";
    for (int n : ns) {
        engine::EngineOptions row_opts = opts;
        row_opts.n_nodes = n;
        const auto row_plan = engine::route_validity(model, func, row_opts);
        const auto res = engine::moment_fast(model, func, row_plan.contour);
        out << n << ',' << fmt_g(res.real_value(), 17) << ','
            << fmt_g(std::abs(res.value - ref.value), 17) << ','
            << fmt_g(res.a_priori_bound.value_or(0.0), 17) << ','
            << engine::route_name(res.plan.route) << "\n";
    }
    return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"generalized moments of spectral distributions from short-time correlation data"};
    app.name("specmoment");
    app.require_subcommand(1);

    Flags f;
    auto* mom = app.add_subcommand("moment", "compute one generalized moment");
    auto* spec = app.add_subcommand("spectrum", "scan the smoothed spectrum on a grid");
    auto* rec = app.add_subcommand("reconstruct", "reconstruct the correlation at given times");
    auto* conv = app.add_subcommand("converge", "node-count convergence study (fast path)");
    auto* val = app.add_subcommand("validate", "print the execution plan or the rejection");
    for (auto* sub : {mom, spec, rec, conv, val}) add_common(sub, f);
    spec->add_option("--grid", f.grid, "frequency grid start:stop:step or comma list");
    spec->add_option("--sigma", f.sigma, "resolution parameter");
    rec->add_option("--times", f.times, "comma-separated times");
    conv->add_option("--n-list", f.nlist, "comma-separated node counts");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        if (sub == mom) return cmd_moment(sub, f, out, err);
        if (sub == spec) return cmd_spectrum(sub, f, out, err);
        if (sub == rec) return cmd_reconstruct(sub, f, out, err);
        if (sub == conv) return cmd_converge(sub, f, out, err);
        return cmd_validate(sub, f, out, err);
    } catch (const NoValidRoute& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace specmoment::cli
