#include "specmoment/moment_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

namespace specmoment::engine {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double factorial(int k) {
    double v = 1.0;
    for (int i = 2; i <= k; ++i) v *= i;
    return v;
}

// Phi of a band-limited test function (never valid for EntireFunction).
cplx phi_tf(const TestFunction& f, cplx z) {
    if (const auto* p = std::get_if<pw::PaleyWiener>(&f)) return pw::phi_eval(*p, z);
    if (const auto* s = std::get_if<pw::ShiftScale>(&f)) return pw::phi_eval(*s, z);
    throw DomainError("phi_tf: entire test functions have no transform-side Phi");
}

cplx transform_tf(const TestFunction& f, const std::function<cplx(double)>& K) {
    if (const auto* p = std::get_if<pw::PaleyWiener>(&f)) return pw::transform_integral(*p, K);
    if (const auto* s = std::get_if<pw::ShiftScale>(&f)) return pw::transform_integral(*s, K);
    throw DomainError("transform_tf: entire test functions have no integrable transform");
}

// One trapezoidal pass of P_f(s) on |z| = tau (origin-centered circle).
cplx pf_pass(const models::SpectralModel& model, const TestFunction& f, double s,
             double tau, int n) {
    const cplx mi(0.0, -1.0);
    return quad::trapezoid_circle(
        [&](cplx z) { return eval(f, s / z) * model.correlation_at(mi * z) / z; }, tau, n);
}

// Node-doubled P_f(s) on a fixed circle.  floor_abs absorbs the outer Laguerre
// weight so deep refinement is not wasted where e^{-s} already kills the node.
cplx pf_zplane(const models::SpectralModel& model, const TestFunction& f, double s,
               double tau, int n0, double floor_abs, int& nodes_seen) {
    cplx prev = pf_pass(model, f, s, tau, n0);
    for (int n = 2 * n0; n <= 16384; n *= 2) {
        const cplx cur = pf_pass(model, f, s, tau, n);
        nodes_seen = std::max(nodes_seen, n);
        if (std::abs(cur - prev) <= 1e-13 * std::abs(cur) + floor_abs) return cur;
        prev = cur;
    }
    return prev;  // outer weights damp any residual
}

struct RejectionList {
    std::vector<std::string> reasons;
    void add(std::string r) { reasons.push_back(std::move(r)); }
    std::string join() const {
        std::string all = "no valid route:";
        for (const auto& r : reasons) all += "\n  - " + r;
        return all;
    }
};

std::string fmt_num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Sampled maximum of |Phi_f(1/z) C(-iz) / z| on |z| = r at 4n points, times 1.5.
double sampled_max(const models::SpectralModel& model, const TestFunction& f, double r,
                   int n) {
    const cplx mi(0.0, -1.0);
    const int samples = 4 * n;
    double m = 0.0;
    for (int k = 0; k < samples; ++k) {
        const cplx z = std::polar(r, kTwoPi * k / samples);
        m = std::max(m, std::abs(phi_tf(f, 1.0 / z) * model.correlation_at(mi * z) / z));
    }
    return 1.5 * m;
}

void validate_fast_contour(double band, double tau0, const quad::ContourConfig& c) {
    std::ostringstream os;
    if (!(c.rho1 > 0.0 && c.rho1 < 1.0 && c.rho2 > 1.0)) {
        os << "annulus radii must satisfy 0 < rho1 < 1 < rho2 (got rho1 = " << c.rho1
           << ", rho2 = " << c.rho2 << ")";
        throw InvalidAnnulus(os.str());
    }
    if (!(band < c.rho1 * c.tau)) {
        os << "band limit " << band << " must lie below rho1*tau = " << c.rho1 * c.tau;
        throw InvalidAnnulus(os.str());
    }
    if (!(c.rho2 * c.tau < tau0)) {
        os << "rho2*tau = " << c.rho2 * c.tau << " must lie below tau0 = " << tau0;
        throw InvalidAnnulus(os.str());
    }
    if (c.n_nodes < 2) throw InvalidAnnulus("fast path needs at least 2 nodes");
}

// Fast-path bound for a candidate node count.
double fast_bound(const models::SpectralModel& model, const TestFunction& f,
                  const quad::ContourConfig& c) {
    const double m1 = sampled_max(model, f, c.rho1 * c.tau, c.n_nodes);
    const double m2 = sampled_max(model, f, c.rho2 * c.tau, c.n_nodes);
    return error_bound(m1, m2, c.tau, c.rho1, c.rho2, c.n_nodes - 1);
}

// Shifted-circle representation of P_f(s): the contour in the complex time
// plane is |theta - 1/2| = r, and F(theta) is the transform-side pairing of
// f_hat with C(theta * kappa).  F values are cached across Laguerre nodes
// because refinement levels revisit the same angles.
class FPlane {
  public:
    FPlane(const models::SpectralModel& model, const TestFunction& f, double r)
        : model_(model), f_(f), r_(r) {}

    cplx pf(double s, int n0, double floor_abs, int& nodes_seen) {
        cplx prev = pass(s, n0);
        for (int n = 2 * n0; n <= 8192; n *= 2) {
            const cplx cur = pass(s, n);
            nodes_seen = std::max(nodes_seen, n);
            if (std::abs(cur - prev) <= 1e-13 * std::abs(cur) + floor_abs) return cur;
            prev = cur;
        }
        return prev;
    }

  private:
    cplx pass(double s, int n) {
        cplx acc = 0.0;
        for (int k = 0; k < n; ++k) {
            const cplx rim = std::polar(r_, kTwoPi * k / n);
            const cplx theta = 0.5 + rim;
            acc += f_value(n, k) * std::exp(s / theta) / theta * rim;
        }
        return acc / static_cast<double>(n);
    }

    cplx f_value(int n, int k) {
        const int g = std::gcd(n, k == 0 ? n : k);
        const auto key = std::make_pair(n / g, k / g);
        const auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const cplx theta = 0.5 + std::polar(r_, kTwoPi * k / n);
        const cplx val =
            transform_tf(f_, [&](double kap) { return model_.correlation_at(theta * kap); });
        cache_.emplace(key, val);
        return val;
    }

    const models::SpectralModel& model_;
    const TestFunction& f_;
    double r_;
    std::map<std::pair<int, int>, cplx> cache_;
};

}  // namespace

const char* route_name(Route r) {
    switch (r) {
        case Route::FastPath: return "FastPath";
        case Route::CompactSupport: return "CompactSupport";
        case Route::BranchCutAnalytic: return "BranchCutAnalytic";
        case Route::StripBandLimited: return "StripBandLimited";
    }
    return "?";
}

EntireFunction gauss_function() {
    return {"gauss", [](cplx z) { return std::exp(-0.5 * z * z); }, 2.0};
}

bool is_band_limited(const TestFunction& f) {
    return !std::holds_alternative<EntireFunction>(f);
}

double band_limit(const TestFunction& f) {
    if (const auto* p = std::get_if<pw::PaleyWiener>(&f)) return p->band_limit();
    if (const auto* s = std::get_if<pw::ShiftScale>(&f)) return s->band_limit();
    throw DomainError("band_limit: entire test functions are not band-limited");
}

cplx eval(const TestFunction& f, cplx z) {
    if (const auto* p = std::get_if<pw::PaleyWiener>(&f)) return (*p)(z);
    if (const auto* s = std::get_if<pw::ShiftScale>(&f)) return (*s)(z);
    return std::get<EntireFunction>(f).eval(z);
}

std::string describe(const TestFunction& f) {
    if (const auto* p = std::get_if<pw::PaleyWiener>(&f)) return p->describe();
    if (const auto* s = std::get_if<pw::ShiftScale>(&f)) return s->describe();
    return "entire(" + std::get<EntireFunction>(f).name + ")";
}

double MomentResult::real_value() const {
    if (std::abs(value.imag()) > 1e-10 * (1.0 + std::abs(value)))
        throw Error("moment imaginary residue " + fmt_num(std::abs(value.imag())) +
                    " exceeds tolerance; value is not real");
    return value.real();
}

ExecutionPlan route_validity(const models::SpectralModel& model, const TestFunction& f,
                             const EngineOptions& opts) {
    const double tau0 = model.tau0();
    RejectionList rejected;

    // Fast path: band limit strictly inside the analyticity radius.
    if (!is_band_limited(f)) {
        rejected.add("fast path: test function is not band-limited");
    } else if (const double b = band_limit(f); !(b < tau0)) {
        rejected.add("fast path: band limit " + fmt_num(b) + " >= tau0 " + fmt_num(tau0));
    } else {
        ExecutionPlan plan;
        plan.route = Route::FastPath;
        quad::ContourConfig& c = plan.contour;
        c.tau = opts.tau.value_or(std::isinf(tau0) ? std::max(1.0, 2.0 * b)
                                                   : 0.5 * (b + tau0));
        c.rho1 = opts.rho1.value_or(0.5 * (b / c.tau + 1.0));
        c.rho2 = opts.rho2.value_or(std::isinf(tau0) ? 2.0 : 0.5 * (1.0 + tau0 / c.tau));
        validate_fast_contour(b, tau0, c);
        if (opts.n_nodes) {
            c.n_nodes = *opts.n_nodes;
        } else {
            c.n_nodes = 8;
            while (c.n_nodes < 4096 && fast_bound(model, f, c) >= opts.tolerance)
                c.n_nodes = std::min(4096, std::max(c.n_nodes + 4, c.n_nodes * 5 / 4));
        }
        plan.justification = "band limit " + fmt_num(b) + " < tau0 " + fmt_num(tau0) +
                             "; collapsed contour at tau = " + fmt_num(c.tau);
        return plan;
    }

    // Compact support: admits entire subexponential f as well.
    if (model.support() == models::SupportKind::Compact) {
        ExecutionPlan plan;
        plan.route = Route::CompactSupport;
        plan.contour.tau = opts.tau.value_or(1.0);
        plan.contour.n_nodes = opts.n_nodes.value_or(64);
        plan.justification = "compactly supported measure (radius " +
                             fmt_num(model.support_radius()) +
                             ") admits entire test functions of subexponential growth";
        return plan;
    }
    rejected.add("compact-support route: measure support is not compact");

    if (!is_band_limited(f)) {
        rejected.add("branch-cut route: test function is not band-limited");
        rejected.add("strip route: test function is not band-limited");
        throw NoValidRoute(rejected.join());
    }
    const double b = band_limit(f);

    if (model.analyticity() == models::AnalyticityClass::PlaneMinusBranchCuts ||
        model.analyticity() == models::AnalyticityClass::EntirePlane) {
        ExecutionPlan plan;
        plan.route = Route::BranchCutAnalytic;
        plan.contour.tau = opts.tau.value_or(0.75 * tau0);
        plan.contour.n_nodes = opts.n_nodes.value_or(64);
        plan.justification = "correlation analytic off the imaginary cuts; band limit " +
                             fmt_num(b) + " >= tau0 " + fmt_num(tau0) +
                             " handled on the shifted time-plane circle";
        return plan;
    }
    rejected.add("branch-cut route: correlation is only strip-analytic");

    if (model.analyticity() == models::AnalyticityClass::StripOnly) {
        if (b < 2.0 * tau0) {
            ExecutionPlan plan;
            plan.route = Route::StripBandLimited;
            plan.contour.tau = opts.tau.value_or(0.75 * tau0);
            plan.contour.n_nodes = opts.n_nodes.value_or(64);
            plan.justification = "strip-only correlation; band limit " + fmt_num(b) +
                                 " < 2*tau0 = " + fmt_num(2.0 * tau0);
            return plan;
        }
        std::string why = "strip route: band limit " + fmt_num(b) +
                          " >= 2*tau0 = " + fmt_num(2.0 * tau0);
        if (const auto* ss = std::get_if<pw::ShiftScale>(&f))
            why += " (kernel admissible for sigma > " +
                   fmt_num(ss->base().band_limit() / (2.0 * tau0)) + ")";
        rejected.add(why);
    }
    throw NoValidRoute(rejected.join());
}

cplx pf_at(const models::SpectralModel& model, const TestFunction& f, double s,
           const quad::ContourConfig& contour) {
    if (s < 0.0) throw DomainError("pf_at: s must be nonnegative");
    return pf_pass(model, f, s, contour.tau, contour.n_nodes);
}

MomentResult moment_iterated(const models::SpectralModel& model, const TestFunction& f,
                             const quad::ContourConfig& contour, int laguerre_order) {
    const quad::LaguerreRule rule = quad::gauss_laguerre(laguerre_order);
    const double tau0 = model.tau0();
    const double mass_scale = std::max(model.total_mass(), 1e-3);
    MomentResult res;
    res.plan.contour = contour;
    int nodes_seen = contour.n_nodes;

    const auto floor_for = [&](int j) {
        return 1e-16 * 8.0 * mass_scale / (laguerre_order * rule.weights[j]);
    };

    if (const auto* ef = std::get_if<EntireFunction>(&f)) {
        // Entire non-band-limited f: valid only on compact support, where the
        // correlation is entire and the contour may grow with s.
        if (model.support() != models::SupportKind::Compact)
            throw NoValidRoute(
                "moment_iterated: entire test function '" + ef->name +
                "' requires a compactly supported measure (support is not compact)");
        res.plan.route = Route::CompactSupport;
        const double p = ef->growth_order;
        const double r = model.support_radius();
        cplx acc = 0.0;
        for (int j = 0; j < laguerre_order; ++j) {
            const double s = rule.nodes[j];
            // balance |f(s/tau)| ~ e^{(s/tau)^p / p} against C's e^{r tau} growth
            const double tau_s =
                std::max(contour.tau, std::pow(std::pow(s, p) / std::max(r, 1e-3),
                                               1.0 / (p + 1.0)));
            acc += rule.weights[j] *
                   pf_zplane(model, f, s, tau_s, contour.n_nodes, floor_for(j), nodes_seen);
        }
        res.value = acc;
        res.nodes_used = nodes_seen;
        return res;
    }

    const double b = band_limit(f);
    if (b < tau0) {
        // Origin-centered contours; tau must clear the band limit so the outer
        // integrand f(s/z) stays below the e^{-s} Laguerre weight.
        if (!(contour.tau > b))
            throw InvalidAnnulus("moment_iterated: tau = " + fmt_num(contour.tau) +
                                 " must exceed the band limit " + fmt_num(b));
        if (!(contour.tau < tau0))
            throw InvalidAnnulus("moment_iterated: tau = " + fmt_num(contour.tau) +
                                 " must lie below tau0 = " + fmt_num(tau0));
        res.plan.route = Route::FastPath;  // same admissibility region, iterated form
        cplx acc = 0.0;
        for (int j = 0; j < laguerre_order; ++j)
            acc += rule.weights[j] * pf_zplane(model, f, rule.nodes[j], contour.tau,
                                               contour.n_nodes, floor_for(j), nodes_seen);
        res.value = acc;
        res.nodes_used = nodes_seen;
        return res;
    }

    // Band limit at or above tau0: shifted-circle representation.
    double radius;
    if (model.analyticity() == models::AnalyticityClass::PlaneMinusBranchCuts ||
        model.analyticity() == models::AnalyticityClass::EntirePlane) {
        radius = 0.5 * std::sqrt(1.0 + (tau0 / b) * (tau0 / b));
        res.plan.route = Route::BranchCutAnalytic;
    } else if (b < 2.0 * tau0) {
        // any radius in (1/2, tau0/b) keeps Re(1 - 1/theta) positive: midpoint
        radius = 0.5 * (0.5 + tau0 / b);
        res.plan.route = Route::StripBandLimited;
    } else {
        throw NoValidRoute("moment_iterated: band limit " + fmt_num(b) +
                           " >= 2*tau0 = " + fmt_num(2.0 * tau0) +
                           " on a strip-only correlation");
    }
    FPlane fp(model, f, radius);
    cplx acc = 0.0;
    const int n0 = std::max(contour.n_nodes, 32);
    for (int j = 0; j < laguerre_order; ++j)
        acc += rule.weights[j] * fp.pf(rule.nodes[j], n0, floor_for(j), nodes_seen);
    res.value = acc;
    res.nodes_used = std::max(nodes_seen, n0);
    return res;
}

MomentResult moment_fast(const models::SpectralModel& model, const TestFunction& f,
                         const quad::ContourConfig& contour) {
    if (!is_band_limited(f))
        throw NoValidRoute("moment_fast: test function is not band-limited");
    const double b = band_limit(f);
    const double tau0 = model.tau0();
    if (!(b < tau0))
        throw NoValidRoute("moment_fast: band limit " + fmt_num(b) + " >= tau0 " +
                           fmt_num(tau0));
    validate_fast_contour(b, tau0, contour);

    const int n = contour.n_nodes;
    const cplx mi(0.0, -1.0);
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const cplx z = std::polar(contour.tau, kTwoPi * k / n);
        acc += phi_tf(f, 1.0 / z) * model.correlation_at(mi * z);
    }
    MomentResult res;
    res.value = acc / static_cast<double>(n);
    res.plan.route = Route::FastPath;
    res.plan.contour = contour;
    res.nodes_used = n;
    const double m1 = sampled_max(model, f, contour.rho1 * contour.tau, n);
    const double m2 = sampled_max(model, f, contour.rho2 * contour.tau, n);
    res.a_priori_bound = error_bound(m1, m2, contour.tau, contour.rho1, contour.rho2, n - 1);
    return res;
}

double error_bound(double m1, double m2, double tau, double rho1, double rho2, int n) {
    if (!(rho1 > 0.0 && rho1 < 1.0 && rho2 > 1.0))
        throw InvalidAnnulus("error_bound: need 0 < rho1 < 1 < rho2");
    if (!(tau > 0.0)) throw InvalidAnnulus("error_bound: tau must be positive");
    if (n < 1) throw InvalidAnnulus("error_bound: N must be >= 1");
    if (m1 < 0.0 || m2 < 0.0) throw InvalidAnnulus("error_bound: M1, M2 must be >= 0");
    const double outer = tau * m2 * rho2 / (std::pow(rho2, n + 1) - 1.0);
    const double inner = tau * m1 * std::pow(rho1, n) / (1.0 - std::pow(rho1, n + 1));
    return outer + inner;
}

double monomial_moment(const models::SpectralModel& model, int k,
                       const quad::ContourConfig& contour) {
    if (k < 0 || k > 170) throw OrderOutOfRange("monomial_moment: k must lie in [0, 170]");
    if (!(contour.tau < model.tau0()))
        throw DomainError("monomial_moment: tau = " + fmt_num(contour.tau) +
                          " must lie below tau0 = " + fmt_num(model.tau0()));
    const cplx mi(0.0, -1.0);
    const auto pass = [&](int n) {
        return quad::trapezoid_circle(
            [&](cplx z) { return model.correlation_at(mi * z) / std::pow(z, k + 1); },
            contour.tau, n);
    };
    const double mass = std::max(model.total_mass(), 1e-3);
    int n = std::max(contour.n_nodes, k + 8);
    cplx prev = pass(n);
    for (n *= 2; n <= 16384; n *= 2) {
        const cplx cur = pass(n);
        if (std::abs(cur - prev) <= 1e-13 * (std::abs(cur) + mass)) {
            prev = cur;
            break;
        }
        prev = cur;
    }
    MomentResult res;
    res.value = factorial(k) * prev;
    return res.real_value();
}

MomentResult generalized_moment(const models::SpectralModel& model, const TestFunction& f,
                                const EngineOptions& opts) {
    const ExecutionPlan plan = route_validity(model, f, opts);
    MomentResult res;
    if (plan.route == Route::FastPath) {
        res = moment_fast(model, f, plan.contour);
    } else {
        int order = opts.laguerre_order;
        if (plan.route == Route::BranchCutAnalytic || plan.route == Route::StripBandLimited)
            order = std::max(order, 64);  // outer integrand decays like e^{-eps s}
        res = moment_iterated(model, f, plan.contour, order);
    }
    res.plan = plan;
    return res;
}

}  // namespace specmoment::engine
