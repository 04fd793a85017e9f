#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "specmoment/paley_wiener.hpp"
#include "specmoment/quadrature.hpp"
#include "specmoment/spectral_model.hpp"

namespace specmoment::engine {

using cplx = std::complex<double>;

enum class Route { FastPath, CompactSupport, BranchCutAnalytic, StripBandLimited };

const char* route_name(Route r);

// Entire, non-band-limited test function of subexponential growth,
// |f(z)| <= c * exp(|z|^p / p); admitted only on compactly supported measures.
struct EntireFunction {
    std::string name;
    std::function<cplx(cplx)> eval;
    double growth_order = 2.0;  // p above
};

EntireFunction gauss_function();  // e^{-z^2/2}, p = 2

using TestFunction = std::variant<pw::PaleyWiener, pw::ShiftScale, EntireFunction>;

bool is_band_limited(const TestFunction& f);
double band_limit(const TestFunction& f);  // DomainError for EntireFunction
cplx eval(const TestFunction& f, cplx z);
std::string describe(const TestFunction& f);

struct ExecutionPlan {
    Route route = Route::FastPath;
    quad::ContourConfig contour;
    std::string justification;
};

struct MomentResult {
    cplx value;
    std::optional<double> a_priori_bound;  // fast path only
    ExecutionPlan plan;
    int nodes_used = 0;  // largest contour node count actually evaluated

    // Real part after asserting |Im| <= 1e-10 * (1 + |value|).
    double real_value() const;
};

struct EngineOptions {
    std::optional<double> tau;
    std::optional<double> rho1;
    std::optional<double> rho2;
    std::optional<int> n_nodes;
    double tolerance = 1e-10;
    int laguerre_order = 40;
};

// Picks the least-restrictive admissible route (FastPath > CompactSupport >
// BranchCutAnalytic > StripBandLimited) and fills contour defaults:
// tau = (B + tau0)/2 (max(1, 2B) for entire correlations), rho1 = (B/tau+1)/2,
// rho2 = (1 + tau0/tau)/2 (2 for entire correlations).  Fast-path node counts
// are the smallest scanned N+1 whose a-priori bound clears opts.tolerance,
// capped at 4096.  Throws NoValidRoute listing every rejected alternative;
// boundary equalities B = tau0 and B = 2*tau0 are rejections.
ExecutionPlan route_validity(const models::SpectralModel& model, const TestFunction& f,
                             const EngineOptions& opts = {});

// Trapezoidal value of P_f(s) = (1/2 pi i) oint f(s/z) C(-iz)/z dz on
// |z| = contour.tau with exactly contour.n_nodes nodes.
cplx pf_at(const models::SpectralModel& model, const TestFunction& f, double s,
           const quad::ContourConfig& contour);

// Outer Gauss-Laguerre sum over P_f evaluations (the iterated route).
// Inner contours refine by node doubling from contour.n_nodes; band limits at
// or above tau0 are rerouted through the shifted-circle representation in the
// complex time plane.
MomentResult moment_iterated(const models::SpectralModel& model, const TestFunction& f,
                             const quad::ContourConfig& contour, int laguerre_order);

// Collapsed single-contour route: (1/(N+1)) sum_k Phi_f(1/z_k) C(-i z_k) on
// |z_k| = tau, plus the sampled a-priori bound.  Requires band limit < tau0
// and B < rho1*tau < tau < rho2*tau < tau0.
MomentResult moment_fast(const models::SpectralModel& model, const TestFunction& f,
                         const quad::ContourConfig& contour);

// tau*M2*rho2/(rho2^{N+1} - 1) + tau*M1*rho1^N/(1 - rho1^{N+1}).
double error_bound(double m1, double m2, double tau, double rho1, double rho2, int n);

// mu_k = k!/(2 pi i) oint C(-iz)/z^{k+1} dz, with node doubling from
// contour.n_nodes.
double monomial_moment(const models::SpectralModel& model, int k,
                       const quad::ContourConfig& contour);

// Route, then dispatch to moment_fast or moment_iterated.
MomentResult generalized_moment(const models::SpectralModel& model, const TestFunction& f,
                                const EngineOptions& opts = {});

}  // namespace specmoment::engine
