#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "specmoment/errors.hpp"

namespace specmoment::quad {

using cplx = std::complex<double>;

// Parameters of an origin-centered circular contour |z| = tau.
// n_nodes is the trapezoidal node count; rho1 < 1 < rho2 scale tau to the
// inner/outer sampling circles used by the a-priori error bound.
struct ContourConfig {
    double tau = 0.5;
    int n_nodes = 64;
    double rho1 = 0.5;
    double rho2 = 2.0;
};

// (1/2*pi*i) * contour integral of g over |z| = tau by the n-point trapezoidal
// rule: (1/n) * sum_k g(z_k) * z_k with z_k = tau * e^{2*pi*i*k/n}.
// The first node sits at +tau and k runs ascending, so results are
// bit-reproducible for fixed inputs.
template <class G>
cplx trapezoid_circle(G&& g, double tau, int n) {
    if (!(tau > 0.0)) throw DomainError("trapezoid_circle: tau must be positive");
    if (n < 1) throw DomainError("trapezoid_circle: need at least one node");
    const double step = 2.0 * std::numbers::pi / n;
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const cplx zk = std::polar(tau, step * k);
        acc += g(zk) * zk;
    }
    return acc / static_cast<double>(n);
}

struct LaguerreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Laguerre rule for integrals of e^{-s} p(s) over [0, inf),
// exact for polynomials p of degree <= 2n-1.  Supported orders: 1..128.
LaguerreRule gauss_laguerre(int n);

struct LegendreRule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1], exact for polynomials of degree <= 2n-1.
LegendreRule gauss_legendre(int n);

// Modified Bessel function of the second kind, order one, for x > 0.
double bessel_k1(double x);

// Adaptive Gauss-Kronrod integral of f over [a, b] to absolute tolerance tol.
double adaptive_interval(const std::function<double(double)>& f, double a, double b,
                         double tol);

// Integral of f over the whole real line to absolute tolerance tol.
// f must decay at least exponentially (or vanish outside a bounded set);
// throws ToleranceNotMet if the shell expansion fails to settle.
double adaptive_real_line(const std::function<double(double)>& f, double tol);

}  // namespace specmoment::quad
