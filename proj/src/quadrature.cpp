#include "specmoment/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace specmoment::quad {

namespace {

constexpr double kEulerGamma = 0.5772156649015328606;

// Value and derivative of the Laguerre polynomial L_n at x (upward recurrence).
void laguerre_pd(int n, double x, double& ln, double& dln) {
    double lm1 = 1.0, l = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        const double lp1 = ((2.0 * k + 1.0 - x) * l - k * lm1) / (k + 1.0);
        lm1 = l;
        l = lp1;
    }
    ln = (n == 0) ? 1.0 : l;
    dln = (n == 0) ? 0.0 : n * (l - lm1) / x;
}

// Value and derivative of the Legendre polynomial P_n at x.
void legendre_pd(int n, double x, double& pn, double& dpn) {
    double pm1 = 1.0, p = x;
    for (int k = 1; k < n; ++k) {
        const double pp1 = ((2.0 * k + 1.0) * x * p - k * pm1) / (k + 1.0);
        pm1 = p;
        p = pp1;
    }
    pn = (n == 0) ? 1.0 : p;
    dpn = (n == 0) ? 0.0 : n * (x * p - pm1) / (x * x - 1.0);
}

// Eigenvalues of the symmetric tridiagonal Jacobi matrix (Golub-Welsch seeds).
std::vector<double> jacobi_eigenvalues(const std::vector<double>& diag,
                                       const std::vector<double>& sub) {
    const int n = static_cast<int>(diag.size());
    Eigen::VectorXd d(n), e(std::max(n - 1, 0));
    for (int i = 0; i < n; ++i) d[i] = diag[i];
    for (int i = 0; i + 1 < n; ++i) e[i] = sub[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = es.eigenvalues()[i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Series branch of K1, valid for 0 < x < 2:
//   K1 = 1/x + log(x/2) I1(x) - (x/4) sum_k [psi(k+1)+psi(k+2)] q^k / (k!(k+1)!)
// with q = x^2/4.
double k1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, s_i1 = 1.0;
    double p1 = -kEulerGamma, p2 = 1.0 - kEulerGamma;
    double s_psi = p1 + p2;
    for (int k = 1; k < 64; ++k) {
        term *= q / (k * (k + 1.0));
        s_i1 += term;
        p1 += 1.0 / k;
        p2 += 1.0 / (k + 1.0);
        s_psi += (p1 + p2) * term;
        if (term * (p1 + p2) < 1e-18 * std::abs(s_psi)) break;
    }
    const double i1 = 0.5 * x * s_i1;
    return 1.0 / x + std::log(0.5 * x) * i1 - 0.25 * x * s_psi;
}

// Continued-fraction branch (Temme's CF2), valid for x >= 2.
double k1_cf2(double x) {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 1; i <= 40000; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) <= 2.3e-16) break;
    }
    h = a1 * h;
    const double k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    return k0 * (x + 0.5 - h) / x;
}

// 15-point Kronrod / 7-point Gauss pair (positive abscissae; rule is symmetric).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

// One G7-K15 panel; returns the K15 value and |K15 - G7| as error estimate.
void gk15(const std::function<double(double)>& f, double a, double b,
          double& value, double& err) {
    const double c = 0.5 * (a + b), hl = 0.5 * (b - a);
    const double fc = f(c);
    double res_k = kWgk[7] * fc;
    double res_g = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = hl * kXgk[j];
        const double fsum = f(c - x) + f(c + x);
        res_k += kWgk[j] * fsum;
        if (j % 2 == 1) res_g += kWg[j / 2] * fsum;
    }
    value = res_k * hl;
    err = std::abs((res_k - res_g) * hl);
}

}  // namespace

LaguerreRule gauss_laguerre(int n) {
    if (n < 1 || n > 128) throw OrderOutOfRange("gauss_laguerre: order must lie in [1, 128]");
    std::vector<double> diag(n), sub(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + 1.0;
    for (int k = 1; k < n; ++k) sub[k - 1] = k;
    LaguerreRule rule;
    rule.nodes = jacobi_eigenvalues(diag, sub);
    rule.weights.resize(n);
    for (int j = 0; j < n; ++j) {
        double x = rule.nodes[j];
        for (int it = 0; it < 3; ++it) {  // polish the eigenvalue seed
            double ln, dln;
            laguerre_pd(n, x, ln, dln);
            const double dx = ln / dln;
            x -= dx;
            if (std::abs(dx) < 1e-15 * x) break;
        }
        rule.nodes[j] = x;
        double lnp1, dummy;
        laguerre_pd(n + 1, x, lnp1, dummy);
        rule.weights[j] = x / ((n + 1.0) * (n + 1.0) * lnp1 * lnp1);
    }
    return rule;
}

LegendreRule gauss_legendre(int n) {
    if (n < 1 || n > 128) throw OrderOutOfRange("gauss_legendre: order must lie in [1, 128]");
    std::vector<double> diag(n, 0.0), sub(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
    LegendreRule rule;
    rule.nodes = jacobi_eigenvalues(diag, sub);
    rule.weights.resize(n);
    for (int j = 0; j < n; ++j) {
        double x = rule.nodes[j];
        for (int it = 0; it < 3; ++it) {
            double pn, dpn;
            legendre_pd(n, x, pn, dpn);
            if (dpn == 0.0) break;  // n == 1: exact root at 0
            const double dx = pn / dpn;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[j] = x;
        double pn, dpn;
        legendre_pd(n, x, pn, dpn);
        rule.weights[j] = (n == 1) ? 2.0 : 2.0 / ((1.0 - x * x) * dpn * dpn);
    }
    return rule;
}

double bessel_k1(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k1: x must be positive");
    return x < 2.0 ? k1_series(x) : k1_cf2(x);
}

double adaptive_interval(const std::function<double(double)>& f, double a, double b,
                         double tol) {
    if (!(tol > 0.0)) throw DomainError("adaptive_interval: tol must be positive");
    if (a == b) return 0.0;
    struct Panel {
        double a, b;
    };
    const double total_len = std::abs(b - a);
    std::vector<Panel> stack{{a, b}};
    double total = 0.0;
    int panels = 0;
    while (!stack.empty()) {
        if (++panels > 200000) throw ToleranceNotMet("adaptive_interval: panel budget exhausted");
        const Panel p = stack.back();
        stack.pop_back();
        double v, e;
        gk15(f, p.a, p.b, v, e);
        const double budget = tol * std::abs(p.b - p.a) / total_len;
        const double mid = 0.5 * (p.a + p.b);
        if (e <= budget || mid == p.a || mid == p.b) {
            total += v;
        } else {
            stack.push_back({mid, p.b});  // left half processed first (LIFO)
            stack.push_back({p.a, mid});
        }
    }
    return total;
}

double adaptive_real_line(const std::function<double(double)>& f, double tol) {
    if (!(tol > 0.0)) throw DomainError("adaptive_real_line: tol must be positive");
    double total = adaptive_interval(f, -1.0, 1.0, 0.25 * tol);
    double w = 1.0;
    int quiet = 0;
    for (int j = 0; j < 64 && quiet < 2; ++j) {
        const double shell_tol = tol / 32.0;
        const double shell = adaptive_interval(f, w, 2.0 * w, shell_tol) +
                             adaptive_interval(f, -2.0 * w, -w, shell_tol);
        total += shell;
        quiet = std::abs(shell) < shell_tol ? quiet + 1 : 0;
        w *= 2.0;
    }
    if (quiet < 2) throw ToleranceNotMet("adaptive_real_line: tails failed to settle");
    return total;
}

}  // namespace specmoment::quad
