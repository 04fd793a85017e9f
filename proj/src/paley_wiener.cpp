#include "specmoment/paley_wiener.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "specmoment/quadrature.hpp"

namespace specmoment::pw {

namespace {

double factorial(int k) {
    double v = 1.0;
    for (int i = 2; i <= k; ++i) v *= i;
    return v;
}

double binomial(int n, int k) {
    double v = 1.0;
    for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
    return v;
}

cplx pow_int(cplx z, int k) {
    cplx r = 1.0;
    while (k > 0) {
        if (k & 1) r *= z;
        z *= z;
        k >>= 1;
    }
    return r;
}

// sin(w)/w, series branch for |w| < 1e-2 (removable singularity).
cplx sinc_core(cplx w) {
    if (std::abs(w) < 1e-2) {
        const cplx w2 = w * w;
        return 1.0 + w2 * (-1.0 / 6.0 + w2 * (1.0 / 120.0 + w2 * (-1.0 / 5040.0 +
               w2 * (1.0 / 362880.0 + w2 * (-1.0 / 39916800.0)))));
    }
    return std::sin(w) / w;
}

// Bump window e^{-k^2/(B^2-k^2)} on (-B, B); zero at and beyond the endpoints.
double bump_weight(double kappa, double band) {
    const double u = kappa / band;
    const double t = u * u;
    if (t >= 1.0) return 0.0;
    return std::exp(-t / (1.0 - t));
}

const quad::LegendreRule& gl64() {
    static const quad::LegendreRule rule = quad::gauss_legendre(64);
    return rule;
}

// Trapezoidal integral of g over [-band, band] with node doubling; g vanishes
// to all orders at the endpoints, so refinement converges superalgebraically.
// Stops at 1e-12 relative stability, with an absolute floor tied to the L1
// mass of the integrand so near-zero oscillatory results still terminate.
cplx doubling_trapezoid(const std::function<cplx(double)>& g, double band) {
    cplx prev = 0.0;
    for (int n = 32; n <= 16384; n *= 2) {
        const double h = 2.0 * band / n;
        cplx acc = 0.5 * (g(-band) + g(band));
        double l1 = std::abs(acc);
        for (int j = 1; j < n; ++j) {
            const cplx v = g(-band + h * j);
            acc += v;
            l1 += std::abs(v);
        }
        const cplx cur = acc * h;
        if (n > 32 && std::abs(cur - prev) <= 1e-12 * std::abs(cur) + 1e-15 * l1 * h)
            return cur;
        prev = cur;
    }
    throw ToleranceNotMet("doubling_trapezoid: band integral failed to stabilize");
}

void check_strip(double band, cplx z, const char* who) {
    if (band > 0.0 && std::abs(z.imag()) >= 1.0 / band) {
        std::ostringstream os;
        os << who << ": |Im z| = " << std::abs(z.imag()) << " reaches the strip bound "
           << 1.0 / band << " (band limit " << band << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

PaleyWiener PaleyWiener::complex_exponential(double t) {
    return PaleyWiener(Kind::ComplexExponential, t, {});
}

PaleyWiener PaleyWiener::sinc(double band) {
    if (!(band > 0.0)) throw DomainError("sinc: band must be positive");
    return PaleyWiener(Kind::Sinc, band, {});
}

PaleyWiener PaleyWiener::monomial(int k) {
    if (k < 0 || k > 170) throw OrderOutOfRange("monomial: degree must lie in [0, 170]");
    return PaleyWiener(Kind::Monomial, 0.0, {static_cast<double>(k)});
}

PaleyWiener PaleyWiener::polynomial(std::vector<double> coefficients) {
    if (coefficients.empty()) throw DomainError("polynomial: need at least one coefficient");
    if (coefficients.size() > 171) throw OrderOutOfRange("polynomial: degree must lie in [0, 170]");
    return PaleyWiener(Kind::Polynomial, 0.0, std::move(coefficients));
}

PaleyWiener PaleyWiener::bump_transform(double band) {
    if (!(band > 0.0)) throw DomainError("bump_transform: band must be positive");
    return PaleyWiener(Kind::BumpTransform, band, {});
}

double PaleyWiener::band_limit() const {
    switch (kind_) {
        case Kind::ComplexExponential: return std::abs(a_);
        case Kind::Sinc:
        case Kind::BumpTransform: return a_;
        case Kind::Monomial:
        case Kind::Polynomial: return 0.0;
    }
    return 0.0;
}

int PaleyWiener::degree() const {
    if (kind_ == Kind::Monomial) return static_cast<int>(c_[0]);
    if (kind_ == Kind::Polynomial) return static_cast<int>(c_.size()) - 1;
    return 0;
}

cplx PaleyWiener::operator()(cplx z) const {
    switch (kind_) {
        case Kind::ComplexExponential:
            return std::exp(cplx(0.0, 1.0) * z * a_);
        case Kind::Sinc:
            return a_ * sinc_core(a_ * z);
        case Kind::Monomial:
            return pow_int(z, degree());
        case Kind::Polynomial: {
            cplx acc = 0.0;
            for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
            return acc;
        }
        case Kind::BumpTransform:
            return transform_integral(*this,
                                      [z](double k) { return std::exp(cplx(0.0, 1.0) * k * z); });
    }
    return 0.0;
}

std::string PaleyWiener::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::ComplexExponential: os << "exp(t=" << a_ << ")"; break;
        case Kind::Sinc: os << "sinc(band=" << a_ << ")"; break;
        case Kind::Monomial: os << "monomial(k=" << degree() << ")"; break;
        case Kind::Polynomial: os << "polynomial(degree=" << degree() << ")"; break;
        case Kind::BumpTransform: os << "bump(band=" << a_ << ")"; break;
    }
    return os.str();
}

ShiftScale::ShiftScale(PaleyWiener base, double omega0, double sigma)
    : base_(std::move(base)), omega0_(omega0), sigma_(sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw InvalidScale("shift_scale: sigma must be positive and finite");
    if (!std::isfinite(omega0)) throw DomainError("shift_scale: omega0 must be finite");
}

std::string ShiftScale::describe() const {
    std::ostringstream os;
    os << base_.describe() << "@(omega0=" << omega0_ << ",sigma=" << sigma_ << ")";
    return os.str();
}

cplx phi_eval(const PaleyWiener& f, cplx z) {
    check_strip(f.band_limit(), z, "phi_eval");
    const cplx iz = cplx(0.0, 1.0) * z;
    switch (f.kind()) {
        case Kind::ComplexExponential:
            return 1.0 / (1.0 - iz * f.time());
        case Kind::Monomial:
            return factorial(f.degree()) * pow_int(z, f.degree());
        case Kind::Polynomial: {
            cplx acc = 0.0;
            double kfact = 1.0;
            cplx zk = 1.0;
            const auto& a = f.coefficients();
            for (size_t k = 0; k < a.size(); ++k) {
                if (k > 0) {
                    kfact *= k;
                    zk *= z;
                }
                acc += a[k] * kfact * zk;
            }
            return acc;
        }
        case Kind::Sinc:
        case Kind::BumpTransform:
            return transform_integral(f, [iz](double k) { return 1.0 / (1.0 - iz * k); });
    }
    return 0.0;
}

cplx phi_eval(const ShiftScale& f, cplx z) {
    check_strip(f.band_limit(), z, "phi_eval");
    const cplx iz = cplx(0.0, 1.0) * z;
    const double w0 = f.omega0(), sg = f.sigma();
    switch (f.base().kind()) {
        case Kind::ComplexExponential: {
            const double t = f.base().time();
            return std::exp(cplx(0.0, -t * w0 / sg)) / (1.0 - iz * (t / sg));
        }
        case Kind::Monomial:
        case Kind::Polynomial: {
            // expand base((z-w0)/sg) into plain powers of z, then apply k! z^k
            std::vector<double> a;
            if (f.base().kind() == Kind::Monomial) {
                a.assign(f.base().degree() + 1, 0.0);
                a.back() = 1.0;
            } else {
                a = f.base().coefficients();
            }
            const int d = static_cast<int>(a.size()) - 1;
            std::vector<double> b(d + 1, 0.0);
            for (int k = 0; k <= d; ++k) {
                if (a[k] == 0.0) continue;
                const double sk = a[k] / std::pow(sg, k);
                for (int j = 0; j <= k; ++j)
                    b[j] += sk * binomial(k, j) * std::pow(-w0, k - j);
            }
            cplx acc = 0.0;
            double jfact = 1.0;
            cplx zj = 1.0;
            for (int j = 0; j <= d; ++j) {
                if (j > 0) {
                    jfact *= j;
                    zj *= z;
                }
                acc += b[j] * jfact * zj;
            }
            return acc;
        }
        case Kind::Sinc:
        case Kind::BumpTransform:
            return transform_integral(f, [iz](double k) { return 1.0 / (1.0 - iz * k); });
    }
    return 0.0;
}

cplx transform_integral(const PaleyWiener& f, const std::function<cplx(double)>& K) {
    switch (f.kind()) {
        case Kind::ComplexExponential:
            return K(f.time());  // point mass at kappa = t
        case Kind::Sinc: {
            const double B = f.band();
            const auto& rule = gl64();
            cplx acc = 0.0;
            for (size_t j = 0; j < rule.nodes.size(); ++j)
                acc += rule.weights[j] * K(B * rule.nodes[j]);
            return 0.5 * B * acc;  // f_hat = 1/2 on [-B, B]
        }
        case Kind::BumpTransform: {
            const double B = f.band();
            return doubling_trapezoid([&](double k) { return bump_weight(k, B) * K(k); }, B);
        }
        case Kind::Monomial:
        case Kind::Polynomial:
            throw DomainError("transform_integral: " + f.describe() +
                              " has a point-distribution transform, not an integrable one");
    }
    return 0.0;
}

cplx transform_integral(const ShiftScale& f, const std::function<cplx(double)>& K) {
    const double w0 = f.omega0(), sg = f.sigma();
    // integral sigma f_hat(sigma k) e^{-i k w0} K(k) dk = integral f_hat(u)
    // e^{-i u w0/sigma} K(u/sigma) du, integrated over the base band.
    const auto shifted = [&](double u) {
        return std::exp(cplx(0.0, -u * w0 / sg)) * K(u / sg);
    };
    return transform_integral(f.base(), shifted);
}

}  // namespace specmoment::pw
