#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "specmoment/errors.hpp"

namespace specmoment::pw {

using cplx = std::complex<double>;

enum class Kind { ComplexExponential, Sinc, Monomial, Polynomial, BumpTransform };

// Entire test function of exponential type whose transform is compactly
// supported: e^{izt}; sin(Bz)/z; z^k; sum a_k z^k; and the Fourier integral of
// the bump window e^{-k^2/(B^2-k^2)} on (-B, B).
class PaleyWiener {
  public:
    static PaleyWiener complex_exponential(double t);
    static PaleyWiener sinc(double band);
    static PaleyWiener monomial(int k);
    static PaleyWiener polynomial(std::vector<double> coefficients);
    static PaleyWiener bump_transform(double band);

    Kind kind() const { return kind_; }
    // Support radius of the transform: |t| for the exponential, B for
    // sinc/bump, 0 for monomials and polynomials.
    double band_limit() const;

    cplx operator()(cplx z) const;

    double time() const { return a_; }    // ComplexExponential parameter
    double band() const { return a_; }    // Sinc / BumpTransform parameter
    int degree() const;
    const std::vector<double>& coefficients() const { return c_; }
    std::string describe() const;

  private:
    PaleyWiener(Kind k, double a, std::vector<double> c) : kind_(k), a_(a), c_(std::move(c)) {}

    Kind kind_;
    double a_ = 0.0;         // t or B
    std::vector<double> c_;  // polynomial coefficients, ascending
};

// g(z) = base((z - omega0)/sigma); band limit scales to base band / sigma.
class ShiftScale {
  public:
    ShiftScale(PaleyWiener base, double omega0, double sigma);

    const PaleyWiener& base() const { return base_; }
    double omega0() const { return omega0_; }
    double sigma() const { return sigma_; }
    double band_limit() const { return base_.band_limit() / sigma_; }

    cplx operator()(cplx z) const { return base_((z - omega0_) / sigma_); }
    std::string describe() const;

  private:
    PaleyWiener base_;
    double omega0_;
    double sigma_;
};

inline ShiftScale shift_scale(const PaleyWiener& f, double omega0, double sigma) {
    return ShiftScale(f, omega0, sigma);
}

// Phi_f(z) = integral_0^inf e^{-s} f(z s) ds, analytic on |Im z| < 1/band.
// Closed forms: 1/(1-izt) for the exponential, k! z^k for monomials, the
// coefficient sum for polynomials; sinc and bump go through the transform-side
// integral of f_hat(kappa)/(1 - iz kappa).
cplx phi_eval(const PaleyWiener& f, cplx z);
cplx phi_eval(const ShiftScale& f, cplx z);

// integral of f_hat(kappa) K(kappa) d kappa over the transform support.
// For a shifted/scaled function the transform is sigma f_hat(sigma kappa)
// e^{-i kappa omega0} (by the substitution kappa' = kappa/sigma), so the
// integral becomes integral f_hat(u) e^{-i u omega0 / sigma} K(u/sigma) du.
// Monomial/Polynomial transforms are point distributions: DomainError.
cplx transform_integral(const PaleyWiener& f, const std::function<cplx(double)>& K);
cplx transform_integral(const ShiftScale& f, const std::function<cplx(double)>& K);

}  // namespace specmoment::pw
