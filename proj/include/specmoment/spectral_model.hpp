#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "specmoment/errors.hpp"

namespace specmoment::models {

using cplx = std::complex<double>;

// Where the analytic continuation of the correlation function lives.
enum class AnalyticityClass {
    EntirePlane,           // entire in z
    PlaneMinusBranchCuts,  // analytic off the rays Re(z)=0, |Im(z)| >= tau0
    StripOnly,             // analytic only in |Im(z)| < tau0
};

enum class SupportKind { Compact, RealLine };

const char* analyticity_name(AnalyticityClass c);

// A positive spectral measure described by its short-time correlation function
// C(t) = integral of e^{i*omega*t} dP(omega), continued to complex time.
class SpectralModel {
  public:
    // Built-in fixtures.
    static SpectralModel exponential();                          // dP = (1/2) e^{-|w|} dw
    static SpectralModel free_particle(double beta, double hbar);
    static SpectralModel uniform(double r);                      // dP = dw/(2r) on [-r, r]
    static SpectralModel gaussian();                             // standard normal measure
    static SpectralModel strip(double tau0);                     // scaled exponential measure,
                                                                 // declared strip-only
    // name plus key=value parameters, e.g. ("free_particle", {beta:2, hbar:1}).
    static SpectralModel from_descriptor(const std::string& name,
                                         const std::map<std::string, double>& params);

    const std::string& name() const { return name_; }
    double total_mass() const { return mass_; }
    double tau0() const { return tau0_; }  // +inf for entire correlations
    AnalyticityClass analyticity() const { return class_; }
    SupportKind support() const { return support_; }
    double support_radius() const { return radius_; }  // Compact support only
    bool symmetric() const { return symmetric_; }
    bool has_density() const { return static_cast<bool>(density_); }

    bool in_domain(cplx z) const;
    std::string domain_description() const;

    // C continued to complex time; throws DomainError outside the domain.
    cplx correlation_at(cplx z) const;

    // Pointwise density dP/dw; throws NoDensity when the model stores none.
    double density_at(double omega) const;

    // Reference value of integral f dP by direct adaptive quadrature against the
    // density (independent of any contour machinery).  f takes a real argument;
    // the imaginary part of the result must vanish to ~1e-8 relative.
    double oracle_generalized_moment(const std::function<cplx(double)>& f, double tol) const;

  private:
    SpectralModel() = default;

    std::string name_;
    double mass_ = 1.0;
    double tau0_ = 0.0;
    AnalyticityClass class_ = AnalyticityClass::StripOnly;
    SupportKind support_ = SupportKind::RealLine;
    double radius_ = 0.0;
    bool symmetric_ = true;
    std::function<cplx(cplx)> correlation_;
    std::function<double(double)> density_;
};

}  // namespace specmoment::models
