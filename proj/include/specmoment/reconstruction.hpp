#pragma once

#include <optional>
#include <string>
#include <vector>

#include "specmoment/moment_engine.hpp"

namespace specmoment::recon {

struct SpectrumPoint {
    double omega0 = 0.0;
    double sigma = 1.0;
    std::optional<double> value;  // absent when the point failed
    std::string route = "none";
    std::optional<double> bound;
    int nodes = 0;
    std::string error;  // per-point failure reason, empty on success
};

struct SpectrumScan {
    std::string model_name;
    std::string kernel_name;
    double sigma = 1.0;
    std::vector<SpectrumPoint> points;
};

// (1/sigma) * moment of kernel((omega - omega0)/sigma); the returned result
// carries the scaled value and (fast path) the equally scaled a-priori bound.
engine::MomentResult smoothed_spectrum(const models::SpectralModel& model,
                                       const pw::PaleyWiener& kernel, double omega0,
                                       double sigma,
                                       const engine::EngineOptions& opts = {});

// One smoothed_spectrum value per grid point; per-point failures are recorded,
// not fatal.  Points are independent; SPECMOMENT_THREADS caps the worker count
// (default: hardware concurrency).  Output order follows the grid.
SpectrumScan spectrum_scan(const models::SpectralModel& model, const pw::PaleyWiener& kernel,
                           const std::vector<double>& grid, double sigma,
                           const engine::EngineOptions& opts = {});

// Moment of e^{i omega t}: pointwise reconstruction of the correlation.
engine::MomentResult correlation_reconstruct(const models::SpectralModel& model, double t,
                                             const engine::EngineOptions& opts = {});
engine::MomentResult correlation_reconstruct(const models::SpectralModel& model, double t,
                                             const quad::ContourConfig& contour);

// CSV with header omega0,sigma,value,route,bound; 17 significant digits.
std::string scan_to_csv(const SpectrumScan& scan);
std::string scan_to_json(const SpectrumScan& scan);

}  // namespace specmoment::recon
