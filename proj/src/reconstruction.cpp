#include "specmoment/reconstruction.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace specmoment::recon {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int thread_cap(size_t work_items) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("SPECMOMENT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 256) n = static_cast<unsigned>(v);
    }
    return static_cast<int>(std::min<size_t>(n, std::max<size_t>(work_items, 1)));
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace

engine::MomentResult smoothed_spectrum(const models::SpectralModel& model,
                                       const pw::PaleyWiener& kernel, double omega0,
                                       double sigma, const engine::EngineOptions& opts) {
    const engine::TestFunction g = pw::shift_scale(kernel, omega0, sigma);
    engine::MomentResult res = engine::generalized_moment(model, g, opts);
    res.value /= sigma;
    if (res.a_priori_bound) res.a_priori_bound = *res.a_priori_bound / sigma;
    return res;
}

SpectrumScan spectrum_scan(const models::SpectralModel& model, const pw::PaleyWiener& kernel,
                           const std::vector<double>& grid, double sigma,
                           const engine::EngineOptions& opts) {
    SpectrumScan scan;
    scan.model_name = model.name();
    scan.kernel_name = kernel.describe();
    scan.sigma = sigma;
    scan.points.resize(grid.size());

    const auto work = [&](size_t begin, size_t stride) {
        for (size_t i = begin; i < grid.size(); i += stride) {
            SpectrumPoint& pt = scan.points[i];
            pt.omega0 = grid[i];
            pt.sigma = sigma;
            try {
                const engine::MomentResult r =
                    smoothed_spectrum(model, kernel, grid[i], sigma, opts);
                pt.value = r.real_value();
                pt.route = engine::route_name(r.plan.route);
                pt.bound = r.a_priori_bound;
                pt.nodes = r.nodes_used;
            } catch (const Error& e) {
                pt.error = e.what();
            }
        }
    };

    const int workers = thread_cap(grid.size());
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work, static_cast<size_t>(w), static_cast<size_t>(workers));
        for (auto& t : pool) t.join();
    }
    return scan;
}

engine::MomentResult correlation_reconstruct(const models::SpectralModel& model, double t,
                                             const engine::EngineOptions& opts) {
    return engine::generalized_moment(model, pw::PaleyWiener::complex_exponential(t), opts);
}

engine::MomentResult correlation_reconstruct(const models::SpectralModel& model, double t,
                                             const quad::ContourConfig& contour) {
    engine::EngineOptions opts;
    opts.tau = contour.tau;
    opts.rho1 = contour.rho1;
    opts.rho2 = contour.rho2;
    opts.n_nodes = contour.n_nodes;
    return correlation_reconstruct(model, t, opts);
}

std::string scan_to_csv(const SpectrumScan& scan) {
    std::ostringstream os;
    os << "omega0,sigma,value,route,bound\n";
    for (const auto& p : scan.points) {
        os << fmt17(p.omega0) << ',' << fmt17(p.sigma) << ',';
        if (p.value) os << fmt17(*p.value);
        os << ',' << p.route << ',';
        if (p.bound) os << fmt17(*p.bound);
        os << '\n';
    }
    return os.str();
}

std::string scan_to_json(const SpectrumScan& scan) {
    std::ostringstream os;
    os << "{\"model\":\"" << json_escape(scan.model_name) << "\",\"kernel\":\""
       << json_escape(scan.kernel_name) << "\",\"sigma\":" << fmt17(scan.sigma)
       << ",\"points\":[";
    bool first = true;
    for (const auto& p : scan.points) {
        if (!first) os << ',';
        first = false;
        os << "{\"omega0\":" << fmt17(p.omega0) << ",\"sigma\":" << fmt17(p.sigma)
           << ",\"value\":";
        if (p.value)
            os << fmt17(*p.value);
        else
            os << "null";
        os << ",\"route\":\"" << json_escape(p.route) << "\",\"bound\":";
        if (p.bound)
            os << fmt17(*p.bound);
        else
            os << "null";
        if (!p.error.empty()) os << ",\"error\":\"" << json_escape(p.error) << "\"";
        os << "}";
    }
    os << "]}";
    return os.str();
}

}  // namespace specmoment::recon
