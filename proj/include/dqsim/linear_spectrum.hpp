#pragma once

// Linear PL-detected absorption spectrum: Lorentzians at interaction-shifted
// line centers plus the Gaussian-pedestal population, averaged over ensemble
// realizations.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "dqsim/coupling.hpp"
#include "dqsim/ensemble.hpp"
#include "dqsim/units.hpp"

namespace dqsim {

struct Spectrum1D {
    std::vector<double> frequency_thz;  // strictly increasing uniform grid
    std::vector<double> amplitude;
    std::map<std::string, std::string> metadata;
};

inline std::vector<double> uniform_grid(double start_thz, double stop_thz, std::size_t n) {
    if (n < 2 || !(stop_thz > start_thz)) throw std::invalid_argument("bad frequency grid");
    std::vector<double> g(n);
    const double step = (stop_thz - start_thz) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = start_thz + step * static_cast<double>(i);
    return g;
}

// Unit-peak Lorentzian in ordinary frequency.
inline double lorentzian_unit_peak(double f, double center, double fwhm) {
    const double hw = 0.5 * fwhm;
    const double d = f - center;
    return hw * hw / (d * d + hw * hw);
}

// Sum of weighted unit-peak Lorentzians with FWHM = 1/(pi*T2) at the given
// line centers. Lines outside the grid plus a 5*FWHM margin only set a
// warning flag in the metadata.
inline Spectrum1D synthesize_linear(const ShiftedSpectrumLines& lines, double t2_s,
                                    const std::vector<double>& grid_thz) {
    if (!(t2_s > 0.0)) throw std::invalid_argument("T2 must be positive");
    if (grid_thz.size() < 2) throw std::invalid_argument("frequency grid too small");
    const double fwhm_thz = lorentzian_fwhm_from_t2(t2_s) * 1e-12;

    Spectrum1D s;
    s.frequency_thz = grid_thz;
    s.amplitude.assign(grid_thz.size(), 0.0);

    bool covered = true;
    const double lo = grid_thz.front() + 5.0 * fwhm_thz;
    const double hi = grid_thz.back() - 5.0 * fwhm_thz;
    for (std::size_t k = 0; k < lines.centers_rad.size(); ++k) {
        const double c = thz_from_angular(lines.centers_rad[k]);
        if (c < lo || c > hi) covered = false;
        const double w = lines.weights[k];
        if (w == 0.0) continue;
        for (std::size_t i = 0; i < grid_thz.size(); ++i)
            s.amplitude[i] += w * lorentzian_unit_peak(grid_thz[i], c, fwhm_thz);
    }
    if (!covered) s.metadata["grid_warning"] = "line centers within 5 FWHM of the grid edge";
    return s;
}

struct LinearOptions {
    bool dark_pedestal = false;   // pedestal couples but does not emit
    bool zero_interaction = false;  // skip couplings: bare-line spectrum
    int threads = 1;
};

inline ShiftedSpectrumLines ensemble_lines(const Ensemble& ens, const MaterialParams& mat,
                                           const LinearOptions& opt) {
    CouplingMatrix m = build_coupling_matrix(ens, mat);
    if (opt.zero_interaction) {
        const auto n = m.h.rows();
        Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(n, n);
        diag.diagonal() = m.h.diagonal();
        m.h = diag;
    }
    return diagonalize_single_excitation(m, brightness_amplitudes(ens, opt.dark_pedestal));
}

// Mean spectrum over independent realizations; realization k runs with
// rng_seed = config.rng_seed + k, so the result is deterministic given the
// base seed and the averaging is an associative map-reduce.
inline Spectrum1D ensemble_average_spectrum(const EnsembleConfig& cfg, std::size_t n_realizations,
                                            double t2_s, const std::vector<double>& grid_thz,
                                            const MaterialParams& mat,
                                            const LinearOptions& opt = {}) {
    if (n_realizations < 1) throw std::invalid_argument("need at least one realization");
    std::vector<Spectrum1D> per_run(n_realizations);
    parallel_for(n_realizations, opt.threads, [&](std::size_t k) {
        try {
            EnsembleConfig c = cfg;
            c.rng_seed = cfg.rng_seed + k;
            const Ensemble ens = sample_ensemble(c);
            if (ens.size() == 0) {
                Spectrum1D empty;
                empty.frequency_thz = grid_thz;
                empty.amplitude.assign(grid_thz.size(), 0.0);
                per_run[k] = empty;
                return;
            }
            per_run[k] = synthesize_linear(ensemble_lines(ens, mat, opt), t2_s, grid_thz);
        } catch (const std::exception& e) {
            throw std::runtime_error("realization " + std::to_string(k) + ": " + e.what());
        }
    });

    Spectrum1D mean;
    mean.frequency_thz = grid_thz;
    mean.amplitude.assign(grid_thz.size(), 0.0);
    bool warned = false;
    for (const auto& s : per_run) {
        for (std::size_t i = 0; i < grid_thz.size(); ++i) mean.amplitude[i] += s.amplitude[i];
        warned = warned || s.metadata.count("grid_warning") > 0;
    }
    const double inv = 1.0 / static_cast<double>(n_realizations);
    for (auto& a : mean.amplitude) a *= inv;
    if (warned) mean.metadata["grid_warning"] = "line centers within 5 FWHM of the grid edge";
    return mean;
}

// Trapezoidal integral of a spectrum over its grid (THz * amplitude units).
inline double integrate(const Spectrum1D& s) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < s.frequency_thz.size(); ++i)
        acc += 0.5 * (s.amplitude[i] + s.amplitude[i + 1]) *
               (s.frequency_thz[i + 1] - s.frequency_thz[i]);
    return acc;
}

struct OverlayResidual {
    double rms = 0.0;
    double max_abs = 0.0;
};

// Compare a simulated spectrum against a measured one on the simulated grid
// after normalizing both to unit peak. Measured values are linearly
// interpolated; purely diagnostic.
inline OverlayResidual overlay_residual(const Spectrum1D& sim, const Spectrum1D& measured) {
    if (measured.frequency_thz.size() < 2) throw std::invalid_argument("measured spectrum too small");
    auto peak = [](const Spectrum1D& s) {
        double m = 0.0;
        for (double a : s.amplitude) m = std::max(m, std::abs(a));
        return m > 0.0 ? m : 1.0;
    };
    const double ps = peak(sim);
    const double pm = peak(measured);
    OverlayResidual r;
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < sim.frequency_thz.size(); ++i) {
        const double f = sim.frequency_thz[i];
        if (f < measured.frequency_thz.front() || f > measured.frequency_thz.back()) continue;
        auto it = std::lower_bound(measured.frequency_thz.begin(), measured.frequency_thz.end(), f);
        std::size_t j = static_cast<std::size_t>(it - measured.frequency_thz.begin());
        if (j == 0) j = 1;
        const double f0 = measured.frequency_thz[j - 1];
        const double f1 = measured.frequency_thz[j];
        const double t = (f - f0) / (f1 - f0);
        const double mv = (1.0 - t) * measured.amplitude[j - 1] + t * measured.amplitude[j];
        const double d = sim.amplitude[i] / ps - mv / pm;
        acc += d * d;
        r.max_abs = std::max(r.max_abs, std::abs(d));
        ++count;
    }
    if (count > 0) r.rms = std::sqrt(acc / static_cast<double>(count));
    return r;
}

}  // namespace dqsim
