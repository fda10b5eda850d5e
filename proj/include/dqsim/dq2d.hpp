#pragma once

// Closed-form third-order double-quantum 2D response of an interacting
// emitter pair, evaluated on (omega_T, omega_t) grids, plus peak-box
// integration and slice extraction.
//
// For a pair with transitions Omega_10' and Omega_01' (complex, rad/s),
// doubly-excited frequency Omega_11' = Omega_10' + Omega_01' and complex
// interaction parameter Delta, the response at double-quantum delay tau is
//
//   S(tau, wT, wt) = (mu_10^2 mu_1'0'^2 / 8 hbar^3)
//                    * (exp(-i Omega_10' tau) + exp(-i Omega_01' tau))
//                    / (wT - Omega_11' - Delta)
//                    * [  1/(wt - Omega_01') - 1/(wt - Omega_01' - Delta)
//                       + 1/(wt - Omega_10') - 1/(wt - Omega_10' - Delta) ]
//
// The bracket cancels identically at Delta = 0: the response is background
// free. Delta is stored as the complex number entering the denominators;
// Re(Delta) shifts peaks (interaction-induced shift) and -Im(Delta) adds
// dephasing (interaction-induced broadening), so Delta = shift - i*dephasing.

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "dqsim/coupling.hpp"
#include "dqsim/ensemble.hpp"
#include "dqsim/linear_spectrum.hpp"
#include "dqsim/units.hpp"

namespace dqsim {

inline std::complex<double> interaction_delta(double shift_rad, double dephasing_rad) {
    return {shift_rad, -dephasing_rad};
}

struct PairSystem {
    ComplexFrequency omega_10p;  // first transition, rad/s
    ComplexFrequency omega_01p;  // second transition, rad/s
    double mu_10 = 0.0;          // C*m
    double mu_1p0p = 0.0;        // C*m (equal-moment assumption unless set apart)
    std::complex<double> delta{0.0, 0.0};  // rad/s, shift - i*dephasing

    ComplexFrequency omega_11p() const { return omega_10p + omega_01p; }
    double shift_rad() const { return delta.real(); }
    double dephasing_rad() const { return -delta.imag(); }
};

inline std::complex<double> pair_response(const PairSystem& pair, double tau_s, double omega_T_rad,
                                        double omega_t_rad) {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> w1 = pair.omega_10p.value();
    const std::complex<double> w2 = pair.omega_01p.value();
    const std::complex<double> w11 = w1 + w2;
    const std::complex<double> d = pair.delta;

    const double mu2a = pair.mu_10 * pair.mu_10;
    const double mu2b = pair.mu_1p0p * pair.mu_1p0p;
    const double h3 = PhysConstants::hbar * PhysConstants::hbar * PhysConstants::hbar;
    const double prefactor = mu2a * mu2b / (8.0 * h3);

    const std::complex<double> coherence = std::exp(-i * w1 * tau_s) + std::exp(-i * w2 * tau_s);

    const std::complex<double> den_T = omega_T_rad - w11 - d;
    if (den_T == 0.0) throw pole_error("omega_T - Omega_11' - Delta");
    const std::complex<double> b1 = omega_t_rad - w2;
    const std::complex<double> b2 = omega_t_rad - w2 - d;
    const std::complex<double> b3 = omega_t_rad - w1;
    const std::complex<double> b4 = omega_t_rad - w1 - d;
    if (b1 == 0.0) throw pole_error("omega_t - Omega_01'");
    if (b2 == 0.0) throw pole_error("omega_t - Omega_01' - Delta");
    if (b3 == 0.0) throw pole_error("omega_t - Omega_10'");
    if (b4 == 0.0) throw pole_error("omega_t - Omega_10' - Delta");

    // Grouped so the Delta = 0 cancellation is exact in floating point.
    const std::complex<double> bracket = (1.0 / b1 - 1.0 / b2) + (1.0 / b3 - 1.0 / b4);
    return prefactor * coherence / den_T * bracket;
}

struct Spectrum2D {
    std::vector<double> omega_T_thz;
    std::vector<double> omega_t_thz;
    std::vector<std::complex<double>> values;  // row-major, [iT * n_t + it]
    double tau_s = 0.0;
    std::map<std::string, std::string> metadata;

    std::size_t n_T() const { return omega_T_thz.size(); }
    std::size_t n_t() const { return omega_t_thz.size(); }
    std::complex<double>& at(std::size_t iT, std::size_t it) { return values[iT * n_t() + it]; }
    const std::complex<double>& at(std::size_t iT, std::size_t it) const {
        return values[iT * n_t() + it];
    }
    double max_abs() const {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }
};

struct WeightedPair {
    PairSystem pair;
    double weight = 1.0;
};

// Weighted sum of pair responses over the grid. Linear in the weights.
inline Spectrum2D grid_response(const std::vector<WeightedPair>& pairs, double tau_s,
                                const std::vector<double>& omega_T_thz,
                                const std::vector<double>& omega_t_thz, int threads = 1) {
    if (pairs.empty()) throw std::invalid_argument("pair list is empty");
    Spectrum2D s;
    s.omega_T_thz = omega_T_thz;
    s.omega_t_thz = omega_t_thz;
    s.tau_s = tau_s;
    s.values.assign(omega_T_thz.size() * omega_t_thz.size(), {0.0, 0.0});

    parallel_for(omega_T_thz.size(), threads, [&](std::size_t iT) {
        const double wT = angular_from_thz(omega_T_thz[iT]);
        for (std::size_t it = 0; it < omega_t_thz.size(); ++it) {
            const double wt = angular_from_thz(omega_t_thz[it]);
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                try {
                    acc += pairs[p].weight * pair_response(pairs[p].pair, tau_s, wT, wt);
                } catch (const pole_error& e) {
                    throw pole_error(e.denominator + " (pair " + std::to_string(p) + ")");
                }
            }
            s.at(iT, it) = acc;
        }
    });
    return s;
}

struct PeakBox {
    std::string label;
    double omega_T_lo_thz = 0.0;
    double omega_T_hi_thz = 0.0;
    double omega_t_lo_thz = 0.0;
    double omega_t_hi_thz = 0.0;
};

enum class PeakMode { Magnitude, Real, Imaginary };

inline PeakMode peak_mode_from_string(const std::string& s) {
    if (s == "magnitude") return PeakMode::Magnitude;
    if (s == "real") return PeakMode::Real;
    if (s == "imaginary") return PeakMode::Imaginary;
    throw std::invalid_argument("unknown peak mode: " + s);
}

// 2D trapezoidal integral of the selected component over the box.
inline double integrate_peak(const Spectrum2D& s, const PeakBox& box, PeakMode mode) {
    if (!(box.omega_T_hi_thz > box.omega_T_lo_thz) || !(box.omega_t_hi_thz > box.omega_t_lo_thz))
        throw std::invalid_argument("peak box ranges must be non-empty");
    if (box.omega_T_lo_thz < s.omega_T_thz.front() || box.omega_T_hi_thz > s.omega_T_thz.back() ||
        box.omega_t_lo_thz < s.omega_t_thz.front() || box.omega_t_hi_thz > s.omega_t_thz.back())
        throw std::invalid_argument("peak box '" + box.label + "' lies outside the grid");

    auto component = [mode](const std::complex<double>& v) {
        switch (mode) {
            case PeakMode::Magnitude: return std::abs(v);
            case PeakMode::Real: return v.real();
            case PeakMode::Imaginary: return v.imag();
        }
        return 0.0;
    };

    auto range = [](const std::vector<double>& axis, double lo, double hi, std::size_t& a,
                    std::size_t& b) {
        a = 0;
        while (axis[a] < lo) ++a;
        b = axis.size() - 1;
        while (axis[b] > hi) --b;
    };
    std::size_t iT0, iT1, it0, it1;
    range(s.omega_T_thz, box.omega_T_lo_thz, box.omega_T_hi_thz, iT0, iT1);
    range(s.omega_t_thz, box.omega_t_lo_thz, box.omega_t_hi_thz, it0, it1);
    if (iT1 <= iT0 || it1 <= it0)
        throw std::invalid_argument("peak box '" + box.label + "' contains fewer than 2x2 grid points");

    double acc = 0.0;
    for (std::size_t iT = iT0; iT < iT1; ++iT) {
        const double dT = s.omega_T_thz[iT + 1] - s.omega_T_thz[iT];
        for (std::size_t it = it0; it < it1; ++it) {
            const double dt = s.omega_t_thz[it + 1] - s.omega_t_thz[it];
            const double cell = component(s.at(iT, it)) + component(s.at(iT + 1, it)) +
                                component(s.at(iT, it + 1)) + component(s.at(iT + 1, it + 1));
            acc += 0.25 * cell * dT * dt;
        }
    }
    return acc;
}

enum class FixedAxis { OmegaT, OmegaSmallT };

// A complex 1D cut through a 2D spectrum at a fixed grid line.
struct Slice1D {
    std::vector<double> axis_thz;
    std::vector<std::complex<double>> values;
    FixedAxis fixed_axis = FixedAxis::OmegaT;
    double fixed_value_thz = 0.0;  // the grid line actually used
    std::size_t fixed_index = 0;
    double tau_s = 0.0;
    std::map<std::string, std::string> metadata;
};

// Nearest-grid-line extraction, no interpolation; the chosen line is
// recorded in the result.
inline Slice1D extract_slice(const Spectrum2D& s, FixedAxis fixed, double value_thz) {
    const std::vector<double>& axis = (fixed == FixedAxis::OmegaT) ? s.omega_T_thz : s.omega_t_thz;
    if (value_thz < axis.front() || value_thz > axis.back())
        throw std::invalid_argument("slice position outside the grid");
    std::size_t best = 0;
    double best_d = std::abs(axis[0] - value_thz);
    for (std::size_t i = 1; i < axis.size(); ++i) {
        const double d = std::abs(axis[i] - value_thz);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }

    Slice1D out;
    out.fixed_axis = fixed;
    out.fixed_index = best;
    out.fixed_value_thz = axis[best];
    out.tau_s = s.tau_s;
    if (fixed == FixedAxis::OmegaT) {
        out.axis_thz = s.omega_t_thz;
        out.values.resize(s.n_t());
        for (std::size_t it = 0; it < s.n_t(); ++it) out.values[it] = s.at(best, it);
    } else {
        out.axis_thz = s.omega_T_thz;
        out.values.resize(s.n_T());
        for (std::size_t iT = 0; iT < s.n_T(); ++iT) out.values[iT] = s.at(iT, best);
    }
    return out;
}

// Pair list for ensemble spectra: mutual nearest-neighbor pairing, with the
// pair shift set from the dipole coupling of the two emitters and a common
// configured dephasing. This is the bridge that keeps the linear and
// nonlinear pictures consistent with one another.
inline std::vector<WeightedPair> pairs_from_ensemble(const Ensemble& ens,
                                                     const MaterialParams& mat,
                                                     double dephasing_rad) {
    const auto nn = nearest_neighbor_indices(ens);
    std::vector<WeightedPair> out;
    for (std::size_t i = 0; i < nn.size(); ++i) {
        const std::size_t j = nn[i];
        if (j < i && nn[j] == i) continue;  // mutual pair already emitted
        const auto& a = ens.emitters[i];
        const auto& b = ens.emitters[j];
        const double j_hz = dipole_coupling(a.dipole_vector(), b.dipole_vector(),
                                            b.position - a.position, mat.relative_permittivity);
        WeightedPair wp;
        wp.pair.omega_10p = a.bare_frequency;
        wp.pair.omega_01p = b.bare_frequency;
        wp.pair.mu_10 = a.dipole_moment;
        wp.pair.mu_1p0p = b.dipole_moment;
        wp.pair.delta = interaction_delta(angular_from_hz(j_hz), dephasing_rad);
        wp.weight = 1.0;
        out.push_back(wp);
    }
    return out;
}

}  // namespace dqsim
