#pragma once

// Brute-force time-domain treatment of the four-level "diamond" system built
// from two coupled two-level emitters: a density-matrix propagator for
// driven dynamics and a four-pulse pathway construction of the double-
// quantum 2D response, both independent of the closed-form lineshape.
//
// Basis ordering: {00', 10', 01', 11'}. The interaction acts on |11'> as a
// complex level addition shift - i*dephasing (non-Hermitian effective
// Hamiltonian).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "dqsim/dq2d.hpp"
#include "dqsim/units.hpp"

namespace dqsim {

struct DiamondState {
    Eigen::Matrix4cd rho;

    static DiamondState ground() {
        DiamondState s;
        s.rho.setZero();
        s.rho(0, 0) = 1.0;
        return s;
    }

    double trace_real() const { return rho.trace().real(); }

    double hermiticity_error() const {
        return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    }

    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (rho + rho.adjoint()));
        return es.eigenvalues().minCoeff();
    }

    double population(int level) const { return rho(level, level).real(); }
};

enum class Envelope { DeltaLike, Gaussian };

struct DriveSpec {
    Envelope envelope = Envelope::DeltaLike;
    double area_rad = 0.0;      // integral of the Rabi frequency
    double fwhm_s = 0.0;        // Gaussian envelope FWHM
    double detuning_rad = 0.0;  // carrier detuning from both transitions
    std::complex<double> delta_11{0.0, 0.0};  // shift - i*dephasing on |11'>
    double phase_rad = 0.0;     // global drive phase
};

namespace detail {

// Raising operator of the diamond with equal transition moments folded into
// the Rabi frequency: couples 00'->10', 00'->01', 10'->11', 01'->11'.
inline Eigen::Matrix4cd diamond_raising(double mu_a = 1.0, double mu_b = 1.0) {
    Eigen::Matrix4cd sp = Eigen::Matrix4cd::Zero();
    sp(1, 0) = mu_a;
    sp(2, 0) = mu_b;
    sp(3, 1) = mu_b;
    sp(3, 2) = mu_a;
    return sp;
}

}  // namespace detail

// Fixed-step classical fourth-order propagation of
// rho' = -i (H rho - rho H^dagger) in the frame rotating at the drive
// carrier. Step-size contract: dt <= duration/100 and dt * (largest energy
// scale) <= 0.05 rad.
inline DiamondState propagate(const DiamondState& initial, const DriveSpec& drive,
                              double duration_s, double dt_s) {
    if (!(duration_s > 0.0) || !(dt_s > 0.0))
        throw std::invalid_argument("duration and dt must be positive");
    if (drive.area_rad < 0.0) throw std::invalid_argument("pulse area must be >= 0");
    if (drive.envelope == Envelope::Gaussian && !(drive.fwhm_s > 0.0))
        throw std::invalid_argument("Gaussian envelope needs a positive FWHM");

    const double ln2 = std::log(2.0);
    const double peak_rabi =
        (drive.envelope == Envelope::DeltaLike)
            ? drive.area_rad / duration_s
            : drive.area_rad / (drive.fwhm_s * std::sqrt(M_PI / (4.0 * ln2)));
    const double max_energy = std::max({peak_rabi, 2.0 * std::abs(drive.detuning_rad),
                                        std::abs(drive.delta_11)});
    const double dt_required = std::min(duration_s / 100.0,
                                        max_energy > 0.0 ? 0.05 / max_energy : duration_s / 100.0);
    if (dt_s > dt_required) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6g", dt_required);
        throw std::invalid_argument(std::string("time step too large; need dt <= ") + buf + " s");
    }

    const std::complex<double> i(0.0, 1.0);
    const Eigen::Matrix4cd sp = detail::diamond_raising();
    const Eigen::Matrix4cd coupling =
        std::exp(i * drive.phase_rad) * sp +
        std::exp(-i * drive.phase_rad) * sp.adjoint().eval();

    Eigen::Matrix4cd h_static = Eigen::Matrix4cd::Zero();
    h_static(1, 1) = drive.detuning_rad;
    h_static(2, 2) = drive.detuning_rad;
    h_static(3, 3) = 2.0 * drive.detuning_rad + drive.delta_11;

    auto rabi = [&](double t) {
        if (drive.envelope == Envelope::DeltaLike) return drive.area_rad / duration_s;
        const double x = t - 0.5 * duration_s;
        return peak_rabi * std::exp(-4.0 * ln2 * x * x / (drive.fwhm_s * drive.fwhm_s));
    };
    auto deriv = [&](double t, const Eigen::Matrix4cd& rho) -> Eigen::Matrix4cd {
        const Eigen::Matrix4cd h = 0.5 * rabi(t) * coupling + h_static;
        return -i * (h * rho - rho * h.adjoint());
    };

    const auto nsteps = static_cast<std::size_t>(std::ceil(duration_s / dt_s));
    const double dt = duration_s / static_cast<double>(nsteps);
    DiamondState state = initial;
    double t = 0.0;
    for (std::size_t n = 0; n < nsteps; ++n, t += dt) {
        const Eigen::Matrix4cd k1 = deriv(t, state.rho);
        const Eigen::Matrix4cd k2 = deriv(t + 0.5 * dt, state.rho + 0.5 * dt * k1);
        const Eigen::Matrix4cd k3 = deriv(t + 0.5 * dt, state.rho + 0.5 * dt * k2);
        const Eigen::Matrix4cd k4 = deriv(t + dt, state.rho + dt * k3);
        state.rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return state;
}

struct TimeGrid {
    std::size_t n = 0;
    double dt_s = 0.0;

    double duration() const { return dt_s * static_cast<double>(n - 1); }
};

namespace detail {

// Per-element complex evolution frequencies of the free diamond. Each
// subsystem contributes its transition frequency and coherence dephasing
// independently (uncorrelated-pair rule: populations do not decay, a
// spectator excitation adds no dephasing), and the |11'> interaction adds
// delta on the ket side and -conj(delta) on the bra side.
inline Eigen::Matrix4cd element_frequencies(const PairSystem& pair) {
    const std::complex<double> i(0.0, 1.0);
    const int exc_a[4] = {0, 1, 0, 1};
    const int exc_b[4] = {0, 0, 1, 1};
    Eigen::Matrix4cd theta = Eigen::Matrix4cd::Zero();
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            std::complex<double> v =
                static_cast<double>(exc_a[a] - exc_a[b]) * pair.omega_10p.omega +
                static_cast<double>(exc_b[a] - exc_b[b]) * pair.omega_01p.omega;
            v -= i * (std::abs(exc_a[a] - exc_a[b]) * pair.omega_10p.gamma +
                      std::abs(exc_b[a] - exc_b[b]) * pair.omega_01p.gamma);
            if (a == 3) v += pair.delta;
            if (b == 3) v -= std::conj(pair.delta);
            theta(a, b) = v;
        }
    }
    return theta;
}

inline Eigen::Matrix4cd elementwise_evolution(const Eigen::Matrix4cd& theta, double t) {
    const std::complex<double> i(0.0, 1.0);
    Eigen::Matrix4cd f;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) f(a, b) = std::exp(-i * theta(a, b) * t);
    return f;
}

}  // namespace detail

// Third-order double-quantum response built by explicit pathway propagation:
// four delta pulses acting once each at first order, free evolution between
// them, photon-number-weighted population detection, and a discrete Fourier
// transform of the (T, t) surface onto the requested frequency axes. The
// pulse-phase signature +phi1 +phi2 -phi3 -phi4 selects the pathway
// ground -> single coherence -> double-quantum coherence -> emission.
inline Spectrum2D perturbative_dq2d(const PairSystem& pair, double tau_s, const TimeGrid& grid_T,
                                    const TimeGrid& grid_t,
                                    const std::vector<double>& omega_T_thz,
                                    const std::vector<double>& omega_t_thz) {
    if (grid_T.n < 8 || grid_t.n < 8 || !(grid_T.dt_s > 0.0) || !(grid_t.dt_s > 0.0))
        throw std::invalid_argument("time grids must have at least 8 points and positive steps");

    const double g1 = pair.omega_10p.gamma;
    const double g2 = pair.omega_01p.gamma;
    const double dephasing = pair.dephasing_rad();
    const double decay_T = g1 + g2 + dephasing;
    const double decay_t = std::min(std::min(g1, g2), std::min(g1, g2) + dephasing);
    const double need = std::log(1e4);
    if (!(decay_T > 0.0) || decay_T * grid_T.duration() < need)
        throw std::invalid_argument("T grid too short: double-quantum coherence must decay to 1e-4");
    if (!(decay_t > 0.0) || decay_t * grid_t.duration() < need)
        throw std::invalid_argument("t grid too short: emission coherences must decay to 1e-4");

    const std::complex<double> i(0.0, 1.0);
    const Eigen::Matrix4cd sp = detail::diamond_raising(pair.mu_10, pair.mu_1p0p);
    const Eigen::Matrix4cd sm = sp.adjoint();
    auto kick_plus = [&](const Eigen::Matrix4cd& r) -> Eigen::Matrix4cd {
        return -0.5 * i * (sp * r - r * sp);
    };
    auto kick_minus = [&](const Eigen::Matrix4cd& r) -> Eigen::Matrix4cd {
        return -0.5 * i * (sm * r - r * sm);
    };

    const Eigen::Matrix4cd theta = detail::element_frequencies(pair);
    const Eigen::Matrix4cd step_T = detail::elementwise_evolution(theta, grid_T.dt_s);
    const Eigen::Matrix4cd step_t = detail::elementwise_evolution(theta, grid_t.dt_s);

    // Ground state through the two raising pulses separated by tau.
    Eigen::Matrix4cd rho = DiamondState::ground().rho;
    rho = kick_plus(rho);
    rho = rho.cwiseProduct(detail::elementwise_evolution(theta, tau_s)).eval();
    rho = kick_plus(rho);

    const double detection_weight[4] = {0.0, 1.0, 1.0, 2.0};  // photons emitted per level

    Eigen::MatrixXcd response(grid_T.n, grid_t.n);
    Eigen::Matrix4cd rho_T = rho;
    for (std::size_t iT = 0; iT < grid_T.n; ++iT) {
        const Eigen::Matrix4cd rho3 = kick_minus(rho_T);
        Eigen::Matrix4cd rho_t = rho3;
        for (std::size_t it = 0; it < grid_t.n; ++it) {
            const Eigen::Matrix4cd rho4 = kick_minus(rho_t);
            std::complex<double> signal{0.0, 0.0};
            for (int a = 0; a < 4; ++a) signal += detection_weight[a] * rho4(a, a);
            response(static_cast<Eigen::Index>(iT), static_cast<Eigen::Index>(it)) = signal;
            rho_t = rho_t.cwiseProduct(step_t).eval();
        }
        rho_T = rho_T.cwiseProduct(step_T).eval();
    }

    // One-sided discrete Fourier transform with trapezoid end weights.
    auto transform = [&](const std::vector<double>& axis_thz, const TimeGrid& g) {
        Eigen::MatrixXcd m(axis_thz.size(), g.n);
        for (std::size_t a = 0; a < axis_thz.size(); ++a) {
            const double w = angular_from_thz(axis_thz[a]);
            for (std::size_t k = 0; k < g.n; ++k) {
                const double weight = (k == 0 || k + 1 == g.n) ? 0.5 : 1.0;
                m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(k)) =
                    weight * g.dt_s * std::exp(i * w * (g.dt_s * static_cast<double>(k)));
            }
        }
        return m;
    };
    const Eigen::MatrixXcd ft_T = transform(omega_T_thz, grid_T);
    const Eigen::MatrixXcd ft_t = transform(omega_t_thz, grid_t);

    // Restore the third-order prefactor for unit pulse areas (the four
    // half-kicks contribute 1/16; the perturbative expansion carries
    // 1/(8 hbar^3)).
    const double h3 = PhysConstants::hbar * PhysConstants::hbar * PhysConstants::hbar;
    const Eigen::MatrixXcd spectrum = (2.0 / h3) * (ft_T * response * ft_t.transpose());

    Spectrum2D out;
    out.omega_T_thz = omega_T_thz;
    out.omega_t_thz = omega_t_thz;
    out.tau_s = tau_s;
    out.values.resize(omega_T_thz.size() * omega_t_thz.size());
    for (std::size_t a = 0; a < omega_T_thz.size(); ++a)
        for (std::size_t b = 0; b < omega_t_thz.size(); ++b)
            out.at(a, b) = spectrum(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    out.metadata["source"] = "oracle";
    return out;
}

}  // namespace dqsim
