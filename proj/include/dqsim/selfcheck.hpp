#pragma once

// Built-in verification suites 1-6: fast, deterministic checks of the core
// numerics that can run from the command line. Each check pins its own
// inputs and tolerances.

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "dqsim/coupling.hpp"
#include "dqsim/dq2d.hpp"
#include "dqsim/ensemble.hpp"
#include "dqsim/oracle.hpp"
#include "dqsim/rabi_pump.hpp"

namespace dqsim {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace selfcheck {

inline PairSystem random_pair(RandomStream& rng) {
    PairSystem p;
    p.omega_10p = {angular_from_thz(rng.uniform(405.0, 411.0)),
                   angular_from_ghz(rng.uniform(0.1, 5.0))};
    p.omega_01p = {angular_from_thz(rng.uniform(405.0, 411.0)),
                   angular_from_ghz(rng.uniform(0.1, 5.0))};
    p.mu_10 = debye_to_si(rng.uniform(5.0, 20.0));
    p.mu_1p0p = debye_to_si(rng.uniform(5.0, 20.0));
    p.delta = {0.0, 0.0};
    return p;
}

// 1. Background-free cancellation: with no interaction the response is zero
// bit-for-bit, not merely small.
inline CheckResult background_free_cancellation() {
    CheckResult r{1, "background-free cancellation at zero interaction", false, "", 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    RandomStream rng(20260810);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const PairSystem pair = random_pair(rng);
        const double tau = rng.uniform(0.0, 5e-12);
        const double wc = pair.omega_10p.omega + pair.omega_01p.omega;
        const double w0 = pair.omega_10p.omega;
        for (int i = 0; i < 64; ++i) {
            const double wT = wc + angular_from_ghz(-50.0 + 100.0 * i / 63.0);
            for (int j = 0; j < 64; ++j) {
                const double wt = w0 + angular_from_ghz(-50.0 + 100.0 * j / 63.0);
                worst = std::max(worst, std::abs(pair_response(pair, tau, wT, wt)));
            }
        }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = (worst == 0.0) && r.seconds < 5.0;
    std::ostringstream d;
    d << "max |S| = " << worst << " over 1000 pairs x 64x64 grid, " << r.seconds << " s";
    r.detail = d.str();
    return r;
}

// 2. Pulse-area law: the four-level propagator reproduces the cos^4/sin^4
// populations for delta-like resonant pulses.
inline CheckResult rabi_populations_oracle() {
    CheckResult r{2, "four-level propagator matches pulse-area populations", false, "", 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int k = 0; k <= 16; ++k) {
        const double theta = two_pi * k / 16.0;
        DriveSpec drive;
        drive.envelope = Envelope::DeltaLike;
        drive.area_rad = theta;
        const double duration = 1e-12;
        const double peak = theta / duration;
        const double dt = std::min(duration / 128.0, peak > 0.0 ? 0.04 / peak : duration);
        const DiamondState final =
            propagate(DiamondState::ground(), drive, duration, dt);
        const RabiPopulations expect = rabi_populations(theta);
        worst = std::max(worst, std::abs(final.population(0) - expect.ground));
        worst = std::max(worst, std::abs(final.population(3) - expect.twice));
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = worst < 1e-3 && r.seconds < 10.0;
    std::ostringstream d;
    d << "max population error = " << worst << " over 17 areas in [0, 2pi], " << r.seconds << " s";
    r.detail = d.str();
    return r;
}

// 3. Closed form vs. pathway oracle on matched grids, plus the zero-
// interaction channel of the oracle pipeline.
inline CheckResult closed_form_vs_oracle() {
    CheckResult r{3, "closed-form response matches the pathway oracle", false, "", 0.0};
    const auto t0 = std::chrono::steady_clock::now();

    PairSystem pair;
    pair.omega_10p = {angular_from_thz(407.9), 1.0 / 120e-12};
    pair.omega_01p = pair.omega_10p;
    pair.mu_10 = debye_to_si(14.3);
    pair.mu_1p0p = pair.mu_10;
    pair.delta = interaction_delta(angular_from_ghz(6.0), angular_from_ghz(2.0));
    const double tau = 1e-12;

    const double fc_T = thz_from_angular(pair.omega_11p().omega);
    const double fc_t = thz_from_angular(pair.omega_10p.omega);
    const std::vector<double> axis_T = uniform_grid(fc_T - 0.030, fc_T + 0.030, 81);
    const std::vector<double> axis_t = uniform_grid(fc_t - 0.020, fc_t + 0.020, 81);

    const Spectrum2D oracle = perturbative_dq2d(pair, tau, TimeGrid{320, 1.2e-12},
                                                TimeGrid{768, 1.6e-12}, axis_T, axis_t);
    const Spectrum2D closed = grid_response({{pair, 1.0}}, tau, axis_T, axis_t);

    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < closed.values.size(); ++i) {
        num += std::norm(oracle.values[i] - closed.values[i]);
        den += std::norm(closed.values[i]);
    }
    const double rms = std::sqrt(num / den);

    PairSystem null_pair = pair;
    null_pair.delta = {0.0, 0.0};
    const Spectrum2D null_spec = perturbative_dq2d(null_pair, tau, TimeGrid{512, 1.2e-12},
                                                   TimeGrid{768, 1.6e-12}, axis_T, axis_t);
    const double null_rel = null_spec.max_abs() / oracle.max_abs();

    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = rms < 0.02 && null_rel < 1e-10 && r.seconds < 60.0;
    std::ostringstream d;
    d << "RMS mismatch = " << rms << ", zero-interaction channel = " << null_rel << " relative, "
      << r.seconds << " s";
    r.detail = d.str();
    return r;
}

// 4. Dipole-coupling anchor against hand arithmetic, and the exact factor
// -2 between head-to-tail and side-by-side geometries.
inline CheckResult dipole_coupling_anchor() {
    CheckResult r{4, "dipole-coupling magnitude and geometry anchors", false, "", 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    const double mu = debye_to_si(14.3);
    const double eps_r = 5.76;
    const Vec3 rvec{10e-9, 0.0, 0.0};
    const Vec3 side{0.0, 0.0, mu};
    const Vec3 along{mu, 0.0, 0.0};

    const double j_side = dipole_coupling(side, side, rvec, eps_r);
    const double j_along = dipole_coupling(along, along, rvec, eps_r);

    // mu^2 / (4 pi eps0 eps_r h R^3), assembled independently of the library path.
    const double expect = (mu * mu) /
                          (4.0 * M_PI * 8.8541878128e-12 * eps_r * 6.62607015e-34 * 1e-24);
    const bool magnitude_ok = std::abs(j_side - expect) <= 0.01 * expect &&
                              std::abs(j_side - 5.36e9) <= 0.01 * 5.36e9;
    const bool geometry_ok = (j_along == -2.0 * j_side);

    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = magnitude_ok && geometry_ok;
    std::ostringstream d;
    d << "side-by-side = " << j_side / 1e9 << " GHz (expected 5.36), head-to-tail/side = "
      << j_along / j_side;
    r.detail = d.str();
    return r;
}

// 5. Density scale anchor: at an effective density of 1e17 cm^-3 the median
// nearest-neighbor coupling magnitude falls in the GHz window.
inline CheckResult density_coupling_scale() {
    CheckResult r{5, "nearest-neighbor coupling scale at working density", false, "", 0.0};
    const auto t0 = std::chrono::steady_clock::now();

    EnsembleConfig cfg;
    cfg.implanted_density_cm3 = 1e18;
    cfg.yield_fraction = 0.10;
    const double side = std::cbrt(1000.0 / cfg.effective_density_m3());
    cfg.box_m = {side, side, side};
    cfg.rng_seed = 777;
    const MaterialParams mat = MaterialParams::from_index(2.4);

    std::vector<double> couplings;
    std::size_t total = 0;
    for (int k = 0; k < 100; ++k) {
        EnsembleConfig c = cfg;
        c.rng_seed = cfg.rng_seed + static_cast<std::uint64_t>(k);
        const Ensemble ens = sample_ensemble(c);
        total += ens.size();
        const auto nn = nearest_neighbor_indices(ens);
        for (std::size_t i = 0; i < nn.size(); ++i) {
            const auto& a = ens.emitters[i];
            const auto& b = ens.emitters[nn[i]];
            couplings.push_back(std::abs(dipole_coupling(
                a.dipole_vector(), b.dipole_vector(), b.position - a.position,
                mat.relative_permittivity)));
        }
    }
    std::sort(couplings.begin(), couplings.end());
    const double median_ghz = couplings[couplings.size() / 2] / 1e9;

    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = median_ghz >= 0.1 && median_ghz <= 10.0 && r.seconds < 120.0;
    std::ostringstream d;
    d << "median |J| = " << median_ghz << " GHz over " << total << " emitters in 100 realizations, "
      << r.seconds << " s";
    r.detail = d.str();
    return r;
}

// 6. Two-emitter eigenvalue anchors: resonant splitting 2J and detuned
// splitting 2*sqrt(delta^2/4 + J^2).
inline CheckResult eigen_splitting_anchor() {
    CheckResult r{6, "two-emitter eigenvalue splittings", false, "", 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    const double w0 = angular_from_thz(407.9);
    const double j = angular_from_ghz(5.0);
    const double det = angular_from_ghz(3.0);

    CouplingMatrix resonant;
    resonant.h.resize(2, 2);
    resonant.h << w0, j, j, w0;
    const auto lines_res = diagonalize_single_excitation(resonant);
    const double split_res = lines_res.centers_rad[1] - lines_res.centers_rad[0];
    const double err_res = std::abs(split_res - 2.0 * j) / (2.0 * j);

    CouplingMatrix detuned;
    detuned.h.resize(2, 2);
    detuned.h << w0 - 0.5 * det, j, j, w0 + 0.5 * det;
    const auto lines_det = diagonalize_single_excitation(detuned);
    const double expect = 2.0 * std::sqrt(0.25 * det * det + j * j);
    const double split_det = lines_det.centers_rad[1] - lines_det.centers_rad[0];
    const double err_det = std::abs(split_det - expect) / expect;

    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.pass = err_res < 1e-9 && err_det < 1e-9;
    std::ostringstream d;
    d << "resonant split rel err = " << err_res << ", detuned rel err = " << err_det;
    r.detail = d.str();
    return r;
}

}  // namespace selfcheck

inline std::vector<CheckResult> run_selfchecks() {
    return {selfcheck::background_free_cancellation(), selfcheck::rabi_populations_oracle(),
            selfcheck::closed_form_vs_oracle(),        selfcheck::dipole_coupling_anchor(),
            selfcheck::density_coupling_scale(),       selfcheck::eigen_splitting_anchor()};
}

}  // namespace dqsim
