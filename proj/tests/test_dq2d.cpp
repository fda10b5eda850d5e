#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>

#include "dqsim/dq2d.hpp"

using namespace dqsim;
using cplx = std::complex<double>;

namespace {

PairSystem degenerate_pair() {
    PairSystem p;
    p.omega_10p = {angular_from_thz(408.0), angular_from_ghz(1.33)};
    p.omega_01p = p.omega_10p;
    p.mu_10 = debye_to_si(14.3);
    p.mu_1p0p = p.mu_10;
    p.delta = interaction_delta(angular_from_ghz(6.0), angular_from_ghz(2.0));
    return p;
}

PairSystem detuned_pair(double split_ghz) {
    PairSystem p = degenerate_pair();
    p.omega_10p.omega -= angular_from_ghz(0.5 * split_ghz);
    p.omega_01p.omega += angular_from_ghz(0.5 * split_ghz);
    return p;
}

// Term-by-term re-evaluation assembled in a different order, as an
// independent check of the response expression.
cplx independent_response(const PairSystem& p, double tau, double wT, double wt) {
    const cplx i(0.0, 1.0);
    const cplx o1(p.omega_10p.omega, -p.omega_10p.gamma);
    const cplx o2(p.omega_01p.omega, -p.omega_01p.gamma);
    const cplx d = p.delta;
    const cplx term1 = 1.0 / (wt - o2);
    const cplx term2 = -1.0 / (wt - o2 - d);
    const cplx term3 = 1.0 / (wt - o1);
    const cplx term4 = -1.0 / (wt - o1 - d);
    const cplx dq = 1.0 / (wT - (o1 + o2) - d);
    const cplx coh = std::exp(-i * o1 * tau) + std::exp(-i * o2 * tau);
    const double pref = std::pow(p.mu_10, 2) * std::pow(p.mu_1p0p, 2) /
                        (8.0 * std::pow(PhysConstants::hbar, 3));
    return pref * coh * dq * (term1 + term2 + term3 + term4);
}

}  // namespace

TEST_CASE("zero interaction cancels exactly") {
    PairSystem p = degenerate_pair();
    p.delta = {0.0, 0.0};
    for (double off_ghz : {-20.0, -3.0, 0.7, 12.0}) {
        const double wT = p.omega_11p().omega + angular_from_ghz(off_ghz);
        const double wt = p.omega_10p.omega + angular_from_ghz(0.3 * off_ghz);
        REQUIRE(pair_response(p, 1e-12, wT, wt) == cplx(0.0, 0.0));
    }
}

TEST_CASE("zero delay doubles the coherence factor") {
    const PairSystem p = degenerate_pair();
    const double wT = p.omega_11p().omega + p.delta.real() + angular_from_ghz(1.0);
    const double wt = p.omega_10p.omega + angular_from_ghz(0.5);
    const cplx at_zero = pair_response(p, 0.0, wT, wt);
    // exp(...) at tau = 0 is exactly 1 + 1.
    const cplx reference = independent_response(p, 0.0, wT, wt);
    REQUIRE(at_zero == reference);
    REQUIRE_THAT(std::abs(at_zero) / std::abs(independent_response(p, 0.0, wT, wt) / 2.0),
                 Catch::Matchers::WithinRel(2.0, 1e-12));
}

TEST_CASE("response matches an independent term-by-term evaluation") {
    const PairSystem p = degenerate_pair();
    const double w0 = p.omega_10p.omega;
    const double wT = p.omega_11p().omega + p.delta.real();  // on the shifted resonance

    // The shifted double-quantum resonance point itself.
    {
        const cplx a = pair_response(p, 1e-12, wT, w0);
        const cplx b = independent_response(p, 1e-12, wT, w0);
        REQUIRE_THAT(std::abs(a - b), Catch::Matchers::WithinAbs(0.0, 1e-12 * std::abs(b)));
    }
    RandomStream rng(5);
    for (int k = 0; k < 200; ++k) {
        const double wTk = wT + angular_from_ghz(rng.uniform(-30.0, 30.0));
        const double wtk = w0 + angular_from_ghz(rng.uniform(-30.0, 30.0));
        const double tau = rng.uniform(0.0, 3e-12);
        const cplx a = pair_response(p, tau, wTk, wtk);
        const cplx b = independent_response(p, tau, wTk, wtk);
        REQUIRE_THAT(std::abs(a - b), Catch::Matchers::WithinAbs(0.0, 1e-12 * std::abs(b)));
    }
}

TEST_CASE("exact pole hits identify the offending denominator") {
    // Zero-centered transitions make the pole positions exactly
    // representable, so the denominators hit 0 bit-for-bit.
    PairSystem p;
    p.omega_10p = {0.0, 0.0};
    p.omega_01p = {0.0, 0.0};
    p.mu_10 = debye_to_si(14.3);
    p.mu_1p0p = p.mu_10;
    p.delta = interaction_delta(angular_from_ghz(6.0), 0.0);  // no dephasing anywhere
    try {
        pair_response(p, 0.0, p.delta.real(), angular_from_ghz(1.0));
        FAIL("expected pole_error");
    } catch (const pole_error& e) {
        REQUIRE(e.denominator.find("omega_T") != std::string::npos);
    }
    try {
        pair_response(p, 0.0, angular_from_ghz(1.0), 0.0);
        FAIL("expected pole_error");
    } catch (const pole_error& e) {
        REQUIRE(e.denominator.find("omega_t") != std::string::npos);
    }
    try {
        pair_response(p, 0.0, angular_from_ghz(1.0), p.delta.real());
        FAIL("expected pole_error");
    } catch (const pole_error& e) {
        REQUIRE(e.denominator.find("Delta") != std::string::npos);
    }
}

TEST_CASE("grid response is linear in the weights") {
    const PairSystem p = degenerate_pair();
    const double fT = thz_from_angular(p.omega_11p().omega);
    const double ft = thz_from_angular(p.omega_10p.omega);
    const auto axis_T = uniform_grid(fT - 0.02, fT + 0.02, 21);
    const auto axis_t = uniform_grid(ft - 0.02, ft + 0.02, 21);

    const Spectrum2D one = grid_response({{p, 1.0}}, 1e-12, axis_T, axis_t);
    const Spectrum2D two = grid_response({{p, 1.0}, {p, 1.0}}, 1e-12, axis_T, axis_t);
    const Spectrum2D scaled = grid_response({{p, 2.0}}, 1e-12, axis_T, axis_t);
    for (std::size_t i = 0; i < one.values.size(); ++i) {
        REQUIRE(two.values[i] == one.values[i] + one.values[i]);
        REQUIRE(scaled.values[i] == 2.0 * one.values[i]);
    }
    // Single-pair grid equals the pointwise response.
    REQUIRE(one.at(10, 10) ==
            pair_response(p, 1e-12, angular_from_thz(axis_T[10]), angular_from_thz(axis_t[10])));
}

TEST_CASE("grid response with threads matches single-threaded evaluation") {
    const PairSystem p = degenerate_pair();
    const double fT = thz_from_angular(p.omega_11p().omega);
    const double ft = thz_from_angular(p.omega_10p.omega);
    const auto axis_T = uniform_grid(fT - 0.02, fT + 0.02, 33);
    const auto axis_t = uniform_grid(ft - 0.02, ft + 0.02, 29);
    const Spectrum2D serial = grid_response({{p, 1.0}}, 1e-12, axis_T, axis_t, 1);
    const Spectrum2D parallel = grid_response({{p, 1.0}}, 1e-12, axis_T, axis_t, 4);
    for (std::size_t i = 0; i < serial.values.size(); ++i)
        REQUIRE(serial.values[i] == parallel.values[i]);
}

TEST_CASE("resonant pair peaks on the diagonal; detuned pair splits along omega_t") {
    const double tau = 0.0;
    SECTION("resonant") {
        const PairSystem p = degenerate_pair();
        const double fT_peak = thz_from_angular(p.omega_11p().omega + p.delta.real());
        const double ft_peak = thz_from_angular(p.omega_10p.omega);
        const auto axis_T = uniform_grid(fT_peak - 0.03, fT_peak + 0.03, 121);
        const auto axis_t = uniform_grid(ft_peak - 0.03, ft_peak + 0.03, 121);
        const Spectrum2D s = grid_response({{p, 1.0}}, tau, axis_T, axis_t);
        std::size_t bT = 0, bt = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < s.n_T(); ++i)
            for (std::size_t j = 0; j < s.n_t(); ++j)
                if (std::abs(s.at(i, j)) > best) {
                    best = std::abs(s.at(i, j));
                    bT = i;
                    bt = j;
                }
        const double bin_T = axis_T[1] - axis_T[0];
        const double bin_t = axis_t[1] - axis_t[0];
        REQUIRE(std::abs(axis_T[bT] - fT_peak) <= bin_T);
        REQUIRE(std::abs(axis_t[bt] - ft_peak) <= 2.0 * bin_t);
    }
    SECTION("detuned: emission features at both transition frequencies") {
        const PairSystem p = detuned_pair(20.0);
        const double fT_peak =
            thz_from_angular(p.omega_11p().omega + p.delta.real());
        const auto axis_T = uniform_grid(fT_peak - 0.001, fT_peak + 0.001, 3);
        const double fa = thz_from_angular(p.omega_10p.omega);
        const double fb = thz_from_angular(p.omega_01p.omega);
        const auto axis_t = uniform_grid(fa - 0.01, fb + 0.01, 401);
        const Spectrum2D s = grid_response({{p, 1.0}}, tau, axis_T, axis_t);
        // Magnitude along omega_t at the double-quantum resonance has local
        // maxima near both single-transition frequencies.
        std::vector<double> mag(s.n_t());
        for (std::size_t j = 0; j < s.n_t(); ++j) mag[j] = std::abs(s.at(1, j));
        std::vector<double> peaks_thz;
        for (std::size_t j = 1; j + 1 < mag.size(); ++j)
            if (mag[j] > mag[j - 1] && mag[j] > mag[j + 1]) peaks_thz.push_back(axis_t[j]);
        REQUIRE(peaks_thz.size() >= 2);
        const double bin = axis_t[1] - axis_t[0];
        bool near_a = false, near_b = false;
        for (double f : peaks_thz) {
            if (std::abs(f - fa) < 3.0 * bin) near_a = true;
            if (std::abs(f - fb) < 3.0 * bin) near_b = true;
        }
        REQUIRE(near_a);
        REQUIRE(near_b);
    }
}

TEST_CASE("single-pair grids are rank one") {
    const PairSystem p = degenerate_pair();
    const double fT = thz_from_angular(p.omega_11p().omega);
    const double ft = thz_from_angular(p.omega_10p.omega);
    const Spectrum2D s = grid_response({{p, 1.0}}, 0.5e-12, uniform_grid(fT - 0.02, fT + 0.02, 17),
                                       uniform_grid(ft - 0.02, ft + 0.02, 19));
    // Cross-ratio test: v(i,j) v(k,l) == v(i,l) v(k,j).
    for (std::size_t i = 0; i < s.n_T(); i += 4) {
        for (std::size_t k = 1; k < s.n_T(); k += 5) {
            for (std::size_t j = 0; j < s.n_t(); j += 4) {
                for (std::size_t l = 1; l < s.n_t(); l += 5) {
                    const cplx lhs = s.at(i, j) * s.at(k, l);
                    const cplx rhs = s.at(i, l) * s.at(k, j);
                    REQUIRE_THAT(std::abs(lhs - rhs),
                                 Catch::Matchers::WithinAbs(0.0, 1e-10 * std::abs(lhs)));
                }
            }
        }
    }
}

TEST_CASE("peak integration") {
    const PairSystem p = degenerate_pair();
    const double fT_peak = thz_from_angular(p.omega_11p().omega + p.delta.real());
    const double ft_peak = thz_from_angular(p.omega_10p.omega);

    SECTION("zero spectrum integrates to zero") {
        PairSystem null = p;
        null.delta = {0.0, 0.0};
        const Spectrum2D s =
            grid_response({{null, 1.0}}, 0.0, uniform_grid(fT_peak - 0.02, fT_peak + 0.02, 41),
                          uniform_grid(ft_peak - 0.02, ft_peak + 0.02, 41));
        const PeakBox box{"all", fT_peak - 0.01, fT_peak + 0.01, ft_peak - 0.01, ft_peak + 0.01};
        REQUIRE(integrate_peak(s, box, PeakMode::Magnitude) == 0.0);
    }
    SECTION("halving a symmetric box halves the integral") {
        // A symmetric magnitude peak centered in the box.
        const auto axis_T = uniform_grid(fT_peak - 0.04, fT_peak + 0.04, 641);
        const auto axis_t = uniform_grid(ft_peak - 0.04, ft_peak + 0.04, 641);
        const Spectrum2D s = grid_response({{p, 1.0}}, 0.0, axis_T, axis_t);
        const PeakBox full{"full", fT_peak - 0.03, fT_peak + 0.03, ft_peak - 0.03, ft_peak + 0.03};
        const PeakBox half{"half", fT_peak - 0.03, fT_peak, ft_peak - 0.03, ft_peak + 0.03};
        const double i_full = integrate_peak(s, full, PeakMode::Magnitude);
        const double i_half = integrate_peak(s, half, PeakMode::Magnitude);
        REQUIRE_THAT(i_half, Catch::Matchers::WithinRel(0.5 * i_full, 0.01));
    }
    SECTION("integral converges under grid refinement") {
        const PeakBox box{"box", fT_peak - 0.02, fT_peak + 0.02, ft_peak - 0.02, ft_peak + 0.02};
        const double coarse = integrate_peak(
            grid_response({{p, 1.0}}, 0.0, uniform_grid(fT_peak - 0.03, fT_peak + 0.03, 301),
                          uniform_grid(ft_peak - 0.03, ft_peak + 0.03, 301)),
            box, PeakMode::Magnitude);
        const double fine = integrate_peak(
            grid_response({{p, 1.0}}, 0.0, uniform_grid(fT_peak - 0.03, fT_peak + 0.03, 601),
                          uniform_grid(ft_peak - 0.03, ft_peak + 0.03, 601)),
            box, PeakMode::Magnitude);
        REQUIRE(std::abs(fine - coarse) / std::abs(fine) < 0.005);
    }
    SECTION("boxes outside the grid are rejected") {
        const Spectrum2D s =
            grid_response({{p, 1.0}}, 0.0, uniform_grid(fT_peak - 0.02, fT_peak + 0.02, 21),
                          uniform_grid(ft_peak - 0.02, ft_peak + 0.02, 21));
        const PeakBox box{"off", fT_peak + 0.05, fT_peak + 0.08, ft_peak - 0.01, ft_peak + 0.01};
        REQUIRE_THROWS_AS(integrate_peak(s, box, PeakMode::Magnitude), std::invalid_argument);
    }
    SECTION("real and imaginary modes select the component") {
        const Spectrum2D s =
            grid_response({{p, 1.0}}, 0.0, uniform_grid(fT_peak - 0.02, fT_peak + 0.02, 41),
                          uniform_grid(ft_peak - 0.02, ft_peak + 0.02, 41));
        const PeakBox box{"b", fT_peak - 0.01, fT_peak + 0.01, ft_peak - 0.01, ft_peak + 0.01};
        const double re = integrate_peak(s, box, PeakMode::Real);
        const double im = integrate_peak(s, box, PeakMode::Imaginary);
        const double mag = integrate_peak(s, box, PeakMode::Magnitude);
        REQUIRE(mag > 0.0);
        REQUIRE(mag >= std::abs(re));
        REQUIRE(mag >= std::abs(im));
    }
}

TEST_CASE("slice extraction") {
    const PairSystem p = degenerate_pair();
    const double fT_peak = thz_from_angular(p.omega_11p().omega + p.delta.real());
    const double ft_peak = thz_from_angular(p.omega_10p.omega);
    const auto axis_T = uniform_grid(fT_peak - 0.02, fT_peak + 0.02, 41);
    const auto axis_t = uniform_grid(ft_peak - 0.02, ft_peak + 0.02, 37);
    const Spectrum2D s = grid_response({{p, 1.0}}, 1e-12, axis_T, axis_t);

    SECTION("matches direct evaluation at the chosen line") {
        const Slice1D slice = extract_slice(s, FixedAxis::OmegaT, fT_peak + 0.0003);
        REQUIRE(slice.axis_thz == axis_t);
        const double wT = angular_from_thz(slice.fixed_value_thz);
        for (std::size_t j = 0; j < axis_t.size(); ++j) {
            const cplx direct = pair_response(p, 1e-12, wT, angular_from_thz(axis_t[j]));
            REQUIRE_THAT(std::abs(slice.values[j] - direct),
                         Catch::Matchers::WithinAbs(0.0, 1e-12 * std::abs(direct)));
        }
    }
    SECTION("nearest grid line is recorded") {
        const Slice1D slice = extract_slice(s, FixedAxis::OmegaT, axis_T[7] + 0.0001);
        REQUIRE(slice.fixed_index == 7);
        REQUIRE(slice.fixed_value_thz == axis_T[7]);
    }
    SECTION("fixing the emission axis works too") {
        const Slice1D slice = extract_slice(s, FixedAxis::OmegaSmallT, ft_peak);
        REQUIRE(slice.axis_thz == axis_T);
        REQUIRE(slice.values.size() == axis_T.size());
    }
    SECTION("out-of-range positions are rejected") {
        REQUIRE_THROWS_AS(extract_slice(s, FixedAxis::OmegaT, fT_peak + 1.0),
                          std::invalid_argument);
    }
}

TEST_CASE("ensemble pairing bridges couplings into pair parameters") {
    EnsembleConfig cfg;
    cfg.box_m = {90e-9, 90e-9, 90e-9};
    cfg.rng_seed = 13;
    const Ensemble ens = sample_ensemble(cfg);
    REQUIRE(ens.size() >= 4);
    const MaterialParams mat = MaterialParams::from_index(2.4);
    const double dephasing = angular_from_ghz(2.0);
    const auto pairs = pairs_from_ensemble(ens, mat, dephasing);
    REQUIRE(!pairs.empty());
    REQUIRE(pairs.size() <= ens.size());
    for (const auto& wp : pairs) {
        REQUIRE(wp.weight == 1.0);
        REQUIRE(wp.pair.dephasing_rad() == dephasing);
        REQUIRE(wp.pair.mu_10 > 0.0);
        // The shift is a genuine dipole coupling: bounded by the value at the
        // minimum allowed separation.
        const double max_j =
            2.0 * wp.pair.mu_10 * wp.pair.mu_1p0p /
            (4.0 * M_PI * PhysConstants::vacuum_permittivity * mat.relative_permittivity *
             PhysConstants::planck_h * std::pow(cfg.min_separation_m, 3));
        REQUIRE(std::abs(hz_from_angular(wp.pair.shift_rad())) <= max_j);
    }
}
