#pragma once

// Physical constants, unit conversions, complex transition frequencies.
//
// Internal convention: SI units with angular frequencies in rad/s. Ordinary
// frequencies (THz, GHz) appear only at I/O boundaries. The homogeneous
// dephasing rate entering Lorentzian widths is gamma = 1/T2, which gives an
// ordinary-frequency FWHM of 1/(pi*T2).

#include <cmath>
#include <complex>
#include <stdexcept>

namespace dqsim {

struct PhysConstants {
    static constexpr double vacuum_permittivity = 8.8541878128e-12;     // F/m
    static constexpr double planck_h = 6.62607015e-34;                  // J*s
    static constexpr double hbar = planck_h / (2.0 * M_PI);             // J*s
    static constexpr double debye_to_Cm = 3.33564e-30;                  // C*m per Debye
    static constexpr double speed_of_light = 299792458.0;               // m/s
};

inline constexpr double two_pi = 2.0 * M_PI;
inline constexpr double rad_per_thz = two_pi * 1e12;
inline constexpr double rad_per_ghz = two_pi * 1e9;

// Ordinary frequency <-> angular frequency.
inline constexpr double angular_from_hz(double f) { return two_pi * f; }
inline constexpr double hz_from_angular(double w) { return w / two_pi; }
inline constexpr double angular_from_thz(double f) { return f * rad_per_thz; }
inline constexpr double thz_from_angular(double w) { return w / rad_per_thz; }
inline constexpr double angular_from_ghz(double f) { return f * rad_per_ghz; }
inline constexpr double ghz_from_angular(double w) { return w / rad_per_ghz; }

inline double debye_to_si(double mu_debye) {
    if (mu_debye < 0.0) throw std::invalid_argument("dipole moment must be non-negative");
    return mu_debye * PhysConstants::debye_to_Cm;
}

inline double si_to_debye(double mu_cm) {
    if (mu_cm < 0.0) throw std::invalid_argument("dipole moment must be non-negative");
    return mu_cm / PhysConstants::debye_to_Cm;
}

// Ordinary-frequency FWHM of a Lorentzian line whose amplitude dephasing
// rate is 1/T2.
inline double lorentzian_fwhm_from_t2(double t2_s) {
    if (!(t2_s > 0.0)) throw std::invalid_argument("T2 must be positive");
    return 1.0 / (M_PI * t2_s);
}

// A transition center frequency with phenomenological dephasing, interpreted
// as Omega = omega - i*gamma. Both components in rad/s.
struct ComplexFrequency {
    double omega = 0.0;
    double gamma = 0.0;

    std::complex<double> value() const { return {omega, -gamma}; }

    bool physical() const { return gamma >= 0.0; }
};

inline ComplexFrequency operator+(const ComplexFrequency& a, const ComplexFrequency& b) {
    return {a.omega + b.omega, a.gamma + b.gamma};
}

inline bool operator==(const ComplexFrequency& a, const ComplexFrequency& b) {
    return a.omega == b.omega && a.gamma == b.gamma;
}

struct MaterialParams {
    double refractive_index = 2.4;
    double relative_permittivity = 2.4 * 2.4;

    // Permittivity from the optical index, eps_r = n^2.
    static MaterialParams from_index(double n) {
        if (!(n >= 1.0)) throw std::invalid_argument("refractive index must be >= 1");
        return {n, n * n};
    }
};

}  // namespace dqsim
