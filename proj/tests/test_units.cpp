#include <catch2/catch_amalgamated.hpp>

#include "dqsim/units.hpp"

using namespace dqsim;

TEST_CASE("physical constants are positive and consistent") {
    REQUIRE(PhysConstants::vacuum_permittivity > 0.0);
    REQUIRE(PhysConstants::planck_h > 0.0);
    REQUIRE(PhysConstants::hbar > 0.0);
    REQUIRE(PhysConstants::debye_to_Cm > 0.0);
    REQUIRE(PhysConstants::speed_of_light > 0.0);
    REQUIRE_THAT(PhysConstants::hbar,
                 Catch::Matchers::WithinRel(PhysConstants::planck_h / (2.0 * M_PI), 1e-12));
}

TEST_CASE("debye conversion") {
    REQUIRE(debye_to_si(0.0) == 0.0);
    REQUIRE(debye_to_si(1.0) == 3.33564e-30);
    REQUIRE_THAT(debye_to_si(14.3), Catch::Matchers::WithinRel(4.770e-29, 1e-3));
    REQUIRE_THROWS_AS(debye_to_si(-1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(si_to_debye(-1e-30), std::invalid_argument);
}

TEST_CASE("debye round trip") {
    for (double x : {1e-3, 0.02, 0.7, 1.0, 3.5, 14.3, 250.0, 1e3}) {
        REQUIRE_THAT(si_to_debye(debye_to_si(x)), Catch::Matchers::WithinRel(x, 1e-12));
    }
}

TEST_CASE("lorentzian width from dephasing time") {
    REQUIRE_THAT(lorentzian_fwhm_from_t2(120e-12), Catch::Matchers::WithinRel(2.653e9, 1e-3));
    REQUIRE_THAT(lorentzian_fwhm_from_t2(1.0 / M_PI), Catch::Matchers::WithinRel(1.0, 1e-12));
    const double t2 = 37e-12;
    REQUIRE_THAT(lorentzian_fwhm_from_t2(2.0 * t2),
                 Catch::Matchers::WithinRel(0.5 * lorentzian_fwhm_from_t2(t2), 1e-12));
    REQUIRE_THROWS_AS(lorentzian_fwhm_from_t2(0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(lorentzian_fwhm_from_t2(-1.0), std::invalid_argument);
}

TEST_CASE("complex frequency arithmetic and interpretation") {
    const ComplexFrequency a{2.0, 0.5};
    const ComplexFrequency b{1.0, 0.25};
    const ComplexFrequency c = a + b;
    REQUIRE(c.omega == 3.0);
    REQUIRE(c.gamma == 0.75);
    REQUIRE(a.value() == std::complex<double>(2.0, -0.5));
    REQUIRE(a.physical());
    REQUIRE_FALSE(ComplexFrequency{1.0, -0.1}.physical());
}

TEST_CASE("material parameters from refractive index") {
    const MaterialParams m = MaterialParams::from_index(2.4);
    REQUIRE(m.refractive_index == 2.4);
    REQUIRE_THAT(m.relative_permittivity, Catch::Matchers::WithinRel(5.76, 1e-12));
    REQUIRE_THROWS_AS(MaterialParams::from_index(0.5), std::invalid_argument);
}

TEST_CASE("angular conversions invert") {
    REQUIRE_THAT(thz_from_angular(angular_from_thz(407.9)),
                 Catch::Matchers::WithinRel(407.9, 1e-14));
    REQUIRE_THAT(ghz_from_angular(angular_from_ghz(5.36)),
                 Catch::Matchers::WithinRel(5.36, 1e-14));
}
