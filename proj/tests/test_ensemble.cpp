#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <map>

#include "dqsim/ensemble.hpp"

using namespace dqsim;

namespace {

EnsembleConfig working_config() {
    EnsembleConfig c;
    c.implanted_density_cm3 = 1e18;
    c.yield_fraction = 0.10;
    c.box_m = {100e-9, 100e-9, 100e-9};
    c.rng_seed = 7;
    return c;
}

// Independent nearest-neighbor sampler used as a Monte Carlo oracle: fresh
// uniform points from a separate RNG stream, brute-force distances.
double oracle_mean_nn(double density_m3, double box_side_m, std::uint64_t seed, int trials) {
    RandomStream rng(seed);
    double acc = 0.0;
    std::size_t count = 0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t n = rng.poisson(density_m3 * box_side_m * box_side_m * box_side_m);
        std::vector<Vec3> pts(n);
        for (auto& p : pts)
            p = {rng.uniform01() * box_side_m, rng.uniform01() * box_side_m,
                 rng.uniform01() * box_side_m};
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (j != i) best = std::min(best, distance(pts[i], pts[j]));
            acc += best;
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

}  // namespace

TEST_CASE("zero or negative density yields an empty ensemble") {
    EnsembleConfig c = working_config();
    c.implanted_density_cm3 = 0.0;
    REQUIRE(sample_ensemble(c).size() == 0);
    c.implanted_density_cm3 = -1e17;
    REQUIRE(sample_ensemble(c).size() == 0);
}

TEST_CASE("invalid boxes are rejected") {
    EnsembleConfig c = working_config();
    c.box_m.y = 0.0;
    REQUIRE_THROWS_AS(sample_ensemble(c), std::invalid_argument);
    c = working_config();
    c.box_m.z = -1e-9;
    REQUIRE_THROWS_AS(sample_ensemble(c), std::invalid_argument);
}

TEST_CASE("emitter count is Poisson-consistent with the effective density") {
    // lambda = 1e17 cm^-3 * (100 nm)^3 = 100.
    const EnsembleConfig base = working_config();
    REQUIRE_THAT(base.effective_density_cm3(), Catch::Matchers::WithinRel(1e17, 1e-12));
    const int n_seeds = 200;
    double sum = 0.0;
    for (int k = 0; k < n_seeds; ++k) {
        EnsembleConfig c = base;
        c.rng_seed = 1000 + static_cast<std::uint64_t>(k);
        sum += static_cast<double>(sample_ensemble(c).size());
    }
    const double mean = sum / n_seeds;
    const double standard_error = std::sqrt(100.0 / n_seeds);
    REQUIRE(std::abs(mean - 100.0) < 3.0 * standard_error);
}

TEST_CASE("sampling is deterministic given the seed") {
    const EnsembleConfig c = working_config();
    const Ensemble a = sample_ensemble(c);
    const Ensemble b = sample_ensemble(c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a.emitters[i].position.x == b.emitters[i].position.x);
        REQUIRE(a.emitters[i].position.y == b.emitters[i].position.y);
        REQUIRE(a.emitters[i].position.z == b.emitters[i].position.z);
        REQUIRE(a.emitters[i].axis_index == b.emitters[i].axis_index);
        REQUIRE(a.emitters[i].dipole_moment == b.emitters[i].dipole_moment);
        REQUIRE(a.emitters[i].bare_frequency == b.emitters[i].bare_frequency);
        REQUIRE(a.emitters[i].label == b.emitters[i].label);
    }
}

TEST_CASE("positions respect the box and the minimum separation") {
    EnsembleConfig c = working_config();
    c.box_m = {60e-9, 60e-9, 60e-9};
    c.rng_seed = 11;
    const Ensemble e = sample_ensemble(c);
    REQUIRE(e.size() >= 2);
    for (const auto& em : e.emitters) {
        REQUIRE(em.position.x >= 0.0);
        REQUIRE(em.position.x < c.box_m.x);
        REQUIRE(em.position.y >= 0.0);
        REQUIRE(em.position.y < c.box_m.y);
        REQUIRE(em.position.z >= 0.0);
        REQUIRE(em.position.z < c.box_m.z);
    }
    REQUIRE(nearest_neighbor_stats(e).min_m >= c.min_separation_m);
}

TEST_CASE("dipole axes are unit vectors, uniform over the four cubic diagonals") {
    EnsembleConfig c = working_config();
    c.box_m = {400e-9, 400e-9, 400e-9};  // ~6400 expected
    c.rng_seed = 3;
    c.min_separation_m = 0.0;
    Ensemble e = sample_ensemble(c);
    // Top up to pass 1e4 samples using a second seed.
    c.rng_seed = 4;
    const Ensemble e2 = sample_ensemble(c);
    e.emitters.insert(e.emitters.end(), e2.emitters.begin(), e2.emitters.end());
    REQUIRE(e.size() >= 10000);

    std::map<int, std::size_t> counts;
    for (const auto& em : e.emitters) {
        REQUIRE_THAT(em.dipole_axis.norm(), Catch::Matchers::WithinAbs(1.0, 1e-12));
        counts[em.axis_index]++;
    }
    for (int axis = 0; axis < 4; ++axis) {
        const double fraction =
            static_cast<double>(counts[axis]) / static_cast<double>(e.size());
        REQUIRE(fraction > 0.23);
        REQUIRE(fraction < 0.27);
    }
}

TEST_CASE("labels follow the configured weights and the pedestal is Gaussian") {
    EnsembleConfig c = working_config();
    c.box_m = {400e-9, 400e-9, 400e-9};
    c.min_separation_m = 0.0;
    c.rng_seed = 5;
    const Ensemble e = sample_ensemble(c);
    REQUIRE(e.size() > 4000);

    std::map<PeakLabel, std::size_t> counts;
    double pedestal_mean = 0.0;
    double pedestal_sq = 0.0;
    std::size_t n_ped = 0;
    for (const auto& em : e.emitters) {
        counts[em.label]++;
        if (em.label == PeakLabel::Pedestal) {
            const double f = thz_from_angular(em.bare_frequency.omega);
            pedestal_mean += f;
            pedestal_sq += f * f;
            ++n_ped;
        } else {
            // Sharp peaks sit exactly at their configured centers.
            bool found = false;
            for (const auto& p : c.peak_table)
                if (p.label == em.label)
                    found = em.bare_frequency.omega == angular_from_thz(p.center_thz);
            REQUIRE(found);
        }
    }
    // Weights 1.0 : 0.75 : 0.5 : 0.5 -> pedestal fraction 0.5/2.75.
    const double ped_fraction = static_cast<double>(n_ped) / static_cast<double>(e.size());
    REQUIRE_THAT(ped_fraction, Catch::Matchers::WithinAbs(0.5 / 2.75, 0.02));

    pedestal_mean /= static_cast<double>(n_ped);
    const double var = pedestal_sq / static_cast<double>(n_ped) - pedestal_mean * pedestal_mean;
    const double sigma_expected = c.pedestal_fwhm_thz / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    REQUIRE_THAT(pedestal_mean, Catch::Matchers::WithinAbs(c.pedestal_center_thz, 0.05));
    REQUIRE_THAT(std::sqrt(var), Catch::Matchers::WithinRel(sigma_expected, 0.1));
}

TEST_CASE("nearest-neighbor statistics on explicit configurations") {
    Ensemble e;
    Emitter a, b, c3;
    a.position = {0.0, 0.0, 0.0};
    b.position = {3e-9, 0.0, 0.0};
    e.emitters = {a, b};
    const auto two = nearest_neighbor_stats(e);
    REQUIRE(two.mean_m == 3e-9);
    REQUIRE(two.median_m == 3e-9);
    REQUIRE(two.min_m == 3e-9);

    c3.position = {6e-9, 0.0, 0.0};
    e.emitters.push_back(c3);  // collinear, spacing d, d
    const auto three = nearest_neighbor_stats(e);
    REQUIRE(three.mean_m == 3e-9);
    REQUIRE(three.min_m == 3e-9);

    Ensemble single;
    single.emitters = {a};
    REQUIRE_THROWS_AS(nearest_neighbor_stats(single), std::invalid_argument);
}

TEST_CASE("nearest-neighbor distances match Poisson statistics") {
    // rho = 1e17 cm^-3: mean NN distance 0.554 rho^{-1/3} ~ 11.9 nm.
    EnsembleConfig c = working_config();
    c.box_m = {300e-9, 300e-9, 300e-9};
    c.min_separation_m = 0.0;  // pure Poisson process for the statistics check

    double acc = 0.0;
    std::size_t count = 0;
    for (int k = 0; k < 30; ++k) {
        c.rng_seed = 500 + static_cast<std::uint64_t>(k);
        const Ensemble e = sample_ensemble(c);
        const auto stats = nearest_neighbor_stats(e);
        acc += stats.mean_m * static_cast<double>(e.size());
        count += e.size();
    }
    const double mean = acc / static_cast<double>(count);
    const double analytic = 0.55396 * std::cbrt(1.0 / 1e23);
    REQUIRE_THAT(mean, Catch::Matchers::WithinRel(analytic, 0.05));

    const double mc = oracle_mean_nn(1e23, 300e-9, 987654, 30);
    REQUIRE_THAT(mean, Catch::Matchers::WithinRel(mc, 0.05));
}

TEST_CASE("median nearest-neighbor distance matches a re-sampling oracle") {
    EnsembleConfig c = working_config();
    c.box_m = {470e-9, 470e-9, 470e-9};  // ~1e4 emitters
    c.min_separation_m = 0.0;
    c.rng_seed = 31;
    const Ensemble e = sample_ensemble(c);
    REQUIRE(e.size() >= 9000);
    const auto stats = nearest_neighbor_stats(e);

    // Median of the Poisson nearest-neighbor law: (3 ln 2 / (4 pi rho))^(1/3).
    const double median_expected = std::cbrt(3.0 * std::log(2.0) / (4.0 * M_PI * 1e23));
    REQUIRE_THAT(stats.median_m, Catch::Matchers::WithinRel(median_expected, 0.05));
}
