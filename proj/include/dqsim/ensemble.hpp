#pragma once

// Random spatial/orientational configurations of two-level emitters matching
// an implantation density and a transition-frequency distribution.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqsim/common.hpp"
#include "dqsim/units.hpp"

namespace dqsim {

enum class PeakLabel { B, C, Dprime, Pedestal };

inline const char* to_string(PeakLabel l) {
    switch (l) {
        case PeakLabel::B: return "B";
        case PeakLabel::C: return "C";
        case PeakLabel::Dprime: return "Dprime";
        case PeakLabel::Pedestal: return "Pedestal";
    }
    return "?";
}

inline PeakLabel peak_label_from_string(const std::string& s) {
    if (s == "B") return PeakLabel::B;
    if (s == "C") return PeakLabel::C;
    if (s == "Dprime") return PeakLabel::Dprime;
    if (s == "Pedestal") return PeakLabel::Pedestal;
    throw std::invalid_argument("unknown peak label: " + s);
}

struct PeakEntry {
    PeakLabel label = PeakLabel::B;
    double center_thz = 0.0;
    double relative_amplitude = 1.0;  // sampling weight of this transition
    double dipole_scale = 1.0;        // dipole moment relative to the manifold maximum
};

enum class DepthProfile { Uniform };

struct EnsembleConfig {
    double implanted_density_cm3 = 1e18;
    double yield_fraction = 0.10;
    Vec3 box_m{100e-9, 100e-9, 100e-9};
    DepthProfile depth_profile = DepthProfile::Uniform;
    // Sharp transitions. Defaults sit near the 735 nm excitation band with
    // sub-THz strain splittings; absolute centers are sample metadata.
    std::vector<PeakEntry> peak_table{
        {PeakLabel::B, 407.6, 1.00, 1.00},
        {PeakLabel::C, 407.9, 0.75, 1.00},
        {PeakLabel::Dprime, 408.3, 0.50, 0.90},
    };
    // Broad background of weakly luminescent but interacting centers.
    double pedestal_center_thz = 407.9;
    double pedestal_fwhm_thz = 1.8;
    double pedestal_weight = 0.5;        // sampling weight of the pedestal population
    double pedestal_dipole_scale = 1.0;
    double dipole_debye = 14.3;          // manifold-maximum transition dipole
    double t2_ps = 120.0;                // homogeneous dephasing time, gamma = 1/T2
    double min_separation_m = 1e-9;      // point-dipole validity floor; closer draws are re-sampled
    std::uint64_t rng_seed = 1;

    double effective_density_cm3() const { return implanted_density_cm3 * yield_fraction; }
    double effective_density_m3() const { return effective_density_cm3() * 1e6; }
    double box_volume_m3() const { return box_m.x * box_m.y * box_m.z; }
    double gamma_rad() const { return 1.0 / (t2_ps * 1e-12); }
};

struct Emitter {
    Vec3 position;                 // m, inside the sampling box
    Vec3 dipole_axis;              // unit vector along one of the four <111> cubic axes
    int axis_index = 0;            // 0..3, which <111> axis
    double dipole_moment = 0.0;    // C*m
    ComplexFrequency bare_frequency;  // rad/s
    PeakLabel label = PeakLabel::B;

    Vec3 dipole_vector() const { return dipole_moment * dipole_axis; }
};

struct Ensemble {
    std::vector<Emitter> emitters;
    EnsembleConfig config;  // provenance copy

    std::size_t size() const { return emitters.size(); }
};

// The four <111> body-diagonal axes of a cubic cell (sign is irrelevant for
// dipole-dipole couplings).
inline const std::array<Vec3, 4>& diamond_axes() {
    static const double s = 1.0 / std::sqrt(3.0);
    static const std::array<Vec3, 4> axes{
        Vec3{s, s, s}, Vec3{-s, s, s}, Vec3{s, -s, s}, Vec3{s, s, -s}};
    return axes;
}

inline void validate(const EnsembleConfig& cfg) {
    if (!(cfg.box_m.x > 0.0 && cfg.box_m.y > 0.0 && cfg.box_m.z > 0.0))
        throw std::invalid_argument("box dimensions must be positive");
    if (cfg.yield_fraction < 0.0 || cfg.yield_fraction > 1.0)
        throw std::invalid_argument("yield fraction must lie in [0, 1]");
    if (!(cfg.pedestal_fwhm_thz > 0.0))
        throw std::invalid_argument("pedestal FWHM must be positive");
    if (cfg.pedestal_weight < 0.0) throw std::invalid_argument("pedestal weight must be >= 0");
    if (!(cfg.t2_ps > 0.0)) throw std::invalid_argument("T2 must be positive");
    if (cfg.dipole_debye < 0.0) throw std::invalid_argument("dipole moment must be >= 0");
    for (const auto& p : cfg.peak_table)
        if (p.relative_amplitude < 0.0 || p.dipole_scale < 0.0)
            throw std::invalid_argument("peak table entries must have non-negative weights");
}

// Draw one configuration. Emitter count is Poisson with mean
// effective_density * volume; positions are i.i.d. uniform in the box
// (re-sampled when closer than min_separation to an earlier emitter); axes
// are uniform over the four <111> directions; the transition is drawn from
// the peak table plus the pedestal, pedestal centers Gaussian-distributed.
// Deterministic given the config (including its seed).
inline Ensemble sample_ensemble(const EnsembleConfig& cfg) {
    validate(cfg);
    RandomStream rng(cfg.rng_seed);
    Ensemble ens;
    ens.config = cfg;

    const double lambda = std::max(0.0, cfg.effective_density_m3() * cfg.box_volume_m3());
    const std::uint64_t n = rng.poisson(lambda);
    if (n == 0) return ens;

    // Categorical weights: sharp peaks then the pedestal.
    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& p : cfg.peak_table) {
        total += p.relative_amplitude;
        cumulative.push_back(total);
    }
    total += cfg.pedestal_weight;
    cumulative.push_back(total);
    if (!(total > 0.0)) throw std::invalid_argument("all sampling weights are zero");

    const double mu_si = debye_to_si(cfg.dipole_debye);
    const double gamma = cfg.gamma_rad();
    const double pedestal_sigma_thz =
        cfg.pedestal_fwhm_thz / (2.0 * std::sqrt(2.0 * std::log(2.0)));

    ens.emitters.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        Emitter e;
        // Position with a minimum-separation guard.
        for (int attempt = 0;; ++attempt) {
            e.position = {rng.uniform01() * cfg.box_m.x, rng.uniform01() * cfg.box_m.y,
                          rng.uniform01() * cfg.box_m.z};
            bool ok = true;
            for (const auto& other : ens.emitters) {
                if (distance(e.position, other.position) < cfg.min_separation_m) {
                    ok = false;
                    break;
                }
            }
            if (ok) break;
            if (attempt > 10000)
                throw std::runtime_error(
                    "could not place emitter with the requested minimum separation; "
                    "box too dense");
        }

        e.axis_index = static_cast<int>(rng.integer(4));
        e.dipole_axis = diamond_axes()[static_cast<std::size_t>(e.axis_index)];

        const double u = rng.uniform01() * total;
        std::size_t bin = 0;
        while (bin + 1 < cumulative.size() && u >= cumulative[bin]) ++bin;

        if (bin < cfg.peak_table.size()) {
            const auto& p = cfg.peak_table[bin];
            e.label = p.label;
            e.dipole_moment = mu_si * p.dipole_scale;
            e.bare_frequency = {angular_from_thz(p.center_thz), gamma};
        } else {
            e.label = PeakLabel::Pedestal;
            e.dipole_moment = mu_si * cfg.pedestal_dipole_scale;
            const double f_thz = cfg.pedestal_center_thz + pedestal_sigma_thz * rng.normal();
            e.bare_frequency = {angular_from_thz(f_thz), gamma};
        }
        ens.emitters.push_back(e);
    }
    return ens;
}

struct NearestNeighborStats {
    double mean_m = 0.0;
    double median_m = 0.0;
    double min_m = 0.0;
};

// Exact brute-force nearest-neighbor distances over all emitters.
inline NearestNeighborStats nearest_neighbor_stats(const Ensemble& ens) {
    const std::size_t n = ens.size();
    if (n < 2) throw std::invalid_argument("nearest-neighbor statistics need at least 2 emitters");
    std::vector<double> nn(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = distance(ens.emitters[i].position, ens.emitters[j].position);
            nn[i] = std::min(nn[i], d);
            nn[j] = std::min(nn[j], d);
        }
    }
    NearestNeighborStats out;
    out.min_m = *std::min_element(nn.begin(), nn.end());
    double sum = 0.0;
    for (double d : nn) sum += d;
    out.mean_m = sum / static_cast<double>(n);
    std::vector<double> sorted = nn;
    std::sort(sorted.begin(), sorted.end());
    out.median_m = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return out;
}

// Index of each emitter's nearest neighbor, brute force.
inline std::vector<std::size_t> nearest_neighbor_indices(const Ensemble& ens) {
    const std::size_t n = ens.size();
    if (n < 2) throw std::invalid_argument("nearest-neighbor pairing needs at least 2 emitters");
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = distance(ens.emitters[i].position, ens.emitters[j].position);
            if (d < best) {
                best = d;
                idx[i] = j;
            }
        }
    }
    return idx;
}

}  // namespace dqsim
