#pragma once

// Dipole-dipole interaction Hamiltonian over an ensemble and its
// single-excitation diagonalization.
//
// H_int,ij = (1/(4 pi eps0 eps_r)) [mu_i.mu_j / R^3 - 3 (mu_i.R)(mu_j.R) / R^5]
//
// Only the N x N single-excitation block is built and diagonalized; the
// doubly-excited physics enters elsewhere through the pair interaction
// parameter, not through a 2^N diagonalization.

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "dqsim/ensemble.hpp"
#include "dqsim/units.hpp"

namespace dqsim {

// Coupling energy of two point dipoles as an ordinary frequency (Hz).
// Computed as kappa * |mu_i| |mu_j| / (4 pi eps0 eps_r h R^3) with the
// orientation factor kappa = ui.uj - 3 (ui.Rhat)(uj.Rhat), so pure-geometry
// identities (head-to-tail = -2 x side-by-side) hold exactly.
inline double dipole_coupling(const Vec3& mu_i, const Vec3& mu_j, const Vec3& r_ij,
                              double eps_r) {
    const double r = r_ij.norm();
    if (!(r > 0.0)) throw coincident_emitter_error(0, 0);
    if (!(eps_r >= 1.0)) throw std::invalid_argument("relative permittivity must be >= 1");

    const double mi = mu_i.norm();
    const double mj = mu_j.norm();
    if (mi == 0.0 || mj == 0.0) return 0.0;
    const Vec3 ui = mu_i / mi;
    const Vec3 uj = mu_j / mj;
    const Vec3 rhat = r_ij / r;

    const double kappa = dot(ui, uj) - 3.0 * (dot(ui, rhat) * dot(uj, rhat));
    const double r3 = (r * r) * r;
    const double prefactor =
        1.0 / (4.0 * M_PI * PhysConstants::vacuum_permittivity * eps_r * PhysConstants::planck_h);
    return kappa * prefactor * (mi * mj) / r3;
}

// Real symmetric single-excitation Hamiltonian in rad/s: bare transition
// frequencies on the diagonal, 2 pi J_ij off it.
struct CouplingMatrix {
    Eigen::MatrixXd h;  // rad/s

    std::size_t size() const { return static_cast<std::size_t>(h.rows()); }

    bool symmetric() const {
        for (Eigen::Index i = 0; i < h.rows(); ++i)
            for (Eigen::Index j = i + 1; j < h.cols(); ++j)
                if (h(i, j) != h(j, i)) return false;
        return true;
    }
};

inline CouplingMatrix build_coupling_matrix(const Ensemble& ens, const MaterialParams& mat) {
    const std::size_t n = ens.size();
    CouplingMatrix m;
    m.h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        m.h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            ens.emitters[i].bare_frequency.omega;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 r_ij = ens.emitters[j].position - ens.emitters[i].position;
            if (!(r_ij.norm() > 0.0)) throw coincident_emitter_error(i, j);
            const double j_hz = dipole_coupling(ens.emitters[i].dipole_vector(),
                                                ens.emitters[j].dipole_vector(), r_ij,
                                                mat.relative_permittivity);
            const double j_rad = angular_from_hz(j_hz);
            m.h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = j_rad;
            m.h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = j_rad;
        }
    }
    return m;
}

struct ShiftedSpectrumLines {
    std::vector<double> centers_rad;  // ascending eigenfrequencies, rad/s
    std::vector<double> weights;      // non-negative oscillator weights
};

// Eigenfrequencies of the single-excitation block together with bright
// projections. Line m carries |sum_k v_km b_k|^2 where b_k is the bare
// per-emitter brightness amplitude (all ones by default); orthonormality
// then conserves the total weight sum_k b_k^2 under diagonalization.
inline ShiftedSpectrumLines diagonalize_single_excitation(
    const CouplingMatrix& m, const std::vector<double>& brightness = {}) {
    if (m.h.rows() != m.h.cols()) throw std::invalid_argument("coupling matrix must be square");
    if (!m.symmetric()) throw std::invalid_argument("coupling matrix must be symmetric");
    const std::size_t n = m.size();
    std::vector<double> b = brightness;
    if (b.empty()) b.assign(n, 1.0);
    if (b.size() != n)
        throw std::invalid_argument("brightness vector length must match matrix size");

    ShiftedSpectrumLines lines;
    if (n == 0) return lines;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.h);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigen decomposition failed");

    lines.centers_rad.resize(n);
    lines.weights.resize(n);
    const auto& vals = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();
    for (std::size_t k = 0; k < n; ++k) {
        lines.centers_rad[k] = vals(static_cast<Eigen::Index>(k));
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            proj += vecs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * b[i];
        lines.weights[k] = proj * proj;
    }
    return lines;
}

// Brightness amplitudes for an ensemble: the emitter dipole moment relative
// to the manifold maximum. With dark_pedestal set, pedestal centers keep
// their couplings but stop emitting.
inline std::vector<double> brightness_amplitudes(const Ensemble& ens, bool dark_pedestal) {
    const double mu_ref = debye_to_si(ens.config.dipole_debye);
    std::vector<double> b(ens.size(), 0.0);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        if (dark_pedestal && ens.emitters[i].label == PeakLabel::Pedestal) continue;
        b[i] = (mu_ref > 0.0) ? ens.emitters[i].dipole_moment / mu_ref : 0.0;
    }
    return b;
}

}  // namespace dqsim
