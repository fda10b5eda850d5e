#pragma once

// Nonlinear least-squares estimation of the pump-dependence model from
// complex spectral slices across a pump sweep. Damped Gauss-Newton
// (Levenberg-style) with a numerically differentiated Jacobian; complex data
// enter as stacked real/imaginary residuals, so fits are phase resolved.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqsim/common.hpp"
#include "dqsim/rabi_pump.hpp"

namespace dqsim {

struct SliceDataset {
    std::vector<double> pump_values;  // strictly increasing, normalized field units
    std::vector<double> axis_thz;     // shared emission-frequency axis
    std::vector<std::vector<std::complex<double>>> slices;  // one per pump value
    std::vector<std::vector<double>> weights;  // optional per-point noise weights
    double omega_T_thz = 0.0;         // fixed double-quantum frequency of the slices
    double tau_s = 0.0;

    void validate() const {
        if (pump_values.size() < 2) throw std::invalid_argument("need at least 2 pump values");
        if (axis_thz.size() < 10) throw std::invalid_argument("need at least 10 axis points");
        if (slices.size() != pump_values.size())
            throw std::invalid_argument("slice count must match pump values");
        for (std::size_t k = 1; k < pump_values.size(); ++k)
            if (!(pump_values[k] > pump_values[k - 1]))
                throw std::invalid_argument("pump values must be strictly increasing");
        for (const auto& s : slices)
            if (s.size() != axis_thz.size())
                throw std::invalid_argument("all slices must share the axis");
        if (!weights.empty()) {
            if (weights.size() != slices.size())
                throw std::invalid_argument("weights must match the slice layout");
            for (const auto& w : weights)
                if (w.size() != axis_thz.size())
                    throw std::invalid_argument("weights must match the slice layout");
        }
    }
};

struct FitParams {
    double delta_s0 = 0.0;  // rad/s
    double delta_d0 = 0.0;
    double delta_s1 = 0.0;
    double delta_d1 = 0.0;
    double e_pi = 1.0;
    std::complex<double> amplitude{1.0, 0.0};
    PairSystem pair;  // transition frequencies/dephasings, frozen unless fit_pair
    bool half_pi_argument = true;

    PumpModel pump_model() const {
        PumpModel m;
        m.e_pi = e_pi;
        m.delta_s0 = delta_s0;
        m.delta_d0 = delta_d0;
        m.delta_s1 = delta_s1;
        m.delta_d1 = delta_d1;
        m.amplitude = amplitude;
        m.half_pi_argument = half_pi_argument;
        return m;
    }
};

struct FitOptions {
    int max_iter = 200;
    double cost_rel_tol = 1e-10;
    double grad_tol = 1e-12;
    double fd_rel_step = 1e-6;
    double lambda_init = 1e-3;
    bool fit_pair = false;  // also fit the pair frequencies and dephasings
};

struct FitReport {
    FitParams params;
    double final_cost = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string message;
    std::vector<double> cost_history;       // accepted costs, non-increasing
    std::vector<std::string> param_names;
    std::vector<double> uncertainties;      // curvature-based, same order
};

// Model values for every (pump, axis) point.
inline std::vector<std::vector<std::complex<double>>> model_slices(
    const FitParams& p, const std::vector<double>& pump_values,
    const std::vector<double>& axis_thz, double omega_T_thz, double tau_s) {
    const PumpModel m = p.pump_model();
    std::vector<double> axis_rad(axis_thz.size());
    for (std::size_t i = 0; i < axis_thz.size(); ++i) axis_rad[i] = angular_from_thz(axis_thz[i]);
    const double omega_T_rad = angular_from_thz(omega_T_thz);
    std::vector<std::vector<std::complex<double>>> out(pump_values.size());
    for (std::size_t k = 0; k < pump_values.size(); ++k)
        out[k] = pumped_signal_model(pump_values[k] / p.e_pi, m, p.pair, axis_rad, omega_T_rad,
                                     tau_s);
    return out;
}

namespace detail {

inline std::vector<std::string> fit_param_names(bool fit_pair) {
    std::vector<std::string> names{"delta_s0", "delta_d0", "delta_s1", "delta_d1",
                                   "e_pi",     "amp_re",   "amp_im"};
    if (fit_pair) {
        names.insert(names.end(),
                     {"omega_10p", "gamma_10p", "omega_01p", "gamma_01p"});
    }
    return names;
}

inline Eigen::VectorXd pack_fit_params(const FitParams& p, bool fit_pair) {
    Eigen::VectorXd x(fit_pair ? 11 : 7);
    x(0) = p.delta_s0;
    x(1) = p.delta_d0;
    x(2) = p.delta_s1;
    x(3) = p.delta_d1;
    x(4) = p.e_pi;
    x(5) = p.amplitude.real();
    x(6) = p.amplitude.imag();
    if (fit_pair) {
        x(7) = p.pair.omega_10p.omega;
        x(8) = p.pair.omega_10p.gamma;
        x(9) = p.pair.omega_01p.omega;
        x(10) = p.pair.omega_01p.gamma;
    }
    return x;
}

inline FitParams unpack_fit_params(const FitParams& base, const Eigen::VectorXd& x,
                                   bool fit_pair) {
    FitParams p = base;
    p.delta_s0 = x(0);
    p.delta_d0 = x(1);
    p.delta_s1 = x(2);
    p.delta_d1 = x(3);
    p.e_pi = x(4);
    p.amplitude = {x(5), x(6)};
    if (fit_pair) {
        p.pair.omega_10p = {x(7), x(8)};
        p.pair.omega_01p = {x(9), x(10)};
    }
    return p;
}

inline Eigen::VectorXd fit_param_scales(const Eigen::VectorXd& x0) {
    Eigen::VectorXd s(x0.size());
    for (Eigen::Index j = 0; j < x0.size(); ++j) {
        double floor = 1e-3;
        if (j <= 3) floor = angular_from_ghz(0.1);        // interaction parameters
        if (j == 4) floor = 0.05;                         // E_pi
        if (x0.size() > 7 && j >= 7) floor = angular_from_ghz(0.1);
        s(j) = std::max(std::abs(x0(j)), floor);
    }
    return s;
}

}  // namespace detail

// Stacked real/imaginary residuals (model - data) over the whole dataset.
// Parameter vectors that leave the model undefined (E_pi <= 0, negative
// dephasing poles) yield huge finite residuals so a trial step is simply
// rejected.
inline Eigen::VectorXd fit_residuals(const FitParams& p, const SliceDataset& data) {
    const std::size_t m = 2 * data.pump_values.size() * data.axis_thz.size();
    Eigen::VectorXd r(static_cast<Eigen::Index>(m));
    if (!(p.e_pi > 0.0)) {
        r.setConstant(1e120);
        return r;
    }
    std::vector<std::vector<std::complex<double>>> model;
    try {
        model = model_slices(p, data.pump_values, data.axis_thz, data.omega_T_thz, data.tau_s);
    } catch (const pole_error&) {
        r.setConstant(1e120);
        return r;
    }
    Eigen::Index idx = 0;
    for (std::size_t k = 0; k < data.pump_values.size(); ++k) {
        for (std::size_t i = 0; i < data.axis_thz.size(); ++i) {
            const double w = data.weights.empty() ? 1.0 : std::sqrt(data.weights[k][i]);
            const std::complex<double> d = model[k][i] - data.slices[k][i];
            r(idx++) = w * d.real();
            r(idx++) = w * d.imag();
        }
    }
    return r;
}

// Central-difference Jacobian of the residuals with steps proportional to
// per-parameter scales.
inline Eigen::MatrixXd fit_jacobian(const FitParams& p, const SliceDataset& data, bool fit_pair,
                                    double fd_rel_step) {
    const Eigen::VectorXd x = detail::pack_fit_params(p, fit_pair);
    const Eigen::VectorXd scale = detail::fit_param_scales(x);
    const Eigen::VectorXd r0 = fit_residuals(p, data);
    Eigen::MatrixXd jac(r0.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = fd_rel_step * scale(j);
        Eigen::VectorXd xp = x;
        Eigen::VectorXd xm = x;
        xp(j) += h;
        xm(j) -= h;
        const Eigen::VectorXd rp = fit_residuals(detail::unpack_fit_params(p, xp, fit_pair), data);
        const Eigen::VectorXd rm = fit_residuals(detail::unpack_fit_params(p, xm, fit_pair), data);
        jac.col(j) = (rp - rm) / (2.0 * h);
    }
    return jac;
}

inline FitReport fit_slices(const SliceDataset& data, const FitParams& initial,
                            const FitOptions& options = {}) {
    data.validate();
    if (!(initial.e_pi > 0.0)) throw std::invalid_argument("initial E_pi must be positive");

    const bool fit_pair = options.fit_pair;
    Eigen::VectorXd x = detail::pack_fit_params(initial, fit_pair);
    if (!x.allFinite()) throw std::invalid_argument("initial parameters must be finite");
    const Eigen::VectorXd scale = detail::fit_param_scales(x);

    // Work on residuals normalized by the data magnitude so the cost and
    // gradient tolerances are scale free; reported costs are raw.
    double data_scale = 0.0;
    for (const auto& s : data.slices)
        for (const auto& v : s) data_scale = std::max(data_scale, std::abs(v));
    if (data_scale == 0.0) data_scale = 1.0;
    const double cost_unscale = data_scale * data_scale;

    FitReport report;
    report.param_names = detail::fit_param_names(fit_pair);

    Eigen::VectorXd r = fit_residuals(initial, data) / data_scale;
    double cost = r.squaredNorm();
    report.cost_history.push_back(cost * cost_unscale);

    double lambda = options.lambda_init;
    Eigen::MatrixXd jac;
    int iter = 0;
    for (; iter < options.max_iter; ++iter) {
        const FitParams current = detail::unpack_fit_params(initial, x, fit_pair);
        jac = fit_jacobian(current, data, fit_pair, options.fd_rel_step) / data_scale;
        // Work in scaled coordinates for conditioning.
        Eigen::MatrixXd js = jac * scale.asDiagonal();
        const Eigen::VectorXd gradient = js.transpose() * r;
        if (gradient.lpNorm<Eigen::Infinity>() < options.grad_tol) {
            report.converged = true;
            report.message = "gradient below tolerance";
            break;
        }
        const Eigen::MatrixXd normal = js.transpose() * js;
        for (Eigen::Index j = 0; j < normal.rows(); ++j) {
            if (!(normal(j, j) > 0.0))
                throw std::runtime_error(
                    "singular Jacobian: parameter '" + report.param_names[static_cast<std::size_t>(j)] +
                    "' has no effect on the model; consider freezing parameters");
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 60; ++attempt) {
            Eigen::MatrixXd damped = normal;
            damped.diagonal() += lambda * normal.diagonal();
            const Eigen::VectorXd step = damped.ldlt().solve(-gradient);
            if (!step.allFinite())
                throw std::runtime_error("singular Jacobian; consider freezing parameters");
            const Eigen::VectorXd x_try = x + scale.cwiseProduct(step);
            const Eigen::VectorXd r_try =
                fit_residuals(detail::unpack_fit_params(initial, x_try, fit_pair), data) /
                data_scale;
            const double cost_try = r_try.squaredNorm();
            if (cost_try <= cost) {
                const double drop = cost - cost_try;
                x = x_try;
                r = r_try;
                cost = cost_try;
                report.cost_history.push_back(cost * cost_unscale);
                lambda = std::max(lambda / 3.0, 1e-14);
                accepted = true;
                if (drop <= options.cost_rel_tol * std::max(cost, 1e-300)) {
                    report.converged = true;
                    report.message = "cost change below tolerance";
                }
                break;
            }
            lambda *= 4.0;
        }
        if (!accepted) {
            report.converged = true;  // cannot improve: local minimum at damping limit
            report.message = "no downhill step found";
            break;
        }
        if (report.converged) break;
    }
    if (!report.converged) report.message = "max iterations reached; returning best so far";

    report.iterations = iter;
    report.final_cost = cost * cost_unscale;
    report.params = detail::unpack_fit_params(initial, x, fit_pair);

    // Curvature-based uncertainties (no external calibration): scaled
    // covariance sigma^2 (J^T J)^-1 at the optimum.
    const Eigen::Index m = r.size();
    const Eigen::Index n = x.size();
    report.uncertainties.assign(static_cast<std::size_t>(n), 0.0);
    if (m > n) {
        const FitParams current = detail::unpack_fit_params(initial, x, fit_pair);
        jac = fit_jacobian(current, data, fit_pair, options.fd_rel_step) / data_scale;
        Eigen::MatrixXd js = jac * scale.asDiagonal();
        const double sigma2 = cost / static_cast<double>(m - n);
        const Eigen::MatrixXd normal = js.transpose() * js;
        const Eigen::MatrixXd cov = normal.ldlt().solve(
            Eigen::MatrixXd::Identity(n, n));
        for (Eigen::Index j = 0; j < n; ++j) {
            const double v = sigma2 * cov(j, j);
            report.uncertainties[static_cast<std::size_t>(j)] =
                v > 0.0 ? std::sqrt(v) * scale(j) : 0.0;
        }
    }
    return report;
}

// Synthetic dataset from known parameters with complex Gaussian noise of
// standard deviation noise_rel * max|signal| per component.
inline SliceDataset generate_synthetic(const FitParams& params,
                                       const std::vector<double>& pump_values,
                                       const std::vector<double>& axis_thz, double omega_T_thz,
                                       double tau_s, double noise_rel, std::uint64_t seed) {
    if (noise_rel < 0.0) throw std::invalid_argument("noise level must be >= 0");
    SliceDataset data;
    data.pump_values = pump_values;
    data.axis_thz = axis_thz;
    data.omega_T_thz = omega_T_thz;
    data.tau_s = tau_s;
    data.slices = model_slices(params, pump_values, axis_thz, omega_T_thz, tau_s);
    data.validate();

    if (noise_rel > 0.0) {
        double peak = 0.0;
        for (const auto& s : data.slices)
            for (const auto& v : s) peak = std::max(peak, std::abs(v));
        const double sigma = noise_rel * peak;
        RandomStream rng(seed);
        for (auto& s : data.slices)
            for (auto& v : s) v += std::complex<double>(sigma * rng.normal(), sigma * rng.normal());
    }
    return data;
}

}  // namespace dqsim
