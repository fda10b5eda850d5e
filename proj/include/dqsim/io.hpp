#pragma once

// Plain-text file formats. All floating-point fields are written with
// shortest round-trip precision; values carried in display units (nm, Debye,
// THz, GHz) are chosen so that re-parsing reproduces the internal SI value
// exactly, making parse -> serialize -> parse a fixpoint.

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqsim/coupling.hpp"
#include "dqsim/dq2d.hpp"
#include "dqsim/ensemble.hpp"
#include "dqsim/fit.hpp"
#include "dqsim/linear_spectrum.hpp"
#include "dqsim/units.hpp"

namespace dqsim {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("not a number: '" + s + "'");
    }
}

// File-unit value whose parse (multiplication by parse_factor) reproduces
// the internal value bit-exactly. Probes a few neighboring doubles around
// internal/parse_factor; the probe always succeeds for values that were
// produced by this parse in the first place.
inline double file_value(double internal, double parse_factor) {
    double x = internal / parse_factor;
    if (x * parse_factor == internal) return x;
    double up = x;
    double down = x;
    for (int k = 0; k < 4; ++k) {
        up = std::nextafter(up, std::numeric_limits<double>::infinity());
        if (up * parse_factor == internal) return up;
        down = std::nextafter(down, -std::numeric_limits<double>::infinity());
        if (down * parse_factor == internal) return down;
    }
    return x;
}

namespace textio {

inline std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Header line "# key: value"; returns false for other lines.
inline bool header_kv(const std::string& line, std::string& key, std::string& value) {
    if (line.empty() || line[0] != '#') return false;
    const auto colon = line.find(':');
    if (colon == std::string::npos) return false;
    key = trim(line.substr(1, colon - 1));
    value = trim(line.substr(colon + 1));
    return !key.empty();
}

}  // namespace textio

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream out;
    out << f.rdbuf();
    return out.str();
}

// ---------------------------------------------------------------------------
// Spectrum1D: "# key: value" headers, then two columns (THz, amplitude).

inline std::string to_text(const Spectrum1D& s) {
    std::ostringstream out;
    out << "# dqsim spectrum1d\n";
    for (const auto& [k, v] : s.metadata) out << "# " << k << ": " << v << "\n";
    out << "# columns: frequency_thz amplitude\n";
    for (std::size_t i = 0; i < s.frequency_thz.size(); ++i)
        out << format_double(s.frequency_thz[i]) << " " << format_double(s.amplitude[i]) << "\n";
    return out.str();
}

inline Spectrum1D spectrum1d_from_text(const std::string& text) {
    Spectrum1D s;
    std::istringstream in(text);
    std::string line;
    bool tagged = false;
    while (std::getline(in, line)) {
        line = textio::trim(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line == "# dqsim spectrum1d") {
                tagged = true;
                continue;
            }
            std::string k, v;
            if (textio::header_kv(line, k, v) && k != "columns") s.metadata[k] = v;
            continue;
        }
        const auto cols = textio::split_ws(line);
        if (cols.size() != 2) throw std::runtime_error("spectrum1d row needs 2 columns");
        s.frequency_thz.push_back(parse_double(cols[0]));
        s.amplitude.push_back(parse_double(cols[1]));
    }
    if (!tagged) throw std::runtime_error("not a dqsim spectrum1d file");
    return s;
}

// ---------------------------------------------------------------------------
// Spectrum2D: headers with tau and explicit axes, then the real-part matrix,
// a blank line, and the imaginary-part matrix (rows indexed by omega_T).

inline std::string to_text(const Spectrum2D& s) {
    std::ostringstream out;
    out << "# dqsim spectrum2d\n";
    out << "# tau_s: " << format_double(s.tau_s) << "\n";
    auto axis_line = [&out](const char* name, const std::vector<double>& axis) {
        out << "# " << name << ":";
        for (double v : axis) out << " " << format_double(v);
        out << "\n";
    };
    axis_line("omega_T_thz", s.omega_T_thz);
    axis_line("omega_t_thz", s.omega_t_thz);
    for (const auto& [k, v] : s.metadata) out << "# " << k << ": " << v << "\n";
    out << "# matrices: real imaginary\n";
    for (int part = 0; part < 2; ++part) {
        if (part == 1) out << "\n";
        for (std::size_t i = 0; i < s.n_T(); ++i) {
            for (std::size_t j = 0; j < s.n_t(); ++j) {
                if (j > 0) out << " ";
                out << format_double(part == 0 ? s.at(i, j).real() : s.at(i, j).imag());
            }
            out << "\n";
        }
    }
    return out.str();
}

inline Spectrum2D spectrum2d_from_text(const std::string& text) {
    Spectrum2D s;
    std::istringstream in(text);
    std::string line;
    bool tagged = false;
    std::vector<std::vector<double>> real_rows, imag_rows;
    bool in_imag = false;
    while (std::getline(in, line)) {
        const std::string t = textio::trim(line);
        if (t.empty()) {
            if (!real_rows.empty()) in_imag = true;
            continue;
        }
        if (t[0] == '#') {
            if (t == "# dqsim spectrum2d") {
                tagged = true;
                continue;
            }
            std::string k, v;
            if (!textio::header_kv(t, k, v)) continue;
            if (k == "tau_s") {
                s.tau_s = parse_double(v);
            } else if (k == "omega_T_thz" || k == "omega_t_thz") {
                std::vector<double> axis;
                for (const auto& tok : textio::split_ws(v)) axis.push_back(parse_double(tok));
                (k == "omega_T_thz" ? s.omega_T_thz : s.omega_t_thz) = axis;
            } else if (k != "matrices" && k != "columns") {
                s.metadata[k] = v;
            }
            continue;
        }
        std::vector<double> row;
        for (const auto& tok : textio::split_ws(t)) row.push_back(parse_double(tok));
        (in_imag ? imag_rows : real_rows).push_back(std::move(row));
    }
    if (!tagged) throw std::runtime_error("not a dqsim spectrum2d file");
    const std::size_t nT = s.omega_T_thz.size();
    const std::size_t nt = s.omega_t_thz.size();
    if (real_rows.size() != nT || imag_rows.size() != nT)
        throw std::runtime_error("spectrum2d matrix row count does not match the omega_T axis");
    s.values.resize(nT * nt);
    for (std::size_t i = 0; i < nT; ++i) {
        if (real_rows[i].size() != nt || imag_rows[i].size() != nt)
            throw std::runtime_error("spectrum2d matrix column count does not match the omega_t axis");
        for (std::size_t j = 0; j < nt; ++j) s.at(i, j) = {real_rows[i][j], imag_rows[i][j]};
    }
    return s;
}

// Companion magnitude matrix for a 2D spectrum, same headers, one matrix.
inline std::string magnitude_text(const Spectrum2D& s) {
    std::ostringstream out;
    out << "# dqsim spectrum2d_magnitude\n";
    out << "# tau_s: " << format_double(s.tau_s) << "\n";
    auto axis_line = [&out](const char* name, const std::vector<double>& axis) {
        out << "# " << name << ":";
        for (double v : axis) out << " " << format_double(v);
        out << "\n";
    };
    axis_line("omega_T_thz", s.omega_T_thz);
    axis_line("omega_t_thz", s.omega_t_thz);
    for (const auto& [k, v] : s.metadata) out << "# " << k << ": " << v << "\n";
    for (std::size_t i = 0; i < s.n_T(); ++i) {
        for (std::size_t j = 0; j < s.n_t(); ++j) {
            if (j > 0) out << " ";
            out << format_double(std::abs(s.at(i, j)));
        }
        out << "\n";
    }
    return out.str();
}

// A 1D slice is stored as a single-row (or single-column) 2D spectrum, so
// downstream readers need only one complex format.
inline Spectrum2D as_spectrum2d(const Slice1D& slice) {
    Spectrum2D s;
    s.tau_s = slice.tau_s;
    s.metadata = slice.metadata;
    if (slice.fixed_axis == FixedAxis::OmegaT) {
        s.omega_T_thz = {slice.fixed_value_thz};
        s.omega_t_thz = slice.axis_thz;
    } else {
        s.omega_T_thz = slice.axis_thz;
        s.omega_t_thz = {slice.fixed_value_thz};
    }
    s.values = slice.values;
    return s;
}

// ---------------------------------------------------------------------------
// Ensemble table: full config in the header, one emitter per row.

inline std::string to_text(const Ensemble& ens) {
    const EnsembleConfig& c = ens.config;
    std::ostringstream out;
    out << "# dqsim ensemble\n";
    out << "# implanted_density_cm3: " << format_double(c.implanted_density_cm3) << "\n";
    out << "# yield_fraction: " << format_double(c.yield_fraction) << "\n";
    out << "# box_m: " << format_double(c.box_m.x) << " " << format_double(c.box_m.y) << " "
        << format_double(c.box_m.z) << "\n";
    out << "# depth_profile: uniform\n";
    out << "# peaks:";
    for (const auto& p : c.peak_table)
        out << " " << to_string(p.label) << ":" << format_double(p.center_thz) << ":"
            << format_double(p.relative_amplitude) << ":" << format_double(p.dipole_scale);
    out << "\n";
    out << "# pedestal_center_thz: " << format_double(c.pedestal_center_thz) << "\n";
    out << "# pedestal_fwhm_thz: " << format_double(c.pedestal_fwhm_thz) << "\n";
    out << "# pedestal_weight: " << format_double(c.pedestal_weight) << "\n";
    out << "# pedestal_dipole_scale: " << format_double(c.pedestal_dipole_scale) << "\n";
    out << "# dipole_debye: " << format_double(c.dipole_debye) << "\n";
    out << "# t2_ps: " << format_double(c.t2_ps) << "\n";
    out << "# min_separation_m: " << format_double(c.min_separation_m) << "\n";
    out << "# seed: " << c.rng_seed << "\n";
    out << "# columns: x_nm y_nm z_nm axis_index mu_debye f0_thz gamma_ghz label\n";
    constexpr double nm = 1e-9;
    for (const auto& e : ens.emitters) {
        out << format_double(file_value(e.position.x, nm)) << " "
            << format_double(file_value(e.position.y, nm)) << " "
            << format_double(file_value(e.position.z, nm)) << " " << e.axis_index << " "
            << format_double(file_value(e.dipole_moment, PhysConstants::debye_to_Cm)) << " "
            << format_double(file_value(e.bare_frequency.omega, rad_per_thz)) << " "
            << format_double(file_value(e.bare_frequency.gamma, rad_per_ghz)) << " "
            << to_string(e.label) << "\n";
    }
    return out.str();
}

inline Ensemble ensemble_from_text(const std::string& text) {
    Ensemble ens;
    EnsembleConfig& c = ens.config;
    c.peak_table.clear();
    std::istringstream in(text);
    std::string line;
    bool tagged = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = textio::trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (t == "# dqsim ensemble") {
                tagged = true;
                continue;
            }
            std::string k, v;
            if (!textio::header_kv(t, k, v)) continue;
            if (k == "implanted_density_cm3") c.implanted_density_cm3 = parse_double(v);
            else if (k == "yield_fraction") c.yield_fraction = parse_double(v);
            else if (k == "box_m") {
                const auto p = textio::split_ws(v);
                if (p.size() != 3) throw std::runtime_error("box_m needs 3 values");
                c.box_m = {parse_double(p[0]), parse_double(p[1]), parse_double(p[2])};
            } else if (k == "peaks") {
                for (const auto& entry : textio::split_ws(v)) {
                    const auto f = textio::split(entry, ':');
                    if (f.size() != 4) throw std::runtime_error("bad peak entry: " + entry);
                    c.peak_table.push_back({peak_label_from_string(f[0]), parse_double(f[1]),
                                            parse_double(f[2]), parse_double(f[3])});
                }
            } else if (k == "pedestal_center_thz") c.pedestal_center_thz = parse_double(v);
            else if (k == "pedestal_fwhm_thz") c.pedestal_fwhm_thz = parse_double(v);
            else if (k == "pedestal_weight") c.pedestal_weight = parse_double(v);
            else if (k == "pedestal_dipole_scale") c.pedestal_dipole_scale = parse_double(v);
            else if (k == "dipole_debye") c.dipole_debye = parse_double(v);
            else if (k == "t2_ps") c.t2_ps = parse_double(v);
            else if (k == "min_separation_m") c.min_separation_m = parse_double(v);
            else if (k == "seed") c.rng_seed = std::stoull(v);
            continue;
        }
        const auto cols = textio::split_ws(t);
        if (cols.size() != 8)
            throw std::runtime_error("ensemble row at line " + std::to_string(lineno) +
                                     " needs 8 columns");
        Emitter e;
        e.position = {parse_double(cols[0]) * 1e-9, parse_double(cols[1]) * 1e-9,
                      parse_double(cols[2]) * 1e-9};
        e.axis_index = std::stoi(cols[3]);
        if (e.axis_index < 0 || e.axis_index > 3)
            throw std::runtime_error("axis index out of range at line " + std::to_string(lineno));
        e.dipole_axis = diamond_axes()[static_cast<std::size_t>(e.axis_index)];
        e.dipole_moment = parse_double(cols[4]) * PhysConstants::debye_to_Cm;
        e.bare_frequency.omega = parse_double(cols[5]) * rad_per_thz;
        e.bare_frequency.gamma = parse_double(cols[6]) * rad_per_ghz;
        e.label = peak_label_from_string(cols[7]);
        ens.emitters.push_back(e);
    }
    if (!tagged) throw std::runtime_error("not a dqsim ensemble file");
    return ens;
}

// ---------------------------------------------------------------------------
// Coupling-matrix dump, dense, in GHz.

inline std::string to_text(const CouplingMatrix& m) {
    std::ostringstream out;
    out << "# dqsim coupling_matrix\n";
    out << "# size: " << m.size() << "\n";
    out << "# units: GHz\n";
    for (Eigen::Index i = 0; i < m.h.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.h.cols(); ++j) {
            if (j > 0) out << " ";
            out << format_double(file_value(m.h(i, j), rad_per_ghz));
        }
        out << "\n";
    }
    return out.str();
}

inline CouplingMatrix coupling_matrix_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool tagged = false;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        const std::string t = textio::trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (t == "# dqsim coupling_matrix") tagged = true;
            continue;
        }
        std::vector<double> row;
        for (const auto& tok : textio::split_ws(t)) row.push_back(parse_double(tok) * rad_per_ghz);
        rows.push_back(std::move(row));
    }
    if (!tagged) throw std::runtime_error("not a dqsim coupling_matrix file");
    CouplingMatrix m;
    const auto n = static_cast<Eigen::Index>(rows.size());
    m.h.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n)
            throw std::runtime_error("coupling matrix is not square");
        for (Eigen::Index j = 0; j < n; ++j)
            m.h(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return m;
}

// ---------------------------------------------------------------------------
// Pump-sweep table: one row per pump value, one column per peak box.

struct PumpSweepTable {
    std::vector<std::string> labels;
    std::vector<double> e_values;
    std::vector<std::vector<double>> intensities;  // [row][label]
};

inline std::string to_text(const PumpSweepTable& t) {
    std::ostringstream out;
    out << "# dqsim pump_sweep\n";
    out << "# columns: e_over_epi";
    for (const auto& l : t.labels) out << " " << l;
    out << "\n";
    for (std::size_t i = 0; i < t.e_values.size(); ++i) {
        out << format_double(t.e_values[i]);
        for (double v : t.intensities[i]) out << " " << format_double(v);
        out << "\n";
    }
    return out.str();
}

inline PumpSweepTable pump_sweep_from_text(const std::string& text) {
    PumpSweepTable t;
    std::istringstream in(text);
    std::string line;
    bool tagged = false;
    while (std::getline(in, line)) {
        const std::string s = textio::trim(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            if (s == "# dqsim pump_sweep") tagged = true;
            std::string k, v;
            if (textio::header_kv(s, k, v) && k == "columns") {
                auto cols = textio::split_ws(v);
                t.labels.assign(cols.begin() + 1, cols.end());
            }
            continue;
        }
        const auto cols = textio::split_ws(s);
        if (cols.size() != t.labels.size() + 1)
            throw std::runtime_error("pump sweep row width does not match columns header");
        t.e_values.push_back(parse_double(cols[0]));
        std::vector<double> row;
        for (std::size_t i = 1; i < cols.size(); ++i) row.push_back(parse_double(cols[i]));
        t.intensities.push_back(std::move(row));
    }
    if (!tagged) throw std::runtime_error("not a dqsim pump_sweep file");
    return t;
}

// ---------------------------------------------------------------------------
// Sweep manifest: one "E path" line per pump value.

struct SweepManifest {
    std::vector<double> e_values;
    std::vector<std::string> paths;
};

inline std::string to_text(const SweepManifest& m) {
    std::ostringstream out;
    out << "# dqsim sweep_manifest\n";
    for (std::size_t i = 0; i < m.e_values.size(); ++i)
        out << format_double(m.e_values[i]) << " " << m.paths[i] << "\n";
    return out.str();
}

inline SweepManifest manifest_from_text(const std::string& text) {
    SweepManifest m;
    std::istringstream in(text);
    std::string line;
    bool tagged = false;
    while (std::getline(in, line)) {
        const std::string s = textio::trim(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            if (s == "# dqsim sweep_manifest") tagged = true;
            continue;
        }
        const auto cols = textio::split_ws(s);
        if (cols.size() != 2) throw std::runtime_error("manifest line needs 'E path'");
        m.e_values.push_back(parse_double(cols[0]));
        m.paths.push_back(cols[1]);
    }
    if (!tagged) throw std::runtime_error("not a dqsim sweep_manifest file");
    return m;
}

// ---------------------------------------------------------------------------
// Fit parameters / fit report as a key-value document. Interaction
// parameters in GHz, transition frequencies in THz.

inline std::string to_text(const FitParams& p) {
    std::ostringstream out;
    out << "delta_s0_ghz: " << format_double(file_value(p.delta_s0, rad_per_ghz)) << "\n";
    out << "delta_d0_ghz: " << format_double(file_value(p.delta_d0, rad_per_ghz)) << "\n";
    out << "delta_s1_ghz: " << format_double(file_value(p.delta_s1, rad_per_ghz)) << "\n";
    out << "delta_d1_ghz: " << format_double(file_value(p.delta_d1, rad_per_ghz)) << "\n";
    out << "e_pi: " << format_double(p.e_pi) << "\n";
    out << "amplitude_re: " << format_double(p.amplitude.real()) << "\n";
    out << "amplitude_im: " << format_double(p.amplitude.imag()) << "\n";
    out << "half_pi_argument: " << (p.half_pi_argument ? 1 : 0) << "\n";
    out << "pair_f_10p_thz: " << format_double(file_value(p.pair.omega_10p.omega, rad_per_thz))
        << "\n";
    out << "pair_gamma_10p_ghz: " << format_double(file_value(p.pair.omega_10p.gamma, rad_per_ghz))
        << "\n";
    out << "pair_f_01p_thz: " << format_double(file_value(p.pair.omega_01p.omega, rad_per_thz))
        << "\n";
    out << "pair_gamma_01p_ghz: " << format_double(file_value(p.pair.omega_01p.gamma, rad_per_ghz))
        << "\n";
    out << "pair_mu_10_debye: " << format_double(file_value(p.pair.mu_10, PhysConstants::debye_to_Cm))
        << "\n";
    out << "pair_mu_1p0p_debye: "
        << format_double(file_value(p.pair.mu_1p0p, PhysConstants::debye_to_Cm)) << "\n";
    return out.str();
}

inline std::string fit_report_text(const FitReport& r) {
    std::ostringstream out;
    out << "# dqsim fit_report\n";
    out << "converged: " << (r.converged ? 1 : 0) << "\n";
    out << "iterations: " << r.iterations << "\n";
    out << "message: " << r.message << "\n";
    out << "final_cost: " << format_double(r.final_cost) << "\n";
    out << to_text(r.params);
    // Curvature-based estimates; no external calibration backs them.
    out << "# uncertainties: curvature-based, frequency-like parameters in GHz\n";
    for (std::size_t j = 0; j < r.uncertainties.size(); ++j) {
        const std::string& name = r.param_names[j];
        double v = r.uncertainties[j];
        const bool frequency_like = name.rfind("delta_", 0) == 0 || name.rfind("gamma", 0) == 0 ||
                                    name.rfind("omega", 0) == 0;
        if (frequency_like) v /= rad_per_ghz;
        out << "unc_" << name << ": " << format_double(v) << "\n";
    }
    return out.str();
}

inline FitParams fit_params_from_text(const std::string& text) {
    FitParams p;
    std::istringstream in(text);
    std::string line;
    std::map<std::string, std::string> kv;
    while (std::getline(in, line)) {
        const std::string t = textio::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto colon = t.find(':');
        if (colon == std::string::npos) throw std::runtime_error("expected 'key: value': " + t);
        kv[textio::trim(t.substr(0, colon))] = textio::trim(t.substr(colon + 1));
    }
    auto need = [&kv](const std::string& k) {
        auto it = kv.find(k);
        if (it == kv.end()) throw std::runtime_error("missing fit parameter key: " + k);
        return it->second;
    };
    p.delta_s0 = parse_double(need("delta_s0_ghz")) * rad_per_ghz;
    p.delta_d0 = parse_double(need("delta_d0_ghz")) * rad_per_ghz;
    p.delta_s1 = parse_double(need("delta_s1_ghz")) * rad_per_ghz;
    p.delta_d1 = parse_double(need("delta_d1_ghz")) * rad_per_ghz;
    p.e_pi = parse_double(need("e_pi"));
    p.amplitude = {parse_double(need("amplitude_re")), parse_double(need("amplitude_im"))};
    p.half_pi_argument = need("half_pi_argument") != "0";
    p.pair.omega_10p.omega = parse_double(need("pair_f_10p_thz")) * rad_per_thz;
    p.pair.omega_10p.gamma = parse_double(need("pair_gamma_10p_ghz")) * rad_per_ghz;
    p.pair.omega_01p.omega = parse_double(need("pair_f_01p_thz")) * rad_per_thz;
    p.pair.omega_01p.gamma = parse_double(need("pair_gamma_01p_ghz")) * rad_per_ghz;
    p.pair.mu_10 = parse_double(need("pair_mu_10_debye")) * PhysConstants::debye_to_Cm;
    p.pair.mu_1p0p = parse_double(need("pair_mu_1p0p_debye")) * PhysConstants::debye_to_Cm;
    return p;
}

}  // namespace dqsim
