// dqsim: batch front-end for the coupled-emitter spectroscopy toolkit.
//
// Subcommands: ensemble, linear, dq2d, pump-sweep, fit, oracle, selfcheck.
// Every run parses one sectioned config file, writes its outputs plus the
// fully resolved configuration into --out, and is deterministic given the
// resolved config. Exit codes: 0 success, 2 config error, 3 numerical
// failure, 4 non-convergence.

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dqsim/config.hpp"
#include "dqsim/coupling.hpp"
#include "dqsim/dq2d.hpp"
#include "dqsim/ensemble.hpp"
#include "dqsim/fit.hpp"
#include "dqsim/io.hpp"
#include "dqsim/linear_spectrum.hpp"
#include "dqsim/oracle.hpp"
#include "dqsim/rabi_pump.hpp"
#include "dqsim/selfcheck.hpp"

namespace fs = std::filesystem;
using namespace dqsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNonConvergence = 4;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    int threads = 1;
    bool strict = false;
};

const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> schema{
        {"ensemble",
         {"implanted_density_cm3", "yield_fraction", "box_nm", "depth_profile", "peaks",
          "pedestal_center_thz", "pedestal_fwhm_thz", "pedestal_weight", "pedestal_dipole_scale",
          "dipole_debye", "t2_ps", "min_separation_nm", "seed", "dump_coupling_matrix"}},
        {"material", {"refractive_index", "relative_permittivity"}},
        {"linear",
         {"grid_min_thz", "grid_max_thz", "grid_points", "n_realizations", "zero_interaction",
          "dark_pedestal", "measured_path"}},
        {"pair",
         {"f_10p_thz", "gamma_10p_ghz", "f_01p_thz", "gamma_01p_ghz", "mu_10_debye",
          "mu_1p0p_debye", "delta_s_ghz", "delta_d_ghz"}},
        {"dq2d",
         {"mode", "tau_ps", "omega_T_min_thz", "omega_T_max_thz", "omega_T_points",
          "omega_t_min_thz", "omega_t_max_thz", "omega_t_points", "ensemble_delta_d_ghz",
          "write_magnitude"}},
        {"pump",
         {"e_pi", "delta_s0_ghz", "delta_d0_ghz", "delta_s1_ghz", "delta_d1_ghz", "amplitude_re",
          "amplitude_im", "half_pi_argument"}},
        {"sweep",
         {"e_min", "e_max", "e_points", "slice_omega_T_thz", "boxes", "saturation_depth",
          "saturation_e_sat"}},
        {"fit",
         {"manifest", "initial_params", "max_iter", "cost_rel_tol", "grad_tol", "fd_rel_step",
          "fit_pair"}},
        {"oracle",
         {"tau_ps", "n_T", "dt_T_ps", "n_t", "dt_t_ps", "omega_T_min_thz", "omega_T_max_thz",
          "omega_T_points", "omega_t_min_thz", "omega_t_max_thz", "omega_t_points"}},
    };
    return schema;
}

ParsedConfig load_config(const GlobalOptions& g) {
    if (g.config_path.empty()) throw config_error("--config is required for this subcommand");
    ParsedConfig cfg = ParsedConfig::parse_text(read_file(g.config_path));
    const auto unknown = cfg.unknown_keys(config_schema());
    for (const auto& u : unknown) {
        if (g.strict) throw config_error(u);
        std::cerr << "warning: " << u << "\n";
    }
    return cfg;
}

EnsembleConfig ensemble_from_config(const ParsedConfig& cfg, const GlobalOptions& g) {
    EnsembleConfig e;
    e.implanted_density_cm3 =
        cfg.get_double("ensemble", "implanted_density_cm3", e.implanted_density_cm3);
    e.yield_fraction = cfg.get_double("ensemble", "yield_fraction", e.yield_fraction);
    const auto box = cfg.get_doubles("ensemble", "box_nm", {100.0, 100.0, 100.0});
    if (box.size() != 3) throw config_error("box_nm needs exactly 3 values");
    e.box_m = {box[0] * 1e-9, box[1] * 1e-9, box[2] * 1e-9};
    const std::string profile = cfg.get_string("ensemble", "depth_profile", "uniform");
    if (profile != "uniform") throw config_error("unsupported depth_profile '" + profile + "'");
    if (cfg.has("ensemble", "peaks")) {
        e.peak_table.clear();
        for (const auto& entry : textio::split_ws(cfg.require_string("ensemble", "peaks"))) {
            const auto f = textio::split(entry, ':');
            if (f.size() != 4) throw config_error("bad peak entry '" + entry + "'");
            try {
                e.peak_table.push_back({peak_label_from_string(f[0]), parse_double(f[1]),
                                        parse_double(f[2]), parse_double(f[3])});
            } catch (const std::exception& err) {
                throw config_error("bad peak entry '" + entry + "': " + err.what());
            }
        }
    }
    e.pedestal_center_thz = cfg.get_double("ensemble", "pedestal_center_thz", e.pedestal_center_thz);
    e.pedestal_fwhm_thz = cfg.get_double("ensemble", "pedestal_fwhm_thz", e.pedestal_fwhm_thz);
    e.pedestal_weight = cfg.get_double("ensemble", "pedestal_weight", e.pedestal_weight);
    e.pedestal_dipole_scale =
        cfg.get_double("ensemble", "pedestal_dipole_scale", e.pedestal_dipole_scale);
    e.dipole_debye = cfg.get_double("ensemble", "dipole_debye", e.dipole_debye);
    e.t2_ps = cfg.get_double("ensemble", "t2_ps", e.t2_ps);
    e.min_separation_m = cfg.get_double("ensemble", "min_separation_nm", 1.0) * 1e-9;
    e.rng_seed = static_cast<std::uint64_t>(cfg.get_int("ensemble", "seed", 1));
    if (g.seed_override) e.rng_seed = *g.seed_override;
    return e;
}

MaterialParams material_from_config(const ParsedConfig& cfg) {
    const double n = cfg.get_double("material", "refractive_index", 2.4);
    MaterialParams m = MaterialParams::from_index(n);
    m.relative_permittivity =
        cfg.get_double("material", "relative_permittivity", m.relative_permittivity);
    if (!(m.relative_permittivity >= 1.0))
        throw config_error("relative_permittivity must be >= 1");
    return m;
}

PairSystem pair_from_config(const ParsedConfig& cfg) {
    PairSystem p;
    const double default_gamma_ghz = ghz_from_angular(1.0 / 120e-12);
    p.omega_10p = {angular_from_thz(cfg.get_double("pair", "f_10p_thz", 407.9)),
                   angular_from_ghz(cfg.get_double("pair", "gamma_10p_ghz", default_gamma_ghz))};
    p.omega_01p = {angular_from_thz(cfg.get_double("pair", "f_01p_thz", 407.9)),
                   angular_from_ghz(cfg.get_double("pair", "gamma_01p_ghz", default_gamma_ghz))};
    p.mu_10 = debye_to_si(cfg.get_double("pair", "mu_10_debye", 14.3));
    p.mu_1p0p = debye_to_si(cfg.get_double("pair", "mu_1p0p_debye", 14.3));
    p.delta = interaction_delta(angular_from_ghz(cfg.get_double("pair", "delta_s_ghz", 6.0)),
                                angular_from_ghz(cfg.get_double("pair", "delta_d_ghz", 2.0)));
    return p;
}

PumpModel pump_from_config(const ParsedConfig& cfg) {
    PumpModel m;
    m.e_pi = cfg.get_double("pump", "e_pi", 1.0);
    m.delta_s0 = angular_from_ghz(cfg.get_double("pump", "delta_s0_ghz", 6.0));
    m.delta_d0 = angular_from_ghz(cfg.get_double("pump", "delta_d0_ghz", 2.0));
    m.delta_s1 = angular_from_ghz(cfg.get_double("pump", "delta_s1_ghz", -200.0));
    m.delta_d1 = angular_from_ghz(cfg.get_double("pump", "delta_d1_ghz", 50.0));
    m.amplitude = {cfg.get_double("pump", "amplitude_re", 1.0),
                   cfg.get_double("pump", "amplitude_im", 0.0)};
    m.half_pi_argument = cfg.get_bool("pump", "half_pi_argument", true);
    validate(m);
    return m;
}

std::vector<double> axis_from_config(const ParsedConfig& cfg, const std::string& section,
                                     const std::string& prefix, double def_min, double def_max,
                                     long long def_points) {
    const double lo = cfg.get_double(section, prefix + "_min_thz", def_min);
    const double hi = cfg.get_double(section, prefix + "_max_thz", def_max);
    const long long n = cfg.get_int(section, prefix + "_points", def_points);
    if (n < 2) throw config_error(prefix + "_points must be >= 2");
    return uniform_grid(lo, hi, static_cast<std::size_t>(n));
}

void write_out(const GlobalOptions& g, const std::string& name, const std::string& content) {
    fs::create_directories(g.out_dir);
    const fs::path p = fs::path(g.out_dir) / name;
    fs::create_directories(p.parent_path().empty() ? fs::path(g.out_dir) : p.parent_path());
    write_file(p.string(), content);
    std::cout << "wrote " << p.string() << "\n";
}

void emit_ensemble_section(ConfigWriter& w, const EnsembleConfig& e, bool dump_matrix) {
    w.section("ensemble");
    w.kv("implanted_density_cm3", e.implanted_density_cm3);
    w.kv("yield_fraction", e.yield_fraction);
    w.kv("box_nm", format_double(file_value(e.box_m.x, 1e-9)) + " " +
                       format_double(file_value(e.box_m.y, 1e-9)) + " " +
                       format_double(file_value(e.box_m.z, 1e-9)));
    w.kv("depth_profile", std::string("uniform"));
    std::string peaks;
    for (const auto& p : e.peak_table) {
        if (!peaks.empty()) peaks += " ";
        peaks += std::string(to_string(p.label)) + ":" + format_double(p.center_thz) + ":" +
                 format_double(p.relative_amplitude) + ":" + format_double(p.dipole_scale);
    }
    w.kv("peaks", peaks);
    w.kv("pedestal_center_thz", e.pedestal_center_thz);
    w.kv("pedestal_fwhm_thz", e.pedestal_fwhm_thz);
    w.kv("pedestal_weight", e.pedestal_weight);
    w.kv("pedestal_dipole_scale", e.pedestal_dipole_scale);
    w.kv("dipole_debye", e.dipole_debye);
    w.kv("t2_ps", e.t2_ps);
    w.kv("min_separation_nm", file_value(e.min_separation_m, 1e-9));
    w.kv("seed", static_cast<long long>(e.rng_seed));
    w.kv("dump_coupling_matrix", dump_matrix);
}

void emit_material_section(ConfigWriter& w, const MaterialParams& m) {
    w.section("material");
    w.kv("refractive_index", m.refractive_index);
    w.kv("relative_permittivity", m.relative_permittivity);
}

void emit_pair_section(ConfigWriter& w, const PairSystem& p) {
    w.section("pair");
    w.kv("f_10p_thz", file_value(p.omega_10p.omega, rad_per_thz));
    w.kv("gamma_10p_ghz", file_value(p.omega_10p.gamma, rad_per_ghz));
    w.kv("f_01p_thz", file_value(p.omega_01p.omega, rad_per_thz));
    w.kv("gamma_01p_ghz", file_value(p.omega_01p.gamma, rad_per_ghz));
    w.kv("mu_10_debye", file_value(p.mu_10, PhysConstants::debye_to_Cm));
    w.kv("mu_1p0p_debye", file_value(p.mu_1p0p, PhysConstants::debye_to_Cm));
    w.kv("delta_s_ghz", file_value(p.shift_rad(), rad_per_ghz));
    w.kv("delta_d_ghz", file_value(p.dephasing_rad(), rad_per_ghz));
}

// ---------------------------------------------------------------------------

int cmd_ensemble(const GlobalOptions& g) {
    const ParsedConfig cfg = load_config(g);
    const EnsembleConfig e = ensemble_from_config(cfg, g);
    const bool dump_matrix = cfg.get_bool("ensemble", "dump_coupling_matrix", false);
    const MaterialParams mat = material_from_config(cfg);

    const Ensemble ens = sample_ensemble(e);
    write_out(g, "ensemble.dat", to_text(ens));
    if (dump_matrix) write_out(g, "coupling_matrix.dat", to_text(build_coupling_matrix(ens, mat)));

    ConfigWriter w;
    emit_ensemble_section(w, e, dump_matrix);
    w.blank();
    emit_material_section(w, mat);
    write_out(g, "resolved.cfg", w.text());
    std::cout << "ensemble: " << ens.size() << " emitters\n";
    return kExitOk;
}

int cmd_linear(const GlobalOptions& g) {
    const ParsedConfig cfg = load_config(g);
    const EnsembleConfig e = ensemble_from_config(cfg, g);
    const MaterialParams mat = material_from_config(cfg);

    LinearOptions opt;
    opt.zero_interaction = cfg.get_bool("linear", "zero_interaction", false);
    opt.dark_pedestal = cfg.get_bool("linear", "dark_pedestal", false);
    opt.threads = g.threads;
    const long long n_real = cfg.get_int("linear", "n_realizations", 1);
    if (n_real < 1) throw config_error("n_realizations must be >= 1");
    const auto grid = axis_from_config(cfg, "linear", "grid", 404.0, 412.0, 2001);

    const double t2_s = e.t2_ps * 1e-12;
    const Spectrum1D spec = ensemble_average_spectrum(e, static_cast<std::size_t>(n_real), t2_s,
                                                      grid, mat, opt);
    Spectrum1D out = spec;
    out.metadata["kind"] = "linear";
    out.metadata["n_realizations"] = std::to_string(n_real);
    write_out(g, "linear.dat", to_text(out));

    if (cfg.has("linear", "measured_path")) {
        const Spectrum1D measured =
            spectrum1d_from_text(read_file(cfg.require_string("linear", "measured_path")));
        const OverlayResidual res = overlay_residual(out, measured);
        std::ostringstream rep;
        rep << "# dqsim overlay_residual\n";
        rep << "rms: " << format_double(res.rms) << "\n";
        rep << "max_abs: " << format_double(res.max_abs) << "\n";
        write_out(g, "overlay_residual.txt", rep.str());
    }

    ConfigWriter w;
    emit_ensemble_section(w, e, false);
    w.blank();
    emit_material_section(w, mat);
    w.blank();
    w.section("linear");
    w.kv("grid_min_thz", grid.front());
    w.kv("grid_max_thz", grid.back());
    w.kv("grid_points", static_cast<long long>(grid.size()));
    w.kv("n_realizations", n_real);
    w.kv("zero_interaction", opt.zero_interaction);
    w.kv("dark_pedestal", opt.dark_pedestal);
    if (cfg.has("linear", "measured_path"))
        w.kv("measured_path", cfg.require_string("linear", "measured_path"));
    write_out(g, "resolved.cfg", w.text());
    return kExitOk;
}

std::vector<WeightedPair> dq2d_pairs(const ParsedConfig& cfg, const GlobalOptions& g,
                                     const std::string& mode) {
    if (mode == "pair") return {{pair_from_config(cfg), 1.0}};
    if (mode != "ensemble") throw config_error("dq2d mode must be 'pair' or 'ensemble'");
    const EnsembleConfig e = ensemble_from_config(cfg, g);
    const MaterialParams mat = material_from_config(cfg);
    const Ensemble ens = sample_ensemble(e);
    if (ens.size() < 2) throw config_error("ensemble mode needs at least 2 emitters");
    const double dephasing =
        angular_from_ghz(cfg.get_double("dq2d", "ensemble_delta_d_ghz", 2.0));
    return pairs_from_ensemble(ens, mat, dephasing);
}

int cmd_dq2d(const GlobalOptions& g) {
    const ParsedConfig cfg = load_config(g);
    const std::string mode = cfg.get_string("dq2d", "mode", "pair");
    if (!cfg.has("dq2d", "tau_ps")) throw config_error("missing required key 'tau_ps' in [dq2d]");
    const double tau_s = cfg.require_double("dq2d", "tau_ps") * 1e-12;

    const auto pairs = dq2d_pairs(cfg, g, mode);
    const auto axis_T = axis_from_config(cfg, "dq2d", "omega_T", 815.76, 815.84, 161);
    const auto axis_t = axis_from_config(cfg, "dq2d", "omega_t", 407.87, 407.93, 161);

    Spectrum2D spec = grid_response(pairs, tau_s, axis_T, axis_t, g.threads);
    spec.metadata["mode"] = mode;
    write_out(g, "dq2d.dat", to_text(spec));
    const bool write_magnitude = cfg.get_bool("dq2d", "write_magnitude", false);
    if (write_magnitude) write_out(g, "dq2d_magnitude.dat", magnitude_text(spec));

    ConfigWriter w;
    w.section("dq2d");
    w.kv("mode", mode);
    w.kv("write_magnitude", write_magnitude);
    w.kv("tau_ps", file_value(tau_s, 1e-12));
    w.kv("omega_T_min_thz", axis_T.front());
    w.kv("omega_T_max_thz", axis_T.back());
    w.kv("omega_T_points", static_cast<long long>(axis_T.size()));
    w.kv("omega_t_min_thz", axis_t.front());
    w.kv("omega_t_max_thz", axis_t.back());
    w.kv("omega_t_points", static_cast<long long>(axis_t.size()));
    if (mode == "pair") {
        w.blank();
        emit_pair_section(w, pairs.front().pair);
    } else {
        w.kv("ensemble_delta_d_ghz", cfg.get_double("dq2d", "ensemble_delta_d_ghz", 2.0));
        w.blank();
        emit_ensemble_section(w, ensemble_from_config(cfg, g), false);
        w.blank();
        emit_material_section(w, material_from_config(cfg));
    }
    write_out(g, "resolved.cfg", w.text());
    return kExitOk;
}

struct SweepBox {
    PeakBox box;
    bool saturating = false;
};

std::vector<SweepBox> boxes_from_config(const ParsedConfig& cfg) {
    std::vector<SweepBox> out;
    if (!cfg.has("sweep", "boxes")) return out;
    for (const auto& entry : textio::split_ws(cfg.require_string("sweep", "boxes"))) {
        const auto f = textio::split(entry, ':');
        if (f.size() != 5 && f.size() != 6)
            throw config_error("bad box entry '" + entry +
                               "' (label:Tlo:Thi:tlo:thi[:coherent|saturating])");
        SweepBox b;
        b.box.label = f[0];
        try {
            b.box.omega_T_lo_thz = parse_double(f[1]);
            b.box.omega_T_hi_thz = parse_double(f[2]);
            b.box.omega_t_lo_thz = parse_double(f[3]);
            b.box.omega_t_hi_thz = parse_double(f[4]);
        } catch (const std::exception& err) {
            throw config_error("bad box entry '" + entry + "': " + err.what());
        }
        if (f.size() == 6) {
            if (f[5] == "saturating") b.saturating = true;
            else if (f[5] != "coherent") throw config_error("bad box model '" + f[5] + "'");
        }
        out.push_back(b);
    }
    return out;
}

int cmd_pump_sweep(const GlobalOptions& g) {
    const ParsedConfig cfg = load_config(g);
    if (!cfg.has("dq2d", "tau_ps")) throw config_error("missing required key 'tau_ps' in [dq2d]");
    const double tau_s = cfg.require_double("dq2d", "tau_ps") * 1e-12;
    const PairSystem base_pair = pair_from_config(cfg);
    const PumpModel pump = pump_from_config(cfg);

    const double e_min = cfg.get_double("sweep", "e_min", 0.0);
    const double e_max = cfg.get_double("sweep", "e_max", 2.0);
    const long long e_points = cfg.get_int("sweep", "e_points", 41);
    if (e_points < 1 || !(e_max >= e_min)) throw config_error("bad sweep range");

    const auto axis_T = axis_from_config(cfg, "dq2d", "omega_T", 815.76, 815.84, 161);
    const auto axis_t = axis_from_config(cfg, "dq2d", "omega_t", 407.87, 407.93, 161);
    auto boxes = boxes_from_config(cfg);
    if (boxes.empty()) {
        SweepBox b;
        b.box.label = "resonant";
        b.box.omega_T_lo_thz = axis_T.front();
        b.box.omega_T_hi_thz = axis_T.back();
        b.box.omega_t_lo_thz = axis_t.front();
        b.box.omega_t_hi_thz = axis_t.back();
        boxes.push_back(b);
    }
    const SaturationModel sat{cfg.get_double("sweep", "saturation_depth", 0.8),
                              cfg.get_double("sweep", "saturation_e_sat", 0.5)};
    const double slice_at =
        cfg.get_double("sweep", "slice_omega_T_thz",
                       thz_from_angular(base_pair.omega_11p().omega + pump.delta_s0));

    PumpSweepTable table;
    for (const auto& b : boxes) table.labels.push_back(b.box.label);
    SweepManifest manifest;

    // Zero-pump reference for the saturating boxes.
    PairSystem zero_pair = base_pair;
    zero_pair.delta = pump_delta(0.0, pump);
    const Spectrum2D zero_spec = grid_response({{zero_pair, 1.0}}, tau_s, axis_T, axis_t, g.threads);

    for (long long k = 0; k < e_points; ++k) {
        const double e = (e_points == 1)
                             ? e_min
                             : e_min + (e_max - e_min) * static_cast<double>(k) /
                                           static_cast<double>(e_points - 1);
        const double e_rel = e / pump.e_pi;
        PairSystem pumped = base_pair;
        pumped.delta = pump_delta(e_rel, pump);
        Spectrum2D spec = grid_response({{pumped, 1.0}}, tau_s, axis_T, axis_t, g.threads);
        const std::complex<double> scale = pump.amplitude * pump_amplitude_factor(e_rel, pump);
        for (auto& v : spec.values) v *= scale;

        std::vector<double> row;
        for (const auto& b : boxes) {
            if (b.saturating) {
                row.push_back(integrate_peak(zero_spec, b.box, PeakMode::Magnitude) *
                              std::abs(pump.amplitude) * sat.factor(e));
            } else {
                row.push_back(integrate_peak(spec, b.box, PeakMode::Magnitude));
            }
        }
        table.e_values.push_back(e);
        table.intensities.push_back(row);

        const Slice1D slice = extract_slice(spec, FixedAxis::OmegaT, slice_at);
        Spectrum2D slice_spec = as_spectrum2d(slice);
        slice_spec.metadata["pump_e"] = format_double(e);
        char name[64];
        std::snprintf(name, sizeof(name), "slices/slice_%04lld.dat", k);
        write_out(g, name, to_text(slice_spec));
        manifest.e_values.push_back(e);
        manifest.paths.push_back(name);
    }

    write_out(g, "sweep.dat", to_text(table));
    write_out(g, "manifest.txt", to_text(manifest));

    ConfigWriter w;
    emit_pair_section(w, base_pair);
    w.blank();
    w.section("pump");
    w.kv("e_pi", pump.e_pi);
    w.kv("delta_s0_ghz", file_value(pump.delta_s0, rad_per_ghz));
    w.kv("delta_d0_ghz", file_value(pump.delta_d0, rad_per_ghz));
    w.kv("delta_s1_ghz", file_value(pump.delta_s1, rad_per_ghz));
    w.kv("delta_d1_ghz", file_value(pump.delta_d1, rad_per_ghz));
    w.kv("amplitude_re", pump.amplitude.real());
    w.kv("amplitude_im", pump.amplitude.imag());
    w.kv("half_pi_argument", pump.half_pi_argument);
    w.blank();
    w.section("sweep");
    w.kv("e_min", e_min);
    w.kv("e_max", e_max);
    w.kv("e_points", e_points);
    w.kv("slice_omega_T_thz", slice_at);
    std::string boxes_text;
    for (const auto& b : boxes) {
        if (!boxes_text.empty()) boxes_text += " ";
        boxes_text += b.box.label + ":" + format_double(b.box.omega_T_lo_thz) + ":" +
                      format_double(b.box.omega_T_hi_thz) + ":" +
                      format_double(b.box.omega_t_lo_thz) + ":" +
                      format_double(b.box.omega_t_hi_thz) + ":" +
                      (b.saturating ? "saturating" : "coherent");
    }
    w.kv("boxes", boxes_text);
    w.kv("saturation_depth", sat.depth);
    w.kv("saturation_e_sat", sat.e_sat);
    w.blank();
    w.section("dq2d");
    w.kv("tau_ps", file_value(tau_s, 1e-12));
    w.kv("omega_T_min_thz", axis_T.front());
    w.kv("omega_T_max_thz", axis_T.back());
    w.kv("omega_T_points", static_cast<long long>(axis_T.size()));
    w.kv("omega_t_min_thz", axis_t.front());
    w.kv("omega_t_max_thz", axis_t.back());
    w.kv("omega_t_points", static_cast<long long>(axis_t.size()));
    write_out(g, "resolved.cfg", w.text());
    return kExitOk;
}

int cmd_fit(const GlobalOptions& g) {
    const ParsedConfig cfg = load_config(g);
    const std::string manifest_path = cfg.require_string("fit", "manifest");
    const SweepManifest manifest = manifest_from_text(read_file(manifest_path));
    if (manifest.e_values.size() < 2) throw config_error("manifest needs at least 2 pump values");

    SliceDataset data;
    data.pump_values = manifest.e_values;
    const fs::path base = fs::path(manifest_path).parent_path();
    bool first = true;
    for (const auto& rel : manifest.paths) {
        const fs::path p = base / rel;
        const Spectrum2D s = spectrum2d_from_text(read_file(p.string()));
        if (s.n_T() != 1) throw config_error("slice file must have a single omega_T row: " +
                                             p.string());
        if (first) {
            data.axis_thz = s.omega_t_thz;
            data.omega_T_thz = s.omega_T_thz[0];
            data.tau_s = s.tau_s;
            first = false;
        } else if (s.omega_t_thz != data.axis_thz) {
            throw config_error("slice files do not share one omega_t axis");
        }
        data.slices.push_back(s.values);
    }

    FitParams initial;
    if (cfg.has("fit", "initial_params")) {
        initial = fit_params_from_text(read_file(cfg.require_string("fit", "initial_params")));
    } else {
        const PumpModel pump = pump_from_config(cfg);
        initial.delta_s0 = pump.delta_s0;
        initial.delta_d0 = pump.delta_d0;
        initial.delta_s1 = pump.delta_s1;
        initial.delta_d1 = pump.delta_d1;
        initial.e_pi = pump.e_pi;
        initial.amplitude = pump.amplitude;
        initial.half_pi_argument = pump.half_pi_argument;
        initial.pair = pair_from_config(cfg);
    }

    FitOptions options;
    options.max_iter = static_cast<int>(cfg.get_int("fit", "max_iter", options.max_iter));
    options.cost_rel_tol = cfg.get_double("fit", "cost_rel_tol", options.cost_rel_tol);
    options.grad_tol = cfg.get_double("fit", "grad_tol", options.grad_tol);
    options.fd_rel_step = cfg.get_double("fit", "fd_rel_step", options.fd_rel_step);
    options.fit_pair = cfg.get_bool("fit", "fit_pair", options.fit_pair);

    const FitReport report = fit_slices(data, initial, options);
    write_out(g, "fit_report.txt", fit_report_text(report));

    ConfigWriter w;
    w.section("fit");
    w.kv("manifest", manifest_path);
    if (cfg.has("fit", "initial_params"))
        w.kv("initial_params", cfg.require_string("fit", "initial_params"));
    w.kv("max_iter", static_cast<long long>(options.max_iter));
    w.kv("cost_rel_tol", options.cost_rel_tol);
    w.kv("grad_tol", options.grad_tol);
    w.kv("fd_rel_step", options.fd_rel_step);
    w.kv("fit_pair", options.fit_pair);
    write_out(g, "resolved.cfg", w.text());

    std::cout << "fit: " << report.message << " after " << report.iterations
              << " iterations, final cost " << report.final_cost << "\n";
    return report.converged ? kExitOk : kExitNonConvergence;
}

int cmd_oracle(const GlobalOptions& g) {
    const ParsedConfig cfg = load_config(g);
    const PairSystem pair = pair_from_config(cfg);
    if (!cfg.has("oracle", "tau_ps"))
        throw config_error("missing required key 'tau_ps' in [oracle]");
    const double tau_s = cfg.require_double("oracle", "tau_ps") * 1e-12;

    TimeGrid grid_T{static_cast<std::size_t>(cfg.get_int("oracle", "n_T", 320)),
                    cfg.get_double("oracle", "dt_T_ps", 1.2) * 1e-12};
    TimeGrid grid_t{static_cast<std::size_t>(cfg.get_int("oracle", "n_t", 768)),
                    cfg.get_double("oracle", "dt_t_ps", 1.6) * 1e-12};

    const double fc_T = thz_from_angular(pair.omega_11p().omega);
    const double fc_t = thz_from_angular(pair.omega_10p.omega);
    const auto axis_T =
        axis_from_config(cfg, "oracle", "omega_T", fc_T - 0.030, fc_T + 0.030, 81);
    const auto axis_t =
        axis_from_config(cfg, "oracle", "omega_t", fc_t - 0.020, fc_t + 0.020, 81);

    const Spectrum2D oracle = perturbative_dq2d(pair, tau_s, grid_T, grid_t, axis_T, axis_t);
    Spectrum2D closed = grid_response({{pair, 1.0}}, tau_s, axis_T, axis_t, g.threads);
    closed.metadata["source"] = "closed-form";

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < closed.values.size(); ++i) {
        num += std::norm(oracle.values[i] - closed.values[i]);
        den += std::norm(closed.values[i]);
    }
    const double rms = std::sqrt(num / den);

    write_out(g, "oracle2d.dat", to_text(oracle));
    write_out(g, "oracle_closed.dat", to_text(closed));
    std::ostringstream rep;
    rep << "# dqsim oracle_compare\n";
    rep << "rms_relative_mismatch: " << format_double(rms) << "\n";
    rep << "oracle_max_abs: " << format_double(oracle.max_abs()) << "\n";
    rep << "closed_max_abs: " << format_double(closed.max_abs()) << "\n";
    write_out(g, "oracle_compare.txt", rep.str());

    ConfigWriter w;
    emit_pair_section(w, pair);
    w.blank();
    w.section("oracle");
    w.kv("tau_ps", file_value(tau_s, 1e-12));
    w.kv("n_T", static_cast<long long>(grid_T.n));
    w.kv("dt_T_ps", file_value(grid_T.dt_s, 1e-12));
    w.kv("n_t", static_cast<long long>(grid_t.n));
    w.kv("dt_t_ps", file_value(grid_t.dt_s, 1e-12));
    w.kv("omega_T_min_thz", axis_T.front());
    w.kv("omega_T_max_thz", axis_T.back());
    w.kv("omega_T_points", static_cast<long long>(axis_T.size()));
    w.kv("omega_t_min_thz", axis_t.front());
    w.kv("omega_t_max_thz", axis_t.back());
    w.kv("omega_t_points", static_cast<long long>(axis_t.size()));
    write_out(g, "resolved.cfg", w.text());

    std::cout << "oracle: RMS mismatch vs closed form = " << rms << "\n";
    return kExitOk;
}

int cmd_selfcheck() {
    const auto results = run_selfchecks();
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << ". " << r.name << " — "
                  << r.detail << "\n";
        all = all && r.pass;
    }
    return all ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dqsim: coupled-emitter linear/double-quantum spectroscopy toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "run configuration file");
    app.add_option("--out", g.out_dir, "output directory (default .)");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override the ensemble seed");
    app.add_option("--threads", g.threads, "worker threads for grids/realizations");
    app.add_flag("--strict", g.strict, "reject unknown config keys");

    auto* sc_ensemble = app.add_subcommand("ensemble", "sample an emitter configuration");
    auto* sc_linear = app.add_subcommand("linear", "simulate the linear absorption spectrum");
    auto* sc_dq2d = app.add_subcommand("dq2d", "evaluate the double-quantum 2D response");
    auto* sc_sweep = app.add_subcommand("pump-sweep", "pump-field sweep of peaks and slices");
    auto* sc_fit = app.add_subcommand("fit", "fit the pump model to a slice dataset");
    auto* sc_oracle = app.add_subcommand("oracle", "pathway-propagation cross-check");
    auto* sc_check = app.add_subcommand("selfcheck", "run the built-in verification suites");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) g.seed_override = seed_value;

    try {
        if (sc_ensemble->parsed()) return cmd_ensemble(g);
        if (sc_linear->parsed()) return cmd_linear(g);
        if (sc_dq2d->parsed()) return cmd_dq2d(g);
        if (sc_sweep->parsed()) return cmd_pump_sweep(g);
        if (sc_fit->parsed()) return cmd_fit(g);
        if (sc_oracle->parsed()) return cmd_oracle(g);
        if (sc_check->parsed()) return cmd_selfcheck();
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (...) {
        std::cerr << "error: unknown failure\n";
        return kExitNumerical;
    }
    return kExitOk;
}
