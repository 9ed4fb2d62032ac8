#include "rabi/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rabi {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

}  // namespace

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
        cfg.kv_[key] = value;
    }
    if (cfg.has("figure")) {
        const std::string name = cfg.require("figure");
        const auto& all = presets();
        const auto it = std::find_if(all.begin(), all.end(),
                                     [&](const PresetInfo& p) { return p.name == name; });
        if (it == all.end()) throw ValidationError("unknown preset figure: " + name);
        Config preset = Config::from_string(it->config_text);
        for (const auto& [k, v] : preset.kv_) cfg.kv_.emplace(k, v);  // explicit keys win
    }
    return cfg;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

std::string Config::require(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ValidationError("missing config key: " + key);
    return it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        if (it->second == "inf") return std::numeric_limits<double>::infinity();
        size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config key " + key + ": not a number: " + it->second);
    }
}

int Config::get_int(const std::string& key, int fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        size_t pos = 0;
        const int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config key " + key + ": not an integer: " + it->second);
    }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ValidationError("config key " + key + ": expected true/false");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    std::vector<std::string> out;
    const auto it = kv_.find(key);
    if (it == kv_.end()) return out;
    std::istringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

// ---------------------------------------------------------------- presets

const std::vector<PresetInfo>& presets() {
    static const std::vector<PresetInfo> kPresets = {
        {"fig1",
         "semiclassical Picard series (orders 3,11,21,33) vs RK4, Omega/omega=0.1, Omega*t up to 4*pi",
         "mode = compare\n"
         "model = semiclassical\n"
         "model.rabi_ratio = 0.1\n"
         "run.horizon = 125.66370614359172\n"
         "compare.observable = re_cg\n"
         "methods = rk4,picard3,picard11,picard21,picard33\n"
         "rk4.type = rk4\n"
         "picard3.type = picard\npicard3.order = 3\n"
         "picard11.type = picard\npicard11.order = 11\n"
         "picard21.type = picard\npicard21.order = 21\n"
         "picard33.type = picard\npicard33.order = 33\n"},
        {"fig5",
         "mean-photon surface <n>(lambda, t/tau_s): RK4 vs 4th-order Picard, lambda/omega in [0.02,0.5]",
         "mode = sweep\n"
         "model = quantum\n"
         "sweep.kind = photon_surface\n"
         "sweep.lambda_min = 0.02\n"
         "sweep.lambda_max = 0.5\n"
         "sweep.lambda_count = 25\n"
         "sweep.t_max_tau_s = 2.0\n"
         "sweep.n_t = 81\n"},
        {"fig6",
         "DCE first-peak time tau_p vs lambda: extraction vs first-order law tau_p/tau_s = lambda/omega",
         "mode = sweep\n"
         "model = quantum\n"
         "sweep.kind = peak_times\n"
         "sweep.lambdas = 0.05,0.1,0.15,0.2,0.25,0.3\n"
         "method.grid_density = 0.005\n"},
        {"fig7",
         "single-interval 4th-order Magnus and 10 first-order steps vs RK4, Omega/omega=0.1, Omega*t<=10",
         "mode = compare\n"
         "model = semiclassical\n"
         "model.rabi_ratio = 0.1\n"
         "run.horizon = 100.0\n"
         "compare.observable = re_cg\n"
         "methods = rk4,magnus_single4,magnus_steps\n"
         "rk4.type = rk4\n"
         "magnus_single4.type = magnus_single\nmagnus_single4.order = 4\n"
         "magnus_steps.type = magnus_concat\n"
         "magnus_steps.scheme = order1_exact\n"
         "magnus_steps.n_steps = 10\n"},
        {"fig8",
         "Fourier doublets at 2n*omega +- Omega: order-4 Magnus, N=3000, Omega/omega=0.1, Omega*t=60*pi",
         "mode = run\n"
         "model = semiclassical\n"
         "model.rabi_ratio = 0.1\n"
         "run.horizon = 1884.9555921538758\n"
         "run.observables = re_cg,re_ce\n"
         "method = magnus_concat\n"
         "method.scheme = order4_gauss2\n"
         "method.n_steps = 3000\n"
         "spectrum.enabled = true\n"
         "spectrum.observable = re_cg\n"
         "peaks.enabled = true\n"
         "peaks.rel_threshold = 1e-5\n"},
        {"fig10",
         "quantum Rabi lambda/omega=0.12: single-interval order 4 and 100 concatenated order-4 steps vs RK4",
         "mode = compare\n"
         "model = quantum\n"
         "model.coupling_ratio = 0.12\n"
         "model.n_max = 24\n"
         "run.horizon = 30.0\n"
         "compare.observable = re_cg0\n"
         "methods = rk4,magnus_single4,magnus_concat100\n"
         "rk4.type = rk4\nrk4.grid_density = 0.005\n"
         "magnus_single4.type = magnus_single\nmagnus_single4.order = 4\n"
         "magnus_single4.grid_density = 0.02\n"
         "magnus_concat100.type = magnus_concat\n"
         "magnus_concat100.scheme = order4_gauss2\n"
         "magnus_concat100.n_steps = 100\n"},
        {"fig11",
         "Mathieu doublets at n*omega +- sqrt(a): a=0.5, q=0.1, omega=40, integrated to t=200",
         "mode = run\n"
         "model = mathieu\n"
         "model.mathieu_a = 0.5\n"
         "model.mathieu_q = 0.1\n"
         "model.omega = 40\n"
         "run.horizon = 200.0\n"
         "run.observables = mathieu_y\n"
         "method = rk4\n"
         "method.n_points = 32769\n"
         "spectrum.enabled = true\n"
         "spectrum.observable = mathieu_y\n"
         "spectrum.window = hann\n"
         "peaks.enabled = true\n"
         "peaks.rel_threshold = 1e-10\n"},
    };
    return kPresets;
}

std::string list_presets() {
    std::ostringstream os;
    for (const auto& p : presets()) {
        os << p.name << ": " << p.description << "\n";
        Config c = Config::from_string(p.config_text);
        for (const auto& [k, v] : c.entries()) os << "    " << k << " = " << v << "\n";
    }
    return os.str();
}

// ------------------------------------------------------- model assembly

namespace {

struct ModelBundle {
    ModelKind kind;
    Generator generator;
    Vector psi0;
    double omega_scale = 1.0;      // fast frequency for grid densities
    double fundamental = 0.0;      // default spectral reference
    double doublet_spacing = 0.0;
};

ModelBundle build_model(const Config& cfg) {
    const std::string model = cfg.require("model");
    ModelBundle mb{ModelKind::Semiclassical, {}, {}, 1.0, 0.0, 0.0};
    ModelFlags flags{cfg.get_bool("model.rwa", false)};
    const double omega = cfg.get_double("model.omega", 1.0);
    if (!(omega > 0.0)) throw ValidationError("model.omega must be positive");

    if (model == "semiclassical") {
        SemiclassicalParams p;
        p.field_freq = omega;
        p.rabi_freq = cfg.get_double("model.rabi_ratio", 0.1) * omega;
        p.qubit_freq = cfg.get_double("model.qubit_ratio", 1.0) * omega;
        p.phase = cfg.get_double("model.phase", 0.0);
        p.window.tau = cfg.get_double("model.tau", std::numeric_limits<double>::infinity());
        if (!(p.rabi_freq > 0.0)) throw ValidationError("model.rabi_ratio must be positive");
        mb.kind = ModelKind::Semiclassical;
        mb.generator = make_semiclassical(p, flags);
        mb.psi0 = Vector::Zero(2);
        mb.psi0[0] = 1.0;
        mb.omega_scale = omega;
        mb.fundamental = p.rabi_freq;
        mb.doublet_spacing = 2.0 * omega;
    } else if (model == "quantum") {
        QuantumParams p;
        p.field_freq = omega;
        p.coupling = cfg.get_double("model.coupling_ratio", 0.1) * omega;
        p.qubit_freq = cfg.get_double("model.qubit_ratio", 1.0) * omega;
        p.n_max = cfg.get_int("model.n_max", 32);
        p.window.tau = cfg.get_double("model.tau", std::numeric_limits<double>::infinity());
        if (!(p.coupling > 0.0)) throw ValidationError("model.coupling_ratio must be positive");
        if (p.n_max < 1) throw ValidationError("model.n_max must be >= 1");
        mb.kind = ModelKind::Quantum;
        mb.generator = make_quantum(p, flags);
        mb.psi0 = Vector::Zero(mb.generator.dim());
        mb.psi0[0] = 1.0;  // |g,0>
        mb.omega_scale = omega;
        mb.fundamental = 2.0 * omega;
        mb.doublet_spacing = 2.0 * omega;
    } else if (model == "mathieu") {
        MathieuParams p;
        p.a = cfg.get_double("model.mathieu_a", 0.5);
        p.q = cfg.get_double("model.mathieu_q", 0.1);
        p.omega = omega;
        mb.kind = ModelKind::Mathieu;
        mb.generator = make_mathieu(p);
        mb.psi0 = Vector::Zero(2);
        mb.psi0[0] = cfg.get_double("model.y0", 1.0);
        mb.psi0[1] = cfg.get_double("model.p0", 0.0);
        mb.omega_scale = omega;
        mb.fundamental = std::sqrt(std::max(p.a, 0.0));
        mb.doublet_spacing = omega;
    } else {
        throw ValidationError("unknown model: " + model + " (semiclassical|quantum|mathieu)");
    }
    return mb;
}

Trajectory run_method(const Config& cfg, const ModelBundle& mb, const std::string& prefix,
                      const std::string& type, double horizon) {
    const double density = cfg.get_double(prefix + ".grid_density", 0.01);
    if (!(density > 0.0)) throw ValidationError(prefix + ".grid_density must be positive");
    const double spacing = density / mb.omega_scale;

    if (type == "rk4") {
        int n_points = cfg.get_int(prefix + ".n_points", 0);
        if (n_points == 0) n_points = TimeGrid::with_spacing(0.0, horizon, spacing).n_points;
        if (n_points < 2) throw ValidationError(prefix + ".n_points must be >= 2");
        Trajectory traj = rk4_integrate(mb.generator, mb.psi0, {n_points, horizon});
        if (mb.generator.schrodinger && traj.max_norm_drift > 1e-8)
            throw NumericsError("rk4 norm drift " + fmt(traj.max_norm_drift) + " exceeds 1e-8");
        return traj;
    }
    if (type == "picard") {
        const int order = cfg.get_int(prefix + ".order", 4);
        if (order < 0) throw ValidationError(prefix + ".order must be >= 0");
        const TimeGrid grid = TimeGrid::with_spacing(0.0, horizon, spacing);
        PicardExpansion exp =
            picard_numeric(mb.generator, mb.psi0, order, grid, mb.omega_scale);
        Trajectory traj;
        traj.grid = grid;
        traj.basis = mb.generator.basis;
        traj.warnings = exp.warnings;
        traj.states.reserve(grid.n_points);
        for (int j = 0; j < grid.n_points; ++j) traj.states.push_back(exp.partial_sum(j, order));
        return traj;  // truncated series: not normalized, no drift contract
    }
    if (type == "magnus_single") {
        if (!mb.generator.schrodinger)
            throw ValidationError("magnus methods need a Schrodinger model (not mathieu)");
        const int order = cfg.get_int(prefix + ".order", 4);
        if (order < 1 || order > 4) throw ValidationError(prefix + ".order must be 1..4");
        const TimeGrid grid = TimeGrid::with_spacing(0.0, horizon, spacing);
        return magnus_single_interval_trajectory(mb.generator, order, grid, mb.psi0);
    }
    if (type == "magnus_concat") {
        if (!mb.generator.schrodinger)
            throw ValidationError("magnus methods need a Schrodinger model (not mathieu)");
        StepperConfig sc;
        sc.scheme = scheme_from_name(cfg.get(prefix + ".scheme", "order4_gauss2"));
        sc.n_steps = cfg.get_int(prefix + ".n_steps", 0);
        if (sc.n_steps < 1) throw ValidationError(prefix + ".n_steps must be >= 1");
        sc.horizon = horizon;
        sc.quad_spacing = spacing;
        Trajectory traj = magnus_propagate(mb.generator, sc, mb.psi0);
        if (traj.max_norm_drift > 1e-10)
            throw NumericsError("magnus norm drift " + fmt(traj.max_norm_drift) +
                                " exceeds 1e-10");
        return traj;
    }
    throw ValidationError("unknown method type: " + type +
                          " (rk4|picard|magnus_single|magnus_concat)");
}

void enforce_truncation(const Trajectory& traj) {
    if (traj.max_truncation_tail > kTruncationTailLimit)
        throw NumericsError("Fock truncation tail " + fmt(traj.max_truncation_tail) +
                            " exceeds 1e-8; raise model.n_max");
}

std::vector<Observable> default_observables(ModelKind kind) {
    switch (kind) {
        case ModelKind::Quantum:
            return {Observable::ReCg0, Observable::MeanPhotons, Observable::TotalExcitations};
        case ModelKind::Mathieu:
            return {Observable::MathieuY};
        default:
            return {Observable::ReCg, Observable::ReCe};
    }
}

std::filesystem::path prepare_output_dir(const Config& cfg) {
    const std::filesystem::path dir = cfg.get("output.dir", ".");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());
    return dir;
}

std::ofstream open_csv(const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out) throw IoError("cannot write " + p.string());
    return out;
}

void echo_config(std::ofstream& out, const Config& cfg) {
    for (const auto& [k, v] : cfg.entries()) out << "# " << k << " = " << v << "\n";
}

}  // namespace

// ------------------------------------------------------------------ run

RunRecord run_experiment(const Config& cfg) {
    const std::string mode = cfg.get("mode", "run");
    if (mode != "run") throw ValidationError("run_experiment: config mode is '" + mode + "'");
    ModelBundle mb = build_model(cfg);

    const double horizon = cfg.get_double("run.horizon", 0.0);
    if (!(horizon > 0.0)) throw ValidationError("run.horizon must be positive");

    std::vector<Observable> observables;
    if (cfg.has("run.observables")) {
        for (const std::string& name : cfg.get_list("run.observables")) {
            try {
                observables.push_back(observable_from_name(name));
            } catch (const std::invalid_argument& e) {
                throw ValidationError(e.what());
            }
        }
    } else {
        observables = default_observables(mb.kind);
    }
    if (observables.empty()) throw ValidationError("run.observables must not be empty");

    RunRecord rec;
    rec.echo = cfg;
    rec.model = mb.kind;
    rec.trajectory = run_method(cfg, mb, "method", cfg.require("method"), horizon);
    enforce_truncation(rec.trajectory);
    rec.warnings = rec.trajectory.warnings;

    for (Observable o : observables) {
        try {
            rec.observables.push_back(extract_observable(rec.trajectory, o));
        } catch (const std::invalid_argument& e) {
            throw ValidationError(e.what());
        }
    }

    const double fundamental = cfg.get_double("peaks.fundamental", mb.fundamental);
    if (cfg.get_bool("spectrum.enabled", false)) {
        const std::string target = cfg.get("spectrum.observable", observable_name(observables[0]));
        const Observable tgt = observable_from_name(target);
        const auto it = std::find_if(rec.observables.begin(), rec.observables.end(),
                                     [&](const ObservableSeries& s) { return s.tag == tgt; });
        if (it == rec.observables.end())
            throw ValidationError("spectrum.observable must be among run.observables");
        FftOptions fopts;
        const std::string wname = cfg.get("spectrum.window", "rectangular");
        if (wname == "hann") fopts.window = SpectralWindow::Hann;
        else if (wname != "rectangular") throw ValidationError("spectrum.window: rectangular|hann");
        fopts.pad_pow2 = cfg.get_bool("spectrum.pad_pow2", false);
        rec.spectrum = fft_spectrum(*it, fopts);

        if (cfg.get_bool("peaks.enabled", true)) {
            PeakThreshold policy;
            policy.rel_threshold = cfg.get_double("peaks.rel_threshold", 1e-6);
            policy.window_bins = cfg.get_int("peaks.window_bins", 3);
            const double spacing = cfg.get_double("peaks.doublet_spacing", mb.doublet_spacing);
            rec.peaks = detect_peaks(*rec.spectrum, policy, fundamental, spacing);
        }
    }

    // ---- files
    const auto dir = prepare_output_dir(cfg);
    {
        auto out = open_csv(dir / "trajectory.csv");
        echo_config(out, cfg);
        out << "t";
        for (const auto& s : rec.observables) out << "," << observable_name(s.tag);
        out << "\n";
        for (int j = 0; j < rec.trajectory.grid.n_points; ++j) {
            out << fmt(rec.trajectory.grid.at(j));
            for (const auto& s : rec.observables) out << "," << fmt(s.values[j]);
            out << "\n";
        }
        rec.files_written.push_back((dir / "trajectory.csv").string());
    }
    if (rec.spectrum) {
        auto out = open_csv(dir / "spectrum.csv");
        echo_config(out, cfg);
        out << "w,w_over_Omega,abs_F,re_F,im_F\n";
        const auto& sp = *rec.spectrum;
        for (size_t k = 0; k < sp.freqs.size(); ++k)
            out << fmt(sp.freqs[k]) << "," << fmt(sp.freqs[k] / fundamental) << ","
                << fmt(sp.magnitude[k]) << "," << fmt(sp.amplitudes[k].real()) << ","
                << fmt(sp.amplitudes[k].imag()) << "\n";
        rec.files_written.push_back((dir / "spectrum.csv").string());
    }
    if (rec.peaks) {
        auto out = open_csv(dir / "peaks.csv");
        echo_config(out, cfg);
        out << "w,magnitude,doublet_index,fit_a,fit_b\n";
        const auto& pk = *rec.peaks;
        for (const auto& p : pk.peaks)
            out << fmt(p.freq) << "," << fmt(p.magnitude) << "," << p.doublet_index << ","
                << (pk.fit.valid ? fmt(pk.fit.a) : "nan") << ","
                << (pk.fit.valid ? fmt(pk.fit.b) : "nan") << "\n";
        rec.files_written.push_back((dir / "peaks.csv").string());
    }
    return rec;
}

RunRecord run_experiment_file(const std::string& config_path) {
    return run_experiment(Config::from_file(config_path));
}

// -------------------------------------------------------------- compare

CompareResult compare_methods(const Config& cfg) {
    const std::string mode = cfg.get("mode", "compare");
    if (mode != "compare") throw ValidationError("compare_methods: config mode is '" + mode + "'");
    ModelBundle mb = build_model(cfg);
    const double horizon = cfg.get_double("run.horizon", 0.0);
    if (!(horizon > 0.0)) throw ValidationError("run.horizon must be positive");

    const std::vector<std::string> names = cfg.get_list("methods");
    if (names.size() < 2) throw ValidationError("compare needs a methods list with >= 2 entries");
    for (const std::string& name : names)
        if (cfg.has(name + ".horizon") &&
            cfg.get_double(name + ".horizon", horizon) != horizon)
            throw ValidationError("compare: method " + name + " has a mismatched horizon");

    CompareResult res;
    res.echo = cfg;
    res.method_names = names;
    const std::string obs_name =
        cfg.get("compare.observable", observable_name(default_observables(mb.kind)[0]));
    res.observable = observable_from_name(obs_name);

    std::vector<Trajectory> trajs;
    for (const std::string& name : names) {
        const std::string type = cfg.get(name + ".type", name);
        trajs.push_back(run_method(cfg, mb, name, type, horizon));
        enforce_truncation(trajs.back());
        for (const auto& w : trajs.back().warnings) res.warnings.push_back(name + ": " + w);
    }

    // common output grid = the coarsest one; linear interpolation elsewhere
    int coarsest = 0;
    for (int i = 1; i < static_cast<int>(trajs.size()); ++i)
        if (trajs[i].grid.n_points < trajs[coarsest].grid.n_points) coarsest = i;
    res.grid = trajs[coarsest].grid;

    for (const auto& traj : trajs) {
        const ObservableSeries s = extract_observable(traj, res.observable);
        std::vector<double> vals(res.grid.n_points);
        for (int j = 0; j < res.grid.n_points; ++j) {
            const double t = res.grid.at(j);
            const double x = t / traj.grid.spacing();
            const int i0 = std::min(traj.grid.n_points - 2, static_cast<int>(x));
            const double frac = x - i0;
            vals[j] = (1.0 - frac) * s.values[i0] + frac * s.values[i0 + 1];
        }
        res.series.push_back(std::move(vals));
    }

    const int m = static_cast<int>(names.size());
    res.sup_diff.assign(m, std::vector<double>(m, 0.0));
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            double sup = 0.0;
            for (int j = 0; j < res.grid.n_points; ++j)
                sup = std::max(sup, std::abs(res.series[a][j] - res.series[b][j]));
            res.sup_diff[a][b] = res.sup_diff[b][a] = sup;
        }

    const auto dir = prepare_output_dir(cfg);
    {
        auto out = open_csv(dir / "compare.csv");
        echo_config(out, cfg);
        out << "t";
        for (const auto& n : names) out << "," << n;
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) out << ",absdiff_" << names[a] << "_" << names[b];
        out << "\n";
        for (int j = 0; j < res.grid.n_points; ++j) {
            out << fmt(res.grid.at(j));
            for (int a = 0; a < m; ++a) out << "," << fmt(res.series[a][j]);
            for (int a = 0; a < m; ++a)
                for (int b = a + 1; b < m; ++b)
                    out << "," << fmt(std::abs(res.series[a][j] - res.series[b][j]));
            out << "\n";
        }
        res.files_written.push_back((dir / "compare.csv").string());
    }
    {
        auto out = open_csv(dir / "compare_summary.csv");
        echo_config(out, cfg);
        out << "method_a,method_b,observable,sup_abs_diff\n";
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b)
                out << names[a] << "," << names[b] << "," << obs_name << ","
                    << fmt(res.sup_diff[a][b]) << "\n";
        res.files_written.push_back((dir / "compare_summary.csv").string());
    }
    return res;
}

// ---------------------------------------------------------------- sweep

SweepResult run_sweep(const Config& cfg, std::vector<std::string>* files_written) {
    const std::string mode = cfg.get("mode", "sweep");
    if (mode != "sweep") throw ValidationError("run_sweep: config mode is '" + mode + "'");
    if (cfg.require("model") != "quantum")
        throw ValidationError("sweep presets are quantum-model experiments");

    QuantumParams base;
    base.field_freq = cfg.get_double("model.omega", 1.0);
    base.qubit_freq = cfg.get_double("model.qubit_ratio", 1.0) * base.field_freq;
    base.n_max = cfg.get_int("model.n_max", 32);
    const double density = cfg.get_double("method.grid_density", 0.01);

    const std::string kind = cfg.get("sweep.kind", "photon_surface");
    const auto dir = prepare_output_dir(cfg);

    if (kind == "peak_times") {
        std::vector<double> lambdas;
        for (const std::string& s : cfg.get_list("sweep.lambdas"))
            lambdas.push_back(std::stod(s) * base.field_freq);
        if (lambdas.empty()) throw ValidationError("sweep.lambdas must not be empty");
        auto out = open_csv(dir / "peak_times.csv");
        echo_config(out, cfg);
        out << "lambda,tau_p,tau_p_over_tau_s,predicted_ratio,rel_deviation,peak_value,predicted_peak\n";
        SweepResult res;
        for (double lam : lambdas) {
            QuantumParams p = base;
            p.coupling = lam;
            const Generator g = make_quantum(p);
            Vector psi0 = Vector::Zero(g.dim());
            psi0[0] = 1.0;
            const double horizon = 3.0 * M_PI / base.field_freq;
            const int n = TimeGrid::with_spacing(0.0, horizon, density / base.field_freq).n_points;
            const Trajectory traj = rk4_integrate(g, psi0, {n, horizon});
            const DcePeak peak =
                dce_peak_extraction(extract_observable(traj, Observable::MeanPhotons),
                                    base.field_freq);
            const DcePrediction pred = dce_prediction(lam, base.field_freq);
            const double ratio = peak.peak_time / pred.swap_time;
            const double predicted = lam / base.field_freq;
            out << fmt(lam) << "," << fmt(peak.peak_time) << "," << fmt(ratio) << ","
                << fmt(predicted) << "," << fmt(std::abs(ratio / predicted - 1.0)) << ","
                << fmt(peak.peak_value) << "," << fmt(pred.peak_value) << "\n";
            res.couplings.push_back(lam);
        }
        if (files_written) files_written->push_back((dir / "peak_times.csv").string());
        return res;
    }

    if (kind != "photon_surface")
        throw ValidationError("sweep.kind: photon_surface|peak_times");

    const double lmin = cfg.get_double("sweep.lambda_min", 0.02) * base.field_freq;
    const double lmax = cfg.get_double("sweep.lambda_max", 0.5) * base.field_freq;
    const int lcount = cfg.get_int("sweep.lambda_count", 25);
    if (!(lmin > 0.0) || !(lmax > lmin) || lcount < 2)
        throw ValidationError("sweep.lambda_* range invalid");
    std::vector<double> lambdas(lcount);
    for (int i = 0; i < lcount; ++i)
        lambdas[i] = lmin + (lmax - lmin) * i / (lcount - 1);

    SweepResult res = sweep_photon_surface(base, lambdas,
                                           cfg.get_double("sweep.t_max_tau_s", 2.0),
                                           cfg.get_int("sweep.n_t", 81), density);
    auto out = open_csv(dir / "sweep.csv");
    echo_config(out, cfg);
    out << "lambda,t_over_tau_s,n_exact,n_picard4,abs_diff\n";
    for (size_t li = 0; li < res.couplings.size(); ++li)
        for (size_t ti = 0; ti < res.t_over_tau_s.size(); ++ti)
            out << fmt(res.couplings[li]) << "," << fmt(res.t_over_tau_s[ti]) << ","
                << fmt(res.exact[li][ti]) << "," << fmt(res.picard4[li][ti]) << ","
                << fmt(std::abs(res.exact[li][ti] - res.picard4[li][ti])) << "\n";
    if (files_written) files_written->push_back((dir / "sweep.csv").string());
    return res;
}

std::string gnuplot_script(const RunRecord& rec) {
    std::ostringstream os;
    os << "set datafile separator ','\n";
    os << "set key autotitle columnhead\n";
    os << "set xlabel 't'\n";
    os << "plot";
    for (size_t i = 0; i < rec.observables.size(); ++i)
        os << (i ? "," : "") << " 'trajectory.csv' using 1:" << i + 2 << " with lines";
    os << "\n";
    if (rec.spectrum) {
        os << "set xlabel 'w/Omega'\nset logscale y\n";
        os << "plot 'spectrum.csv' using 2:3 with lines\n";
    }
    return os.str();
}

}  // namespace rabi
