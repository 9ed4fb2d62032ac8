#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rabi/analysis.hpp"
#include "rabi/magnus.hpp"
#include "rabi/picard.hpp"

namespace rabi {

/// Bad configuration or invalid model/method combination (CLI exit code 2).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Numerical-contract breach: truncation or unitarity (CLI exit code 3).
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Unreadable config or unwritable output (CLI exit code 4).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key = value configuration with dotted namespaces.
/// '#' starts a comment; a `figure = figN` key pulls in preset defaults
/// which explicit keys then override.
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    void set_default(const std::string& key, const std::string& value) {
        kv_.emplace(key, value);
    }
    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

struct PresetInfo {
    std::string name;
    std::string description;
    std::string config_text;
};
const std::vector<PresetInfo>& presets();
std::string list_presets();  // stable, printable

/// A fully assembled single-method run: model, integrator output, and the
/// optional spectral analysis results.
struct RunRecord {
    Config echo;
    ModelKind model = ModelKind::Semiclassical;
    Trajectory trajectory;
    std::vector<ObservableSeries> observables;
    std::optional<SpectrumResult> spectrum;
    std::optional<PeakSet> peaks;
    std::vector<std::string> warnings;
    std::vector<std::string> files_written;
};

/// Run one experiment and write trajectory.csv (+ spectrum.csv, peaks.csv
/// when enabled) under output.dir.
RunRecord run_experiment(const Config& cfg);
RunRecord run_experiment_file(const std::string& config_path);

struct CompareResult {
    Config echo;
    std::vector<std::string> method_names;
    TimeGrid grid;                       // common output grid (coarsest)
    Observable observable;
    std::vector<std::vector<double>> series;  // [method][time]
    std::vector<std::vector<double>> sup_diff;  // pairwise sup-norm matrix
    std::vector<std::string> files_written;
    std::vector<std::string> warnings;
};

/// Run >= 2 methods on one model/horizon and tabulate differences on the
/// common (coarsest) output grid; writes compare.csv + compare_summary.csv.
CompareResult compare_methods(const Config& cfg);

/// Photon-surface sweep (writes sweep.csv).
SweepResult run_sweep(const Config& cfg, std::vector<std::string>* files_written = nullptr);

/// Companion gnuplot script for a run's CSV outputs.
std::string gnuplot_script(const RunRecord& rec);

}  // namespace rabi
