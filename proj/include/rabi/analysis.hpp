#pragma once

#include <string>
#include <vector>

#include "rabi/models.hpp"
#include "rabi/rk4.hpp"

namespace rabi {

enum class Observable { ReCg, ReCe, MeanPhotons, TotalExcitations, ReCg0, MathieuY };

std::string observable_name(Observable o);
Observable observable_from_name(const std::string& name);

struct ObservableSeries {
    TimeGrid grid;
    std::vector<double> values;
    Observable tag = Observable::ReCg;
};

ObservableSeries extract_observable(const Trajectory& traj, Observable o);

/// <n> = sum_{l,n} n |C_{l,n}|^2. Quantum basis only.
double mean_photons(const Vector& psi, const Basis& basis);

/// <N_T> = sum |C_{l,n}|^2 (n + [l = e]). Quantum basis only.
double total_excitations(const Vector& psi, const Basis& basis);

enum class SpectralWindow { Rectangular, Hann };

struct FftOptions {
    SpectralWindow window = SpectralWindow::Rectangular;
    bool pad_pow2 = false;  // padding a non-periodic segment raises the
                            // broadband floor by ~2 decades; off by default
};

/// One-sided spectrum of a real series. Magnitudes are amplitude-normalized
/// (a unit cosine at a bin center gives magnitude ~1, any window).
struct SpectrumResult {
    std::vector<double> freqs;       // rad/time, ascending from 0
    std::vector<Complex> amplitudes; // raw DFT coefficients
    std::vector<double> magnitude;
    double bin_width = 0.0;          // spacing of freqs
    int n_signal = 0;                // samples before padding
};

SpectrumResult fft_spectrum(const ObservableSeries& series, const FftOptions& opts = {});

struct Peak {
    double freq = 0.0;
    double magnitude = 0.0;
    int bin = 0;
    int doublet_index = -1;  // 0 = fundamental, n >= 1 = n-th doublet, -1 untagged
};

struct PeakThreshold {
    double rel_threshold = 1e-6;  // vs global maximum
    int window_bins = 3;          // local-max window half-width
};

/// Log-linear decay law log10|F| = a - b (w / fundamental). The line is
/// anchored at the fundamental peak and the slope fitted over the doublet
/// peaks; this is the construction behind the reported decay constants
/// (their intercept equals log10 of the fundamental magnitude plus b).
struct DecayFit {
    bool valid = false;
    double a = 0.0, b = 0.0;
    int n_doublet_points = 0;
};

struct PeakSet {
    std::vector<Peak> peaks;
    DecayFit fit;
    std::vector<double> doublet_ratios;  // max magnitude of doublet n+1 / doublet n
};

/// Local maxima above rel_threshold * global max (DC excluded), tagged as
/// doublet n when within 2.5 * fundamental of n * doublet_spacing.
PeakSet detect_peaks(const SpectrumResult& spec, const PeakThreshold& policy,
                     double fundamental, double doublet_spacing);

/// [Omega / (2 omega)]^2 -- the predicted magnitude step between doublets.
double doublet_ratio_prediction(double rabi_freq, double field_freq);

struct DcePeak {
    bool found = false;
    double peak_time = 0.0;
    double peak_value = 0.0;
    double dominant_freq = 0.0;  // power centroid of the 2*omega cluster
};

/// First local maximum of a mean-photon series (parabolically refined) and
/// the dominant oscillation frequency, from the power centroid over
/// (omega, 3*omega]. The plain spectral argmax is unstable: the <n>
/// spectrum is a near-symmetric pair around 2*omega.
DcePeak dce_peak_extraction(const ObservableSeries& photons, double omega);

struct SweepResult {
    std::vector<double> couplings;       // lambda values
    std::vector<double> t_over_tau_s;    // shared scaled-time axis
    std::vector<std::vector<double>> exact;    // [lambda][time]
    std::vector<std::vector<double>> picard4;
    std::vector<std::string> warnings;
};

/// <n>(lambda, t) surface: RK4 exact vs fourth-order Picard partial sum,
/// time measured in units of tau_s = pi / (2 lambda).
SweepResult sweep_photon_surface(const QuantumParams& base, const std::vector<double>& couplings,
                                 double t_max_tau_s, int n_t, double grid_density = 0.01);

}  // namespace rabi
