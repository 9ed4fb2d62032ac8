#include "rabi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include <fftw3.h>

#include "rabi/picard.hpp"

namespace rabi {

std::string observable_name(Observable o) {
    switch (o) {
        case Observable::ReCg: return "re_cg";
        case Observable::ReCe: return "re_ce";
        case Observable::MeanPhotons: return "mean_photons";
        case Observable::TotalExcitations: return "total_excitations";
        case Observable::ReCg0: return "re_cg0";
        case Observable::MathieuY: return "mathieu_y";
    }
    return "?";
}

Observable observable_from_name(const std::string& name) {
    for (Observable o : {Observable::ReCg, Observable::ReCe, Observable::MeanPhotons,
                         Observable::TotalExcitations, Observable::ReCg0, Observable::MathieuY})
        if (observable_name(o) == name) return o;
    throw std::invalid_argument("unknown observable: " + name);
}

namespace {

void require_quantum(const Basis& basis, const char* who) {
    if (basis.kind != ModelKind::Quantum)
        throw std::invalid_argument(std::string(who) + ": quantum-basis state required");
}

}  // namespace

double mean_photons(const Vector& psi, const Basis& basis) {
    require_quantum(basis, "mean_photons");
    if (psi.size() != basis.dim()) throw std::invalid_argument("mean_photons: dimension mismatch");
    double s = 0.0;
    for (int n = 0; n <= basis.n_max; ++n)
        s += n * (std::norm(psi[2 * n]) + std::norm(psi[2 * n + 1]));
    return s;
}

double total_excitations(const Vector& psi, const Basis& basis) {
    require_quantum(basis, "total_excitations");
    if (psi.size() != basis.dim())
        throw std::invalid_argument("total_excitations: dimension mismatch");
    double s = 0.0;
    for (int n = 0; n <= basis.n_max; ++n)
        s += n * std::norm(psi[2 * n]) + (n + 1.0) * std::norm(psi[2 * n + 1]);
    return s;
}

ObservableSeries extract_observable(const Trajectory& traj, Observable o) {
    ObservableSeries s;
    s.grid = traj.grid;
    s.tag = o;
    s.values.reserve(traj.states.size());
    for (const Vector& psi : traj.states) {
        switch (o) {
            case Observable::ReCg:
                if (traj.basis.kind != ModelKind::Semiclassical)
                    throw std::invalid_argument("re_cg is a semiclassical observable");
                s.values.push_back(psi[0].real());
                break;
            case Observable::ReCe:
                if (traj.basis.kind != ModelKind::Semiclassical)
                    throw std::invalid_argument("re_ce is a semiclassical observable");
                s.values.push_back(psi[1].real());
                break;
            case Observable::ReCg0:
                require_quantum(traj.basis, "re_cg0");
                s.values.push_back(psi[0].real());
                break;
            case Observable::MeanPhotons:
                s.values.push_back(mean_photons(psi, traj.basis));
                break;
            case Observable::TotalExcitations:
                s.values.push_back(total_excitations(psi, traj.basis));
                break;
            case Observable::MathieuY:
                if (traj.basis.kind != ModelKind::Mathieu)
                    throw std::invalid_argument("mathieu_y is a Mathieu observable");
                s.values.push_back(psi[0].real());
                break;
        }
    }
    return s;
}

namespace {
std::mutex fftw_plan_mutex;  // FFTW plan creation is not thread-safe
}

SpectrumResult fft_spectrum(const ObservableSeries& series, const FftOptions& opts) {
    const int n = static_cast<int>(series.values.size());
    if (n < 2) throw std::invalid_argument("fft_spectrum: need at least 2 samples");
    series.grid.validate();  // uniform by construction
    if (series.grid.n_points != n)
        throw std::invalid_argument("fft_spectrum: series length does not match its grid");

    std::vector<double> x(series.values);
    double coherent_gain = n;
    if (opts.window == SpectralWindow::Hann) {
        coherent_gain = 0.0;
        for (int j = 0; j < n; ++j) {
            const double wj = 0.5 * (1.0 - std::cos(2.0 * M_PI * j / (n - 1)));
            x[j] *= wj;
            coherent_gain += wj;
        }
    }

    int nfft = n;
    if (opts.pad_pow2) {
        nfft = 1;
        while (nfft < n) nfft <<= 1;
        x.resize(nfft, 0.0);
    }

    const int nbins = nfft / 2 + 1;
    std::vector<Complex> out(nbins);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_plan plan = fftw_plan_dft_r2c_1d(nfft, x.data(),
                                              reinterpret_cast<fftw_complex*>(out.data()),
                                              FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    SpectrumResult spec;
    spec.n_signal = n;
    const double dt = series.grid.spacing();
    spec.bin_width = 2.0 * M_PI / (nfft * dt);
    spec.freqs.resize(nbins);
    spec.magnitude.resize(nbins);
    spec.amplitudes = std::move(out);
    for (int k = 0; k < nbins; ++k) {
        spec.freqs[k] = spec.bin_width * k;
        const double one_sided = (k == 0 || (nfft % 2 == 0 && k == nbins - 1)) ? 1.0 : 2.0;
        spec.magnitude[k] = one_sided * std::abs(spec.amplitudes[k]) / coherent_gain;
    }
    return spec;
}

PeakSet detect_peaks(const SpectrumResult& spec, const PeakThreshold& policy,
                     double fundamental, double doublet_spacing) {
    const int n = static_cast<int>(spec.magnitude.size());
    PeakSet set;
    if (n < 3) return set;

    double global_max = 0.0;
    for (int k = 1; k < n; ++k) global_max = std::max(global_max, spec.magnitude[k]);
    const double floor_mag = policy.rel_threshold * global_max;
    const int w = std::max(1, policy.window_bins);

    for (int k = 1; k < n - 1; ++k) {
        const double m = spec.magnitude[k];
        if (m < floor_mag) continue;
        if (!(m > spec.magnitude[k - 1] && m > spec.magnitude[k + 1])) continue;
        bool window_max = true;
        for (int j = std::max(1, k - w); j <= std::min(n - 1, k + w); ++j)
            if (spec.magnitude[j] > m) { window_max = false; break; }
        if (!window_max) continue;
        set.peaks.push_back({spec.freqs[k], m, k, -1});
    }

    // tag the fundamental and the doublets
    int fund_idx = -1;
    double best = std::numeric_limits<double>::max();
    for (int i = 0; i < static_cast<int>(set.peaks.size()); ++i) {
        const double d = std::abs(set.peaks[i].freq - fundamental);
        if (d < best && d <= 2.5 * fundamental) { best = d; fund_idx = i; }
    }
    if (fund_idx >= 0) set.peaks[fund_idx].doublet_index = 0;
    const double fmax = spec.freqs.back();
    const int n_doublets = static_cast<int>(fmax / doublet_spacing) + 1;
    std::vector<double> doublet_max;
    for (int nd = 1; nd <= n_doublets; ++nd) {
        const double center = nd * doublet_spacing;
        double mx = 0.0;
        for (auto& p : set.peaks) {
            if (p.doublet_index == 0) continue;
            if (std::abs(p.freq - center) <= 2.5 * fundamental) {
                p.doublet_index = nd;
                mx = std::max(mx, p.magnitude);
            }
        }
        doublet_max.push_back(mx);
    }
    for (size_t i = 0; i + 1 < doublet_max.size(); ++i)
        if (doublet_max[i] > 0.0 && doublet_max[i + 1] > 0.0)
            set.doublet_ratios.push_back(doublet_max[i + 1] / doublet_max[i]);

    // anchored decay fit over the doublet peaks
    if (fund_idx >= 0) {
        const double xf = set.peaks[fund_idx].freq / fundamental;
        const double yf = std::log10(set.peaks[fund_idx].magnitude);
        double sxx = 0.0, sxy = 0.0;
        int count = 0;
        for (const auto& p : set.peaks) {
            if (p.doublet_index < 1) continue;
            const double dx = p.freq / fundamental - xf;
            sxx += dx * dx;
            sxy += dx * (yf - std::log10(p.magnitude));
            ++count;
        }
        if (count >= 1 && sxx > 0.0) {
            set.fit.valid = true;
            set.fit.b = sxy / sxx;
            set.fit.a = yf + set.fit.b * xf;
            set.fit.n_doublet_points = count;
        }
    }
    return set;
}

double doublet_ratio_prediction(double rabi_freq, double field_freq) {
    if (rabi_freq <= 0.0 || field_freq <= 0.0)
        throw std::invalid_argument("doublet_ratio_prediction: frequencies must be positive");
    const double r = rabi_freq / (2.0 * field_freq);
    return r * r;
}

DcePeak dce_peak_extraction(const ObservableSeries& photons, double omega) {
    DcePeak out;
    const auto& y = photons.values;
    const int n = static_cast<int>(y.size());
    if (n < 3) return out;
    const double dt = photons.grid.spacing();

    for (int i = 1; i + 1 < n; ++i) {
        if (y[i] >= y[i - 1] && y[i] > y[i + 1]) {
            const double a = y[i - 1], b = y[i], c = y[i + 1];
            const double denom = a - 2.0 * b + c;
            const double d = (denom != 0.0) ? 0.5 * (a - c) / denom : 0.0;
            out.found = true;
            out.peak_time = photons.grid.at(i) + d * dt;
            out.peak_value = b - 0.25 * (a - c) * d;
            break;
        }
    }

    std::vector<double> centered(y);
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
    for (double& v : centered) v -= mean;
    ObservableSeries cs{photons.grid, centered, photons.tag};
    const SpectrumResult spec = fft_spectrum(cs);
    double pow_sum = 0.0, freq_sum = 0.0;
    for (size_t k = 0; k < spec.freqs.size(); ++k) {
        const double wk = spec.freqs[k];
        if (wk <= omega || wk > 3.0 * omega) continue;
        const double p = spec.magnitude[k] * spec.magnitude[k];
        pow_sum += p;
        freq_sum += wk * p;
    }
    if (pow_sum > 0.0) out.dominant_freq = freq_sum / pow_sum;
    return out;
}

SweepResult sweep_photon_surface(const QuantumParams& base, const std::vector<double>& couplings,
                                 double t_max_tau_s, int n_t, double grid_density) {
    if (couplings.empty() || n_t < 2)
        throw std::invalid_argument("sweep_photon_surface: need couplings and n_t >= 2");
    for (double lam : couplings)
        if (lam <= 0.0) throw std::invalid_argument("sweep_photon_surface: couplings must be positive");

    SweepResult out;
    out.couplings = couplings;
    out.t_over_tau_s.resize(n_t);
    for (int i = 0; i < n_t; ++i) out.t_over_tau_s[i] = t_max_tau_s * i / (n_t - 1);

    for (double lam : couplings) {
        QuantumParams p = base;
        p.coupling = lam;
        const double tau_s = M_PI / (2.0 * lam);
        const double horizon = t_max_tau_s * tau_s;
        const TimeGrid grid = TimeGrid::with_spacing(0.0, horizon, grid_density / p.field_freq);
        const Generator g = make_quantum(p);
        Vector psi0 = Vector::Zero(g.dim());
        psi0[0] = 1.0;

        const Trajectory exact = rk4_integrate(g, psi0, {grid.n_points, horizon});
        const PicardExpansion pic = picard_numeric(g, psi0, 4, grid, p.field_freq);
        for (const auto& wmsg : exact.warnings) out.warnings.push_back(wmsg);

        std::vector<double> row_exact(n_t), row_pic(n_t);
        for (int i = 0; i < n_t; ++i) {
            const double t = out.t_over_tau_s[i] * tau_s;
            const int j = std::min(grid.n_points - 1,
                                   static_cast<int>(std::lround(t / grid.spacing())));
            row_exact[i] = mean_photons(exact.states[j], g.basis);
            row_pic[i] = mean_photons(pic.partial_sum(j, 4), g.basis);
        }
        out.exact.push_back(std::move(row_exact));
        out.picard4.push_back(std::move(row_pic));
    }
    return out;
}

}  // namespace rabi
