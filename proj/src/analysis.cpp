#include "dbfrx/analysis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>

#include "dbfrx/error.hpp"

namespace dbfrx {
namespace {

constexpr double kFloorDb = -300.0;
constexpr double kMaxRatioDb = 400.0;

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

std::vector<std::complex<double>> fft(std::vector<std::complex<double>> x) {
    const int n = static_cast<int>(x.size());
    std::vector<std::complex<double>> out(x.size());
    std::lock_guard lock(fftw_mutex());
    auto* in_ptr = reinterpret_cast<fftw_complex*>(x.data());
    auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

// Per-bin powers normalized to signal power, plus the layout needed to walk lobes.
struct Spectrum {
    std::vector<double> power;
    bool two_sided = false;
    std::size_t fft_size = 0;
    double bin_hz = 0.0;
    SpectrumWindow window = SpectrumWindow::rectangular;

    std::size_t wrap(std::ptrdiff_t k) const {
        const auto n = static_cast<std::ptrdiff_t>(power.size());
        if (two_sided) return static_cast<std::size_t>(((k % n) + n) % n);
        return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, n - 1));
    }
    double frequency(std::size_t k) const {
        if (two_sided && k >= fft_size / 2) return (static_cast<double>(k) - static_cast<double>(fft_size)) * bin_hz;
        return static_cast<double>(k) * bin_hz;
    }
    std::size_t bin_of(double f_hz) const { return wrap(static_cast<std::ptrdiff_t>(std::llround(f_hz / bin_hz))); }
};

int lobe_span(SpectrumWindow w) { return w == SpectrumWindow::rectangular ? 0 : 4; }

std::vector<double> raw_power(std::span<const std::complex<double>> samples, SpectrumWindow window) {
    const auto w = window_coefficients(window, samples.size());
    std::vector<std::complex<double>> x(samples.begin(), samples.end());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] *= w[k];
    const auto X = fft(std::move(x));
    std::vector<double> p(X.size());
    for (std::size_t k = 0; k < X.size(); ++k) p[k] = std::norm(X[k]);
    return p;
}

Spectrum make_spectrum(std::span<const std::complex<double>> samples, double fs_hz, SpectrumWindow window,
                       bool two_sided) {
    const std::size_t n = samples.size();
    const auto w = window_coefficients(window, n);
    const double wsq = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    const auto raw = raw_power(samples, window);
    const double norm = static_cast<double>(n) * wsq;

    Spectrum s;
    s.two_sided = two_sided;
    s.fft_size = n;
    s.bin_hz = fs_hz / static_cast<double>(n);
    s.window = window;
    if (two_sided) {
        s.power.resize(n);
        for (std::size_t k = 0; k < n; ++k) s.power[k] = raw[k] / norm;
    } else {
        s.power.resize(n / 2 + 1);
        for (std::size_t k = 0; k < s.power.size(); ++k) {
            const bool edge = k == 0 || (n % 2 == 0 && k == n / 2);
            s.power[k] = raw[k] / norm * (edge ? 1.0 : 2.0);
        }
    }
    return s;
}

std::vector<std::complex<double>> as_complex(std::span<const double> x) {
    return {x.begin(), x.end()};
}

std::size_t argmax_non_dc(const Spectrum& s, const std::vector<bool>& dc) {
    std::size_t best = 0;
    double best_p = -1.0;
    for (std::size_t k = 0; k < s.power.size(); ++k) {
        if (dc[k]) continue;
        if (s.power[k] > best_p) {
            best_p = s.power[k];
            best = k;
        }
    }
    return best;
}

std::vector<bool> mark(const Spectrum& s, std::size_t center, int span) {
    std::vector<bool> m(s.power.size(), false);
    for (int d = -span; d <= span; ++d) m[s.wrap(static_cast<std::ptrdiff_t>(center) + d)] = true;
    return m;
}

bool is_coherent(std::span<const std::complex<double>> samples, double fs_hz, bool two_sided) {
    const Spectrum s = make_spectrum(samples, fs_hz, SpectrumWindow::rectangular, two_sided);
    const auto dc = mark(s, 0, 0);
    const std::size_t k0 = argmax_non_dc(s, dc);
    const double peak = s.power[k0];
    const double lo = s.power[s.wrap(static_cast<std::ptrdiff_t>(k0) - 1)];
    const double hi = s.power[s.wrap(static_cast<std::ptrdiff_t>(k0) + 1)];
    auto small = [&](std::size_t k, double p) { return k == k0 || dc[k] || p < peak * 1e-6; };
    return small(s.wrap(static_cast<std::ptrdiff_t>(k0) - 1), lo) && small(s.wrap(static_cast<std::ptrdiff_t>(k0) + 1), hi);
}

double db_ratio(double num, double den) {
    if (num <= 0.0) return -kMaxRatioDb;
    if (den <= 0.0) return kMaxRatioDb;
    return std::clamp(10.0 * std::log10(num / den), -kMaxRatioDb, kMaxRatioDb);
}

double fold_harmonic(double f_hz, double fs_hz, bool two_sided) {
    double f = std::fmod(f_hz, fs_hz);
    if (f < 0.0) f += fs_hz;
    if (two_sided) return f >= fs_hz / 2.0 ? f - fs_hz : f;
    return f > fs_hz / 2.0 ? fs_hz - f : f;
}

SpectralMetrics metrics_impl(std::span<const std::complex<double>> samples, double fs_hz, const SpectralOptions& opts,
                             bool two_sided) {
    if (samples.size() < 64) throw std::invalid_argument("spectral_metrics needs at least 64 samples");
    if (!(fs_hz > 0.0)) throw std::invalid_argument("sample rate must be positive");
    if (opts.harmonics < 0) throw std::invalid_argument("harmonic count must be >= 0");

    const SpectrumWindow window = opts.window.value_or(is_coherent(samples, fs_hz, two_sided)
                                                           ? SpectrumWindow::rectangular
                                                           : SpectrumWindow::blackman_harris);
    const Spectrum s = make_spectrum(samples, fs_hz, window, two_sided);
    const int span = lobe_span(window);

    const auto dc = mark(s, 0, span);
    const double total = std::accumulate(s.power.begin(), s.power.end(), 0.0);
    double non_dc = 0.0;
    for (std::size_t k = 0; k < s.power.size(); ++k) {
        if (!dc[k]) non_dc += s.power[k];
    }
    if (!(non_dc > 1e-24 * total) || non_dc == 0.0) throw NoFundamentalError();

    const std::size_t k0 = argmax_non_dc(s, dc);
    const auto fund = mark(s, k0, span);

    double p_fund = 0.0;
    double weighted = 0.0;
    for (int d = -span; d <= span; ++d) {
        const std::size_t k = s.wrap(static_cast<std::ptrdiff_t>(k0) + d);
        if (dc[k]) continue;
        p_fund += s.power[k];
        weighted += s.power[k] * (s.frequency(k0) + d * s.bin_hz);
    }
    const double f0 = p_fund > 0.0 ? weighted / p_fund : s.frequency(k0);

    std::vector<bool> excluded(s.power.size(), false);
    for (std::size_t k = 0; k < excluded.size(); ++k) excluded[k] = dc[k] || fund[k];

    double p_harm = 0.0;
    for (int h = 2; h <= opts.harmonics + 1; ++h) {
        const std::size_t kh = s.bin_of(fold_harmonic(h * f0, fs_hz, two_sided));
        for (int d = -span; d <= span; ++d) {
            const std::size_t k = s.wrap(static_cast<std::ptrdiff_t>(kh) + d);
            if (excluded[k]) continue;
            excluded[k] = true;
            p_harm += s.power[k];
        }
    }

    double noise = 0.0;
    std::size_t noise_bins = 0;
    double max_spur = 0.0;
    std::size_t non_dc_bins = 0;
    for (std::size_t k = 0; k < s.power.size(); ++k) {
        if (dc[k]) continue;
        ++non_dc_bins;
        if (!fund[k]) max_spur = std::max(max_spur, s.power[k]);
        if (excluded[k]) continue;
        noise += s.power[k];
        ++noise_bins;
    }
    const double noise_total = noise_bins > 0 ? noise / static_cast<double>(noise_bins) * static_cast<double>(non_dc_bins) : 0.0;

    SpectralMetrics m;
    m.fundamental_hz = f0;
    m.fundamental_power_db = 10.0 * std::log10(p_fund);
    m.snr_db = db_ratio(p_fund, noise_total);
    m.sndr_db = db_ratio(p_fund, noise_total + p_harm);
    m.sfdr_db = db_ratio(s.power[k0], max_spur);
    m.thd_db = db_ratio(p_harm, p_fund);
    m.fft_size = s.fft_size;
    m.window = window;
    m.bin_hz = s.bin_hz;
    return m;
}

std::vector<SpectrumPoint> points(const Spectrum& s) {
    std::vector<SpectrumPoint> out;
    out.reserve(s.power.size());
    auto push = [&](std::size_t k) {
        const double p = s.power[k];
        out.push_back({s.frequency(k), p > 0.0 ? std::max(kFloorDb, 10.0 * std::log10(p)) : kFloorDb});
    };
    if (s.two_sided) {
        const std::size_t n = s.power.size();
        for (std::size_t k = n / 2 + n % 2; k < n; ++k) push(k);
        for (std::size_t k = 0; k < n / 2 + n % 2; ++k) push(k);
    } else {
        for (std::size_t k = 0; k < s.power.size(); ++k) push(k);
    }
    return out;
}

}  // namespace

const char* to_string(SpectrumWindow w) {
    return w == SpectrumWindow::rectangular ? "rectangular" : "blackman_harris";
}

std::vector<double> window_coefficients(SpectrumWindow window, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (window == SpectrumWindow::rectangular || n < 2) return w;
    // 4-term Blackman-Harris, periodic form for spectral analysis.
    constexpr double a0 = 0.35875, a1 = 0.48829, a2 = 0.14128, a3 = 0.01168;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        w[k] = a0 - a1 * std::cos(x) + a2 * std::cos(2.0 * x) - a3 * std::cos(3.0 * x);
    }
    return w;
}

SpectralMetrics spectral_metrics(std::span<const double> samples, double fs_hz, const SpectralOptions& opts) {
    const auto x = as_complex(samples);
    return metrics_impl(x, fs_hz, opts, false);
}

SpectralMetrics spectral_metrics(std::span<const std::complex<double>> samples, double fs_hz,
                                 const SpectralOptions& opts) {
    return metrics_impl(samples, fs_hz, opts, true);
}

std::vector<SpectrumPoint> power_spectrum(std::span<const double> samples, double fs_hz, SpectrumWindow window) {
    if (samples.empty()) throw std::invalid_argument("empty input");
    const auto x = as_complex(samples);
    return points(make_spectrum(x, fs_hz, window, false));
}

std::vector<SpectrumPoint> power_spectrum(std::span<const std::complex<double>> samples, double fs_hz,
                                          SpectrumWindow window) {
    if (samples.empty()) throw std::invalid_argument("empty input");
    return points(make_spectrum(samples, fs_hz, window, true));
}

std::vector<double> fft_bin_power(std::span<const std::complex<double>> samples, SpectrumWindow window) {
    return raw_power(samples, window);
}

double band_power_fraction(std::span<const std::complex<double>> samples, double fs_hz, double limit_hz) {
    if (samples.empty()) throw std::invalid_argument("empty input");
    const Spectrum s = make_spectrum(samples, fs_hz, SpectrumWindow::rectangular, true);
    double in = 0.0;
    double all = 0.0;
    for (std::size_t k = 0; k < s.power.size(); ++k) {
        all += s.power[k];
        if (std::abs(s.frequency(k)) <= limit_hz) in += s.power[k];
    }
    return all > 0.0 ? in / all : 1.0;
}

std::vector<double> instantaneous_frequency(std::span<const std::complex<double>> samples, double fs_hz) {
    std::vector<double> out;
    if (samples.size() < 2) return out;
    out.reserve(samples.size() - 1);
    const double scale = fs_hz / (2.0 * std::numbers::pi);
    for (std::size_t k = 1; k < samples.size(); ++k) {
        out.push_back(std::arg(samples[k] * std::conj(samples[k - 1])) * scale);
    }
    return out;
}

BeamPattern beam_pattern(const ArrayConfig& cfg, std::span<const std::complex<double>> weights,
                         std::span<const double> angles_rad) {
    cfg.validate();
    if (angles_rad.empty()) throw ValidationError("beam pattern grid is empty");
    if (weights.size() != static_cast<std::size_t>(cfg.num_elements)) {
        throw ValidationError("weight count does not match the array element count");
    }
    for (std::size_t k = 1; k < angles_rad.size(); ++k) {
        if (!(angles_rad[k] > angles_rad[k - 1])) throw ValidationError("beam pattern grid must be strictly increasing");
    }
    BeamPattern out;
    out.angles_rad.assign(angles_rad.begin(), angles_rad.end());
    out.gains_db.resize(angles_rad.size());
    const double omega = 2.0 * std::numbers::pi * cfg.carrier_hz;
    for (std::size_t a = 0; a < angles_rad.size(); ++a) {
        std::complex<double> sum{};
        for (int n = 1; n <= cfg.num_elements; ++n) {
            sum += weights[static_cast<std::size_t>(n - 1)] * std::polar(1.0, -omega * element_delay(cfg, angles_rad[a], n));
        }
        const double mag = std::abs(sum);
        out.gains_db[a] = mag > 0.0 ? std::max(kFloorDb, 20.0 * std::log10(mag)) : kFloorDb;
    }
    return out;
}

BeamPattern beam_pattern(const ArrayConfig& cfg, const ComplexWeightSet& w, std::span<const double> angles_rad) {
    const auto weights = w.dequantized();
    return beam_pattern(cfg, std::span<const std::complex<double>>(weights), angles_rad);
}

BeamSummary summarize(const BeamPattern& pattern) {
    const auto& g = pattern.gains_db;
    if (g.empty()) throw ValidationError("empty beam pattern");
    const auto peak = static_cast<std::size_t>(std::distance(g.begin(), std::max_element(g.begin(), g.end())));
    BeamSummary s;
    s.peak_angle_rad = pattern.angles_rad[peak];
    s.peak_gain_db = g[peak];

    std::size_t k = peak;
    while (k > 0 && g[k - 1] < g[k]) --k;
    if (k > 0 && k != peak) s.first_null_below_rad = pattern.angles_rad[k];
    k = peak;
    while (k + 1 < g.size() && g[k + 1] < g[k]) ++k;
    if (k + 1 < g.size() && k != peak) s.first_null_above_rad = pattern.angles_rad[k];
    return s;
}

std::vector<double> angle_grid(double lo_rad, double hi_rad, double step_rad) {
    if (!(step_rad > 0.0) || !(hi_rad >= lo_rad)) throw ValidationError("invalid angle grid");
    const auto n = static_cast<std::size_t>(std::llround((hi_rad - lo_rad) / step_rad)) + 1;
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = lo_rad + static_cast<double>(k) * step_rad;
    return out;
}

ComparisonReport compare(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                         std::size_t warmup) {
    if (a.size() != b.size()) throw ValidationError("compared sequences differ in length");
    ComparisonReport r;
    r.warmup_samples = warmup;
    if (warmup >= a.size()) return r;
    double diff_sq = 0.0;
    double ref_sq = 0.0;
    double di_sq = 0.0;
    double dq_sq = 0.0;
    for (std::size_t k = warmup; k < a.size(); ++k) {
        const auto d = a[k] - b[k];
        r.max_abs_diff = std::max(r.max_abs_diff, std::abs(d));
        r.i.max_abs = std::max(r.i.max_abs, std::abs(d.real()));
        r.q.max_abs = std::max(r.q.max_abs, std::abs(d.imag()));
        diff_sq += std::norm(d);
        ref_sq += std::norm(b[k]);
        di_sq += d.real() * d.real();
        dq_sq += d.imag() * d.imag();
    }
    r.samples_compared = a.size() - warmup;
    const double count = static_cast<double>(r.samples_compared);
    r.relative_rms = ref_sq > 0.0 ? std::sqrt(diff_sq / ref_sq) : (diff_sq > 0.0 ? INFINITY : 0.0);
    r.i.rms = std::sqrt(di_sq / count);
    r.q.rms = std::sqrt(dq_sq / count);
    return r;
}

}  // namespace dbfrx
