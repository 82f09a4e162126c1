#include "sonar/signal.hpp"

#include <cmath>
#include <stdexcept>

#include "sonar/fft.hpp"

namespace sonar {

namespace {

void validate_band(const Signal& sig, const BandSpec& band) {
    if (band.low_hz < 0.0 || band.high_hz <= band.low_hz)
        throw std::invalid_argument("band_split: need 0 <= low_hz < high_hz");
    if (band.high_hz > sig.nyquist_hz())
        throw std::invalid_argument("band_split: band exceeds Nyquist");
}

// Zeroes all bins outside [low, high]; bin k carries |frequency|
// k*fs/N for k <= N/2 and (N-k)*fs/N above.
void apply_band_mask(std::vector<cplx>& spec, int sample_rate_hz, const BandSpec& band) {
    const size_t n = spec.size();
    const double df = static_cast<double>(sample_rate_hz) / static_cast<double>(n);
    for (size_t k = 0; k < n; ++k) {
        size_t mirrored = k <= n / 2 ? k : n - k;
        double f = df * static_cast<double>(mirrored);
        if (f < band.low_hz || f > band.high_hz) spec[k] = cplx(0.0, 0.0);
    }
}

}  // namespace

void Signal::validate() const {
    if (samples.empty()) throw std::invalid_argument("Signal: no samples");
    if (sample_rate_hz <= 0) throw std::invalid_argument("Signal: sample rate must be positive");
    for (double s : samples)
        if (!std::isfinite(s)) throw std::invalid_argument("Signal: non-finite sample");
}

Signal band_split(const Signal& sig, const BandSpec& band) {
    sig.validate();
    validate_band(sig, band);
    auto spec = fft_real(sig.samples);
    apply_band_mask(spec, sig.sample_rate_hz, band);
    return Signal{ifft_to_real(std::move(spec)), sig.sample_rate_hz};
}

double mean_square(const std::vector<double>& xs) {
    double acc = 0.0;
    for (double x : xs) acc += x * x;
    return xs.empty() ? 0.0 : acc / static_cast<double>(xs.size());
}

double band_energy_db(const Signal& sig, const BandSpec& band) {
    Signal banded = band_split(sig, band);
    return 10.0 * std::log10(mean_square(banded.samples) + kEnergyEpsilon);
}

std::vector<double> rms_envelope(const std::vector<double>& samples, int frame_len, int hop) {
    if (frame_len <= 0 || hop <= 0)
        throw std::invalid_argument("rms_envelope: frame_len and hop must be positive");
    if (static_cast<size_t>(frame_len) > samples.size())
        throw std::invalid_argument("rms_envelope: frame longer than signal");
    size_t n_frames = (samples.size() - frame_len) / hop + 1;
    std::vector<double> env(n_frames);
    for (size_t f = 0; f < n_frames; ++f) {
        double acc = 0.0;
        const double* p = samples.data() + f * hop;
        for (int i = 0; i < frame_len; ++i) acc += p[i] * p[i];
        env[f] = std::sqrt(acc / frame_len);
    }
    return env;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
    size_t n = x.size();
    if (n < 2) throw std::invalid_argument("pearson: need at least 2 points");
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / (std::sqrt(sxx) * std::sqrt(syy));
}

double band_envelope_correlation(const Signal& sig, const BandSpec& lf, const BandSpec& hf,
                                 int frame_len, int hop) {
    sig.validate();
    if (frame_len > sig.length())
        throw std::invalid_argument("band_envelope_correlation: frame longer than signal");
    Signal lo = band_split(sig, lf);
    Signal hi = band_split(sig, hf);
    auto env_lo = rms_envelope(lo.samples, frame_len, hop);
    auto env_hi = rms_envelope(hi.samples, frame_len, hop);
    if (env_lo.size() < 2)
        throw std::invalid_argument("band_envelope_correlation: fewer than 2 frames");
    return pearson(env_lo, env_hi);
}

BandStats band_stats(const Signal& sig, const BandSpec& lf, const BandSpec& hf,
                     int frame_len, int hop) {
    sig.validate();
    validate_band(sig, lf);
    validate_band(sig, hf);
    if (frame_len > sig.length())
        throw std::invalid_argument("band_stats: frame longer than signal");

    // One forward transform shared by both bands.
    auto spec = fft_real(sig.samples);
    auto spec_lo = spec;
    apply_band_mask(spec_lo, sig.sample_rate_hz, lf);
    apply_band_mask(spec, sig.sample_rate_hz, hf);
    auto lo = ifft_to_real(std::move(spec_lo));
    auto hi = ifft_to_real(std::move(spec));

    BandStats st;
    st.e_lf_db = 10.0 * std::log10(mean_square(lo) + kEnergyEpsilon);
    st.e_hf_db = 10.0 * std::log10(mean_square(hi) + kEnergyEpsilon);
    st.delta_e_db = st.e_hf_db - st.e_lf_db;

    auto env_lo = rms_envelope(lo, frame_len, hop);
    auto env_hi = rms_envelope(hi, frame_len, hop);
    if (env_lo.size() < 2) throw std::invalid_argument("band_stats: fewer than 2 frames");
    st.pearson_r = pearson(env_lo, env_hi);
    return st;
}

}  // namespace sonar
