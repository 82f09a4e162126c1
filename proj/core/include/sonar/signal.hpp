#pragma once

#include <string>
#include <vector>

namespace sonar {

/// Mono waveform. Samples are dimensionless amplitudes, nominally in [-1, 1].
struct Signal {
    std::vector<double> samples;
    int sample_rate_hz = 0;

    int length() const { return static_cast<int>(samples.size()); }
    double nyquist_hz() const { return 0.5 * sample_rate_hz; }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }

    /// Throws std::invalid_argument when empty, rate <= 0, or non-finite.
    void validate() const;
};

/// Closed frequency interval [low_hz, high_hz].
struct BandSpec {
    double low_hz = 0.0;
    double high_hz = 0.0;
};

/// Second-order band statistics of one clip.
struct BandStats {
    double e_lf_db = 0.0;
    double e_hf_db = 0.0;
    double delta_e_db = 0.0;  // e_hf_db - e_lf_db
    double pearson_r = 0.0;
};

/// Default analysis bands and framing (25 ms / 10 ms at 16 kHz).
inline constexpr BandSpec kDefaultLowBand{0.0, 4000.0};
inline constexpr BandSpec kDefaultHighBand{7000.0, 8000.0};
inline constexpr int kDefaultFrameLen = 400;
inline constexpr int kDefaultHop = 160;

/// Silence floor added to mean-square energies before the log.
inline constexpr double kEnergyEpsilon = 1e-12;

/// Ideal brick-wall band-pass: DFT, zero every bin whose |frequency| lies
/// outside [low_hz, high_hz] (closed interval; DC survives only when
/// low_hz == 0), inverse DFT. Output length equals input length.
Signal band_split(const Signal& sig, const BandSpec& band);

/// 10*log10(mean squared amplitude of the band content + 1e-12), in dB.
double band_energy_db(const Signal& sig, const BandSpec& band);

/// Pearson correlation of the per-frame RMS envelopes of the two bands.
/// Returns 0 when either envelope has zero variance. Throws when fewer
/// than two frames fit.
double band_envelope_correlation(const Signal& sig, const BandSpec& lf, const BandSpec& hf,
                                 int frame_len = kDefaultFrameLen, int hop = kDefaultHop);

/// All Fig.-style statistics in one pass (single forward transform).
BandStats band_stats(const Signal& sig, const BandSpec& lf = kDefaultLowBand,
                     const BandSpec& hf = kDefaultHighBand,
                     int frame_len = kDefaultFrameLen, int hop = kDefaultHop);

/// Per-frame RMS over sliding frames; only full frames are used.
std::vector<double> rms_envelope(const std::vector<double>& samples, int frame_len, int hop);

/// Pearson correlation coefficient; 0 when either input has zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

double mean_square(const std::vector<double>& xs);

}  // namespace sonar
