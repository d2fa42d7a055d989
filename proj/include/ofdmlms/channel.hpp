#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "ofdmlms/common.hpp"
#include "ofdmlms/numerics.hpp"

namespace ofdmlms {

enum class ChannelKind { AwgnOnly, StaticMultipath, RicianFading };

std::string_view to_string(ChannelKind k);
/// "awgn", "multipath" / "static", "rician" / "fading".
ChannelKind parse_channel_kind(std::string_view name);

/// The four-tap reference impulse response, unnormalized.
CVec reference_taps();

/// Scales taps to unit total power.
CVec normalize_power(std::span<const cplx> taps);

struct ChannelConfig {
    ChannelKind kind = ChannelKind::AwgnOnly;
    CVec taps0 = normalize_power(reference_taps());
    double k_factor = 3.0;
    double doppler_hz = 100.0;
    double sample_rate_hz = 4000.0;

    /// Config for `kind` with the reference taps, optionally power-normalized.
    static ChannelConfig make(ChannelKind kind, bool normalize_taps = true);
};

/// Per-tap complex gain trajectories, one value per signal sample.
struct ChannelRealization {
    std::vector<CVec> taps;

    std::size_t tap_count() const noexcept { return taps.size(); }
    std::size_t length() const noexcept { return taps.empty() ? 0 : taps.front().size(); }
    /// Taps averaged over [begin, begin + count).
    CVec mean_taps(std::size_t begin, std::size_t count) const;
};

/// Adds circular complex Gaussian noise of total variance
/// signal_power / 10^(esn0_db/10).
CVec add_awgn(std::span<const cplx> signal, double esn0_db, double signal_power, RngStream& rng);

/// Linear convolution truncated to the input length.
CVec static_multipath(std::span<const cplx> signal, std::span<const cplx> taps);

/// True when the impulse response is longer than the cyclic prefix, which
/// voids the per-subcarrier multiplicativity of the OFDM receiver.
bool taps_exceed_prefix(std::span<const cplx> taps, std::size_t cp_len) noexcept;

/// Number of equal-power arrival angles in the sum-of-sinusoids generator.
inline constexpr std::size_t kJakesSinusoids = 64;

/// Unit-power complex Gaussian-like process with a Jakes (Clarke) Doppler
/// spectrum, synthesised as a sum of sinusoids with random phases and a
/// random rotation of the arrival angles.
CVec jakes_process(double doppler_hz, double sample_rate_hz, std::size_t n_samples, RngStream& rng);

/// Rician tap trajectories:
///   h_l(t) = |taps0_l| * (sqrt(K/(K+1)) + sqrt(1/(K+1)) * g_l(t)).
/// Throws ConfigError for negative K or Doppler at or above Nyquist.
ChannelRealization rician_taps(const ChannelConfig& cfg, std::size_t n_samples, RngStream& rng);

/// Every trajectory constant at taps[l].
ChannelRealization constant_taps(std::span<const cplx> taps, std::size_t n_samples);

/// y(t) = sum_l h_l(t) x(t - l), truncated to the input length.
CVec apply_fading(std::span<const cplx> signal, const ChannelRealization& realization);

double mean_power(std::span<const cplx> signal);

}  // namespace ofdmlms
