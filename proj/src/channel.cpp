#include "ofdmlms/channel.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace ofdmlms {

std::string_view to_string(ChannelKind k) {
    switch (k) {
        case ChannelKind::AwgnOnly: return "awgn";
        case ChannelKind::StaticMultipath: return "multipath";
        case ChannelKind::RicianFading: return "rician";
    }
    return "?";
}

ChannelKind parse_channel_kind(std::string_view name) {
    std::string key;
    for (char c : name) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (key == "awgn" || key == "awgn_only") return ChannelKind::AwgnOnly;
    if (key == "multipath" || key == "static" || key == "static_multipath") return ChannelKind::StaticMultipath;
    if (key == "rician" || key == "fading" || key == "rician_fading") return ChannelKind::RicianFading;
    throw ConfigError("unknown channel '" + std::string(name) + "'");
}

CVec reference_taps() { return {{0.986, 0.0}, {0.845, 0.0}, {0.237, 0.0}, {0.123, 0.31}}; }

CVec normalize_power(std::span<const cplx> taps) {
    double p = 0.0;
    for (const auto& t : taps) p += std::norm(t);
    if (p <= 0.0) throw ConfigError("channel taps have zero power");
    const double s = 1.0 / std::sqrt(p);
    CVec out(taps.begin(), taps.end());
    for (auto& t : out) t *= s;
    return out;
}

ChannelConfig ChannelConfig::make(ChannelKind kind, bool normalize_taps) {
    ChannelConfig cfg;
    cfg.kind = kind;
    cfg.taps0 = normalize_taps ? normalize_power(reference_taps()) : reference_taps();
    return cfg;
}

CVec ChannelRealization::mean_taps(std::size_t begin, std::size_t count) const {
    CVec out(taps.size(), cplx{});
    if (count == 0) return out;
    for (std::size_t l = 0; l < taps.size(); ++l) {
        const std::size_t end = std::min(begin + count, taps[l].size());
        cplx acc{};
        for (std::size_t t = begin; t < end; ++t) acc += taps[l][t];
        out[l] = acc / static_cast<double>(end - begin);
    }
    return out;
}

CVec add_awgn(std::span<const cplx> signal, double esn0_db, double signal_power, RngStream& rng) {
    if (!(signal_power > 0.0)) throw ConfigError("add_awgn: signal power must be positive");
    const double variance = signal_power / db_to_linear(esn0_db);
    CVec out(signal.begin(), signal.end());
    for (auto& v : out) v += rng.complex_gaussian(variance);
    return out;
}

CVec static_multipath(std::span<const cplx> signal, std::span<const cplx> taps) {
    if (taps.empty()) throw ConfigError("static_multipath: empty impulse response");
    CVec out(signal.size(), cplx{});
    for (std::size_t t = 0; t < signal.size(); ++t) {
        cplx acc{};
        const std::size_t lmax = std::min(taps.size(), t + 1);
        for (std::size_t l = 0; l < lmax; ++l) acc += taps[l] * signal[t - l];
        out[t] = acc;
    }
    return out;
}

bool taps_exceed_prefix(std::span<const cplx> taps, std::size_t cp_len) noexcept {
    return taps.size() > cp_len;
}

CVec jakes_process(double doppler_hz, double sample_rate_hz, std::size_t n_samples, RngStream& rng) {
    constexpr std::size_t ns = kJakesSinusoids;
    const double two_pi = 2.0 * std::numbers::pi;
    const double rotation = rng.uniform();
    std::array<cplx, ns> phasor{};
    std::array<cplx, ns> step{};
    std::array<double, ns> omega{};
    std::array<double, ns> phase0{};
    for (std::size_t n = 0; n < ns; ++n) {
        const double alpha = two_pi * (static_cast<double>(n) + rotation) / static_cast<double>(ns);
        omega[n] = two_pi * doppler_hz * std::cos(alpha) / sample_rate_hz;
        phase0[n] = two_pi * rng.uniform();
        step[n] = std::polar(1.0, omega[n]);
    }

    const double amp = 1.0 / std::sqrt(static_cast<double>(ns));
    CVec g(n_samples);
    constexpr std::size_t kResync = 1024;
    for (std::size_t t = 0; t < n_samples; ++t) {
        if (t % kResync == 0) {
            for (std::size_t n = 0; n < ns; ++n)
                phasor[n] = std::polar(1.0, phase0[n] + omega[n] * static_cast<double>(t));
        }
        cplx acc{};
        for (std::size_t n = 0; n < ns; ++n) {
            acc += phasor[n];
            phasor[n] *= step[n];
        }
        g[t] = amp * acc;
    }
    return g;
}

ChannelRealization rician_taps(const ChannelConfig& cfg, std::size_t n_samples, RngStream& rng) {
    if (!(cfg.k_factor >= 0.0)) throw ConfigError("rician_taps: K-factor must be non-negative");
    if (!(cfg.sample_rate_hz > 0.0)) throw ConfigError("rician_taps: sample rate must be positive");
    if (!(cfg.doppler_hz >= 0.0) || cfg.doppler_hz >= cfg.sample_rate_hz / 2.0)
        throw ConfigError("rician_taps: Doppler " + std::to_string(cfg.doppler_hz) +
                          " Hz is not below Nyquist " + std::to_string(cfg.sample_rate_hz / 2.0) + " Hz");

    const double k = cfg.k_factor;
    const double los = std::isinf(k) ? 1.0 : std::sqrt(k / (k + 1.0));
    const double diffuse = std::isinf(k) ? 0.0 : std::sqrt(1.0 / (k + 1.0));

    ChannelRealization r;
    r.taps.reserve(cfg.taps0.size());
    for (const auto& tap : cfg.taps0) {
        CVec g = jakes_process(cfg.doppler_hz, cfg.sample_rate_hz, n_samples, rng);
        const double mag = std::abs(tap);
        for (auto& v : g) v = mag * (los + diffuse * v);
        r.taps.push_back(std::move(g));
    }
    return r;
}

ChannelRealization constant_taps(std::span<const cplx> taps, std::size_t n_samples) {
    ChannelRealization r;
    for (const auto& t : taps) r.taps.emplace_back(n_samples, t);
    return r;
}

CVec apply_fading(std::span<const cplx> signal, const ChannelRealization& realization) {
    if (realization.tap_count() == 0) throw ConfigError("apply_fading: no taps");
    for (const auto& tr : realization.taps) {
        if (tr.size() < signal.size()) {
            throw FramingError("apply_fading: trajectory of " + std::to_string(tr.size()) +
                               " samples is shorter than the signal (" + std::to_string(signal.size()) + ")");
        }
    }
    CVec out(signal.size(), cplx{});
    const std::size_t taps = realization.tap_count();
    for (std::size_t t = 0; t < signal.size(); ++t) {
        cplx acc{};
        const std::size_t lmax = std::min(taps, t + 1);
        for (std::size_t l = 0; l < lmax; ++l) acc += realization.taps[l][t] * signal[t - l];
        out[t] = acc;
    }
    return out;
}

double mean_power(std::span<const cplx> signal) {
    if (signal.empty()) return 0.0;
    double p = 0.0;
    for (const auto& v : signal) p += std::norm(v);
    return p / static_cast<double>(signal.size());
}

}  // namespace ofdmlms
