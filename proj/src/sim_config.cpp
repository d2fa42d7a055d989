#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ofdmlms/fec.hpp"
#include "ofdmlms/sim.hpp"

namespace ofdmlms {

namespace {

std::string lower(std::string_view s) {
    std::string out;
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto end = comma == std::string_view::npos ? s.size() : comma;
        auto item = trim(s.substr(start, end - start));
        if (!item.empty()) out.push_back(std::move(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_real(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || !std::isfinite(x)) throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
    return x;
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    const auto l = lower(v);
    if (l == "true" || l == "1" || l == "yes" || l == "on") return true;
    if (l == "false" || l == "0" || l == "no" || l == "off") return false;
    throw ConfigError("config: '" + key + "' expects true/false, got '" + v + "'");
}

}  // namespace

std::string_view to_string(Coding c) { return c == Coding::None ? "none" : "cc_k7"; }

std::string_view to_string(ReceiverMode r) {
    switch (r) {
        case ReceiverMode::PreFftLms: return "pre_fft_lms";
        case ReceiverMode::PilotFdLms: return "pilot_fd_lms";
        case ReceiverMode::KnownChannelZf: return "known_channel_zf";
    }
    return "?";
}

Coding parse_coding(std::string_view name) {
    const auto l = lower(name);
    if (l == "none" || l == "uncoded") return Coding::None;
    if (l == "cc_k7" || l == "cc") return Coding::ConvK7;
    throw ConfigError("unknown coding '" + std::string(name) + "'");
}

ReceiverMode parse_receiver_mode(std::string_view name) {
    const auto l = lower(name);
    if (l == "pre_fft_lms") return ReceiverMode::PreFftLms;
    if (l == "pilot_fd_lms") return ReceiverMode::PilotFdLms;
    if (l == "known_channel_zf") return ReceiverMode::KnownChannelZf;
    throw ConfigError("unknown receiver_mode '" + std::string(name) + "'");
}

double code_rate(Coding c) { return c == Coding::None ? 1.0 : 0.5; }

double ebn0_from_esn0(double esn0_db, unsigned bits_per_symbol, double rate) {
    if (bits_per_symbol == 0 || !(rate > 0.0) || rate > 1.0)
        throw ConfigError("ebn0_from_esn0: need bits_per_symbol >= 1 and 0 < rate <= 1");
    return esn0_db - 10.0 * std::log10(static_cast<double>(bits_per_symbol) * rate);
}

std::vector<double> SimConfig::snr_grid() const {
    std::vector<double> out;
    if (snr_start_db > snr_stop_db) return out;
    const auto count = static_cast<std::size_t>(std::floor((snr_stop_db - snr_start_db) / snr_step_db + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(snr_start_db + static_cast<double>(i) * snr_step_db);
    return out;
}

ChannelConfig SimConfig::channel_config(ChannelKind kind) const {
    ChannelConfig c = ChannelConfig::make(kind, normalize_taps);
    c.k_factor = k_factor;
    c.doppler_hz = doppler_hz;
    return c;
}

void SimConfig::validate() const {
    if (modulations.empty() || channels.empty() || codings.empty())
        throw ConfigError("config: modulation, channel and coding need at least one entry");
    if (!(snr_step_db > 0.0)) throw ConfigError("config: snr_step_db must be positive");
    if (!std::isfinite(snr_start_db) || !std::isfinite(snr_stop_db)) throw ConfigError("config: SNR bounds must be finite");
    if (n_bits == 0) throw ConfigError("config: n_bits must be positive");
    if (source == SourceKind::Sine && n_bits % 8 != 0) throw ConfigError("config: n_bits must be a multiple of 8 for the sine source");
    if (lms.taps == 0) throw ConfigError("config: lms_taps must be positive");
    if (lms.mu && !(*lms.mu > 0.0)) throw ConfigError("config: lms_mu must be positive");
    if (!(lms.pilot_mu > 0.0)) throw ConfigError("config: pilot_mu must be positive");
    if (receiver == ReceiverMode::PreFftLms && lms.training_symbols == 0)
        throw ConfigError("config: pre_fft_lms needs at least one training symbol");
    if (!(k_factor >= 0.0)) throw ConfigError("config: k_factor must be non-negative");
    if (!(doppler_hz >= 0.0)) throw ConfigError("config: doppler_hz must be non-negative");
}

SimConfig parse_config(std::istream& in) {
    SimConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = lower(trim(std::string_view(body).substr(0, eq)));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (value.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty value for '" + key + "'");

        if (key == "modulation") {
            cfg.modulations.clear();
            for (const auto& v : split_list(value)) {
                if (lower(v) == "all") {
                    cfg.modulations.assign(std::begin(kAllModulations), std::end(kAllModulations));
                } else {
                    cfg.modulations.push_back(parse_modulation(v));
                }
            }
        } else if (key == "channel") {
            cfg.channels.clear();
            for (const auto& v : split_list(value)) cfg.channels.push_back(parse_channel_kind(v));
        } else if (key == "coding") {
            cfg.codings.clear();
            for (const auto& v : split_list(value)) cfg.codings.push_back(parse_coding(v));
        } else if (key == "receiver_mode") {
            cfg.receiver = parse_receiver_mode(value);
        } else if (key == "snr_start_db") {
            cfg.snr_start_db = parse_real(key, value);
        } else if (key == "snr_stop_db") {
            cfg.snr_stop_db = parse_real(key, value);
        } else if (key == "snr_step_db") {
            cfg.snr_step_db = parse_real(key, value);
        } else if (key == "n_bits") {
            cfg.n_bits = parse_count(key, value);
        } else if (key == "seed") {
            cfg.seed = parse_count(key, value);
        } else if (key == "k_factor") {
            cfg.k_factor = parse_real(key, value);
        } else if (key == "doppler_hz") {
            cfg.doppler_hz = parse_real(key, value);
        } else if (key == "lms_taps") {
            cfg.lms.taps = parse_count(key, value);
        } else if (key == "lms_mu") {
            if (lower(value) == "auto") {
                cfg.lms.mu.reset();
            } else {
                cfg.lms.mu = parse_real(key, value);
            }
        } else if (key == "training_symbols") {
            cfg.lms.training_symbols = parse_count(key, value);
        } else if (key == "normalize_taps") {
            cfg.normalize_taps = parse_bool(key, value);
        } else if (key == "pilot_mu") {
            cfg.lms.pilot_mu = parse_real(key, value);
        } else {
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    return parse_config(in);
}

std::vector<PointSpec> enumerate_points(const SimConfig& cfg) {
    std::vector<PointSpec> out;
    std::uint64_t index = 0;
    for (double snr : cfg.snr_grid())
        for (auto m : cfg.modulations)
            for (auto ch : cfg.channels)
                for (auto c : cfg.codings) out.push_back({m, ch, c, snr, index++});
    return out;
}

}  // namespace ofdmlms
