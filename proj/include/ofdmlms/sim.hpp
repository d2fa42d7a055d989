#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ofdmlms/channel.hpp"
#include "ofdmlms/common.hpp"
#include "ofdmlms/equalizer.hpp"
#include "ofdmlms/modem.hpp"

namespace ofdmlms {

enum class Coding { None, ConvK7 };
enum class ReceiverMode { PreFftLms, PilotFdLms, KnownChannelZf };
enum class SourceKind { RandomBits, Sine };

std::string_view to_string(Coding c);
std::string_view to_string(ReceiverMode r);
Coding parse_coding(std::string_view name);
ReceiverMode parse_receiver_mode(std::string_view name);

double code_rate(Coding c);

struct LmsSettings {
    std::size_t taps = 11;
    /// Unset: chosen per point by select_step_size on the training span.
    std::optional<double> mu;
    std::size_t training_symbols = 8;
    /// Step size of the per-pilot single-tap filters.
    double pilot_mu = 0.5;
};

struct SimConfig {
    std::vector<Modulation> modulations{Modulation::QPSK};
    std::vector<ChannelKind> channels{ChannelKind::AwgnOnly};
    std::vector<Coding> codings{Coding::None};
    ReceiverMode receiver = ReceiverMode::PilotFdLms;
    double snr_start_db = 0.0;
    double snr_stop_db = 50.0;
    double snr_step_db = 2.0;
    std::size_t n_bits = 44000;
    std::uint64_t seed = 1;
    double k_factor = 3.0;
    double doppler_hz = 100.0;
    bool normalize_taps = true;
    LmsSettings lms;
    SourceKind source = SourceKind::RandomBits;

    /// start, start+step, ... up to stop inclusive; empty when start > stop.
    std::vector<double> snr_grid() const;
    ChannelConfig channel_config(ChannelKind kind) const;
    /// Throws ConfigError on invalid combinations.
    void validate() const;
};

/// Parses `key = value` lines; `#` starts a comment. Lists (modulation,
/// channel, coding) are comma separated. lms_mu accepts "auto".
SimConfig parse_config(std::istream& in);
SimConfig load_config(const std::filesystem::path& path);

struct PointSpec {
    Modulation modulation = Modulation::QPSK;
    ChannelKind channel = ChannelKind::AwgnOnly;
    Coding coding = Coding::None;
    double snr_db = 0.0;
    /// RNG stream id of the point.
    std::uint64_t index = 0;
};

struct BerPoint {
    Modulation modulation = Modulation::QPSK;
    ChannelKind channel = ChannelKind::AwgnOnly;
    Coding coding = Coding::None;
    ReceiverMode receiver = ReceiverMode::PilotFdLms;
    double snr_db = 0.0;
    double ebn0_db = 0.0;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    double ber = 0.0;
    std::uint64_t seed = 0;
};

double ebn0_from_esn0(double esn0_db, unsigned bits_per_symbol, double code_rate);

/// Sweep points in (snr, modulation, channel, coding) lexicographic order;
/// the position is the point's stream id.
std::vector<PointSpec> enumerate_points(const SimConfig& cfg);

/// Full transmit/receive chain for one point.
struct LinkResult {
    Bits sent;      ///< information bits
    Bits received;  ///< decoded information bits, same length
    std::uint64_t errors = 0;
    double mu = 0.0;  ///< pre-FFT LMS step size actually used (0 otherwise)
    LmsTrace trace;   ///< pre-FFT LMS trace (empty otherwise)
};

LinkResult run_link(const SimConfig& cfg, const PointSpec& point);

BerPoint run_point(const SimConfig& cfg, const PointSpec& point);
/// First modulation/channel/coding of cfg at snr_db, stream id 0.
BerPoint run_point(const SimConfig& cfg, double snr_db);

/// All points of the sweep, sorted by stream id. threads = 0 picks the
/// hardware concurrency; results do not depend on the thread count.
std::vector<BerPoint> run_sweep(const SimConfig& cfg, unsigned threads = 1);

inline constexpr std::string_view kCsvHeader =
    "modulation,channel,coding,receiver_mode,snr_db,ebn0_db,bits,errors,ber,seed";

void write_csv(std::ostream& out, const std::vector<BerPoint>& points);
std::vector<BerPoint> read_csv(std::istream& in);

/// Semilog BER-vs-Eb/N0 plot, one polyline per (modulation, channel, coding).
/// Zero-error points sit at 1 / (2 bits) with a hollow marker.
std::string render_svg(const std::vector<BerPoint>& points);
void emit_plot(const std::vector<BerPoint>& points, const std::filesystem::path& path);

/// Coded-vs-uncoded comparison for matching (modulation, channel) series:
/// BER ratio at shared Eb/N0 values and the Eb/N0 gap at fixed BER levels.
std::string comparison_summary(const std::vector<BerPoint>& points);

/// Unit-amplitude 1 kHz tone sampled at 4 kHz, 8-bit two's complement PCM,
/// MSB first, cycled to n_bits. n_bits must be a multiple of 8.
Bits generate_source(std::size_t n_bits);
/// Inverse of the PCM serialisation.
std::vector<std::int8_t> reconstruct_sine(std::span<const std::uint8_t> bits);

struct LmsTraceResult {
    double mu = 0.0;
    LmsTrace trace;
};

/// Pre-FFT equalizer trace on the first modulation/channel at snr_start_db.
LmsTraceResult run_lms_trace(const SimConfig& cfg);
void write_trace_csv(std::ostream& out, const LmsTrace& trace);

}  // namespace ofdmlms
