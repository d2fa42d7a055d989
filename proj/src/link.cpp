#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "ofdmlms/fec.hpp"
#include "ofdmlms/numerics.hpp"
#include "ofdmlms/ofdm.hpp"
#include "ofdmlms/sim.hpp"

namespace ofdmlms {

Bits generate_source(std::size_t n_bits) {
    if (n_bits % 8 != 0) throw ConfigError("generate_source: bit count must be a multiple of 8");
    constexpr double kToneHz = 1000.0;
    constexpr double kSampleRateHz = 4000.0;
    constexpr std::size_t kPeriod = 4;  // samples per tone period
    std::array<std::int8_t, kPeriod> period{};
    for (std::size_t n = 0; n < kPeriod; ++n) {
        const double s = std::sin(2.0 * std::numbers::pi * kToneHz * static_cast<double>(n) / kSampleRateHz);
        period[n] = static_cast<std::int8_t>(std::lround(127.0 * s));
    }
    Bits out;
    out.reserve(n_bits);
    for (std::size_t i = 0; out.size() < n_bits; ++i) {
        const auto byte = static_cast<std::uint8_t>(period[i % kPeriod]);
        for (int b = 7; b >= 0; --b) out.push_back(static_cast<std::uint8_t>((byte >> b) & 1u));
    }
    return out;
}

std::vector<std::int8_t> reconstruct_sine(std::span<const std::uint8_t> bits) {
    std::vector<std::int8_t> out;
    out.reserve(bits.size() / 8);
    for (std::size_t i = 0; i + 8 <= bits.size(); i += 8) {
        std::uint8_t byte = 0;
        for (std::size_t b = 0; b < 8; ++b) byte = static_cast<std::uint8_t>((byte << 1) | (bits[i + b] & 1u));
        out.push_back(static_cast<std::int8_t>(byte));
    }
    return out;
}

namespace {

struct Frame {
    CVec signal;                   // all OFDM symbols, training first
    std::vector<CVec> data;        // per symbol, data-bin symbols
    std::size_t training_symbols;  // leading symbols that carry training
};

Frame build_frame(const Bits& coded, const Bits& training_bits, std::size_t training_symbols,
                  const Constellation& con, const OfdmGrid& grid) {
    const std::size_t per_symbol = grid.data_bins().size() * con.bits_per_symbol();
    const CVec pilots(grid.pilot_bins().size(), OfdmGrid::pilot_value());
    const std::size_t data_symbols = (coded.size() + per_symbol - 1) / per_symbol;

    Frame f;
    f.training_symbols = training_symbols;
    f.signal.reserve((training_symbols + data_symbols) * grid.symbol_len());
    auto push = [&](std::span<const std::uint8_t> bits) {
        CVec syms = con.map(bits);
        const CVec time = assemble(syms, pilots, grid);
        f.signal.insert(f.signal.end(), time.begin(), time.end());
        f.data.push_back(std::move(syms));
    };
    for (std::size_t s = 0; s < training_symbols; ++s)
        push(std::span(training_bits).subspan(s * per_symbol, per_symbol));

    // Final payload is zero padded; pad bits never reach the error count.
    Bits chunk(per_symbol);
    for (std::size_t s = 0; s < data_symbols; ++s) {
        const std::size_t begin = s * per_symbol;
        const std::size_t n = std::min(per_symbol, coded.size() - begin);
        std::fill(chunk.begin(), chunk.end(), std::uint8_t{0});
        std::copy_n(coded.begin() + static_cast<long>(begin), n, chunk.begin());
        push(chunk);
    }
    return f;
}

// Channel response on the data bins seen by one received symbol.
CVec data_response(const CVec& taps, const OfdmGrid& grid) {
    const CVec h = frequency_response(taps, grid.fft_size());
    CVec out;
    out.reserve(grid.data_bins().size());
    for (auto b : grid.data_bins()) out.push_back(h[b]);
    return out;
}

}  // namespace

LinkResult run_link(const SimConfig& cfg, const PointSpec& point) {
    cfg.validate();
    const Constellation con(point.modulation);
    const OfdmGrid grid;
    const ChannelConfig chan = cfg.channel_config(point.channel);
    RngStream rng(cfg.seed, point.index);

    LinkResult result;
    if (cfg.source == SourceKind::Sine) {
        result.sent = generate_source(cfg.n_bits);
    } else {
        result.sent.resize(cfg.n_bits);
        for (auto& b : result.sent) b = rng.bit();
    }
    const Bits coded = point.coding == Coding::ConvK7 ? conv_encode(result.sent) : result.sent;

    const std::size_t per_symbol = grid.data_bins().size() * con.bits_per_symbol();
    const std::size_t training_symbols = cfg.lms.training_symbols;
    Bits training_bits(training_symbols * per_symbol);
    for (auto& b : training_bits) b = rng.bit();

    const Frame frame = build_frame(coded, training_bits, training_symbols, con, grid);
    const std::size_t sym_len = grid.symbol_len();
    const std::size_t n_symbols = frame.data.size();

    // Channel.
    ChannelRealization realization;
    CVec rx;
    switch (point.channel) {
        case ChannelKind::AwgnOnly:
            rx = frame.signal;
            break;
        case ChannelKind::StaticMultipath:
            rx = static_multipath(frame.signal, chan.taps0);
            break;
        case ChannelKind::RicianFading:
            realization = rician_taps(chan, frame.signal.size(), rng);
            rx = apply_fading(frame.signal, realization);
            break;
    }
    // Es/N0 per data subcarrier: the noise spreads over all fft_size bins
    // while the unit signal power occupies only the active ones.
    const double bandwidth = static_cast<double>(grid.fft_size()) / static_cast<double>(grid.active_bins().size());
    rx = add_awgn(rx, point.snr_db, bandwidth, rng);

    // Receiver: equalized data-bin symbols for every OFDM symbol.
    std::vector<CVec> eq_data(n_symbols);
    switch (cfg.receiver) {
        case ReceiverMode::KnownChannelZf: {
            const CVec ones(grid.data_bins().size(), cplx{1.0, 0.0});
            const CVec static_h = point.channel == ChannelKind::StaticMultipath ? data_response(chan.taps0, grid) : ones;
            for (std::size_t s = 0; s < n_symbols; ++s) {
                const auto bins = disassemble(std::span(rx).subspan(s * sym_len, sym_len), grid);
                if (point.channel == ChannelKind::RicianFading) {
                    const CVec taps = realization.mean_taps(s * sym_len + grid.cp_len(), grid.fft_size());
                    eq_data[s] = equalize_one_tap(bins.data, data_response(taps, grid));
                } else {
                    eq_data[s] = equalize_one_tap(bins.data, static_h);
                }
            }
            break;
        }
        case ReceiverMode::PilotFdLms: {
            PilotLmsEstimator est(grid, cfg.lms.pilot_mu);
            const CVec pilots(grid.pilot_bins().size(), OfdmGrid::pilot_value());
            for (std::size_t s = 0; s < n_symbols; ++s) {
                const auto bins = disassemble(std::span(rx).subspan(s * sym_len, sym_len), grid);
                est.update(bins.pilots, pilots);
                eq_data[s] = equalize_one_tap(bins.data, est.data_estimates());
            }
            break;
        }
        case ReceiverMode::PreFftLms: {
            const std::span<const cplx> training(frame.signal.data(), training_symbols * sym_len);
            PreFftOptions opts;
            opts.taps = cfg.lms.taps;
            opts.mu = cfg.lms.mu ? *cfg.lms.mu : select_step_size(rx, training, cfg.lms.taps);
            opts.mode = AdaptMode::TrainThenDecisionDirected;
            opts.block_len = sym_len;
            const CVec pilots(grid.pilot_bins().size(), OfdmGrid::pilot_value());
            opts.decide = [&](std::span<const cplx> block) {
                auto bins = disassemble(block, grid);
                for (auto& v : bins.data) v = con.slice(v);
                return assemble(bins.data, pilots, grid);
            };
            auto res = equalize_pre_fft(rx, training, opts);
            for (std::size_t s = 0; s < n_symbols; ++s)
                eq_data[s] = disassemble(std::span(res.equalized).subspan(s * sym_len, sym_len), grid).data;
            result.mu = opts.mu;
            result.trace = std::move(res.trace);
            break;
        }
    }

    Bits detected;
    detected.reserve((n_symbols - training_symbols) * per_symbol);
    for (std::size_t s = training_symbols; s < n_symbols; ++s) {
        const Bits b = con.demap_hard(eq_data[s]);
        detected.insert(detected.end(), b.begin(), b.end());
    }
    detected.resize(coded.size());
    result.received = point.coding == Coding::ConvK7 ? viterbi_decode(detected) : std::move(detected);

    for (std::size_t i = 0; i < result.sent.size(); ++i) result.errors += (result.sent[i] != result.received[i]);
    return result;
}

BerPoint run_point(const SimConfig& cfg, const PointSpec& point) {
    const LinkResult link = run_link(cfg, point);
    const Constellation con(point.modulation);
    BerPoint p;
    p.modulation = point.modulation;
    p.channel = point.channel;
    p.coding = point.coding;
    p.receiver = cfg.receiver;
    p.snr_db = point.snr_db;
    p.ebn0_db = ebn0_from_esn0(point.snr_db, con.bits_per_symbol(), code_rate(point.coding));
    p.bits = link.sent.size();
    p.errors = link.errors;
    p.ber = static_cast<double>(p.errors) / static_cast<double>(p.bits);
    p.seed = cfg.seed;
    return p;
}

BerPoint run_point(const SimConfig& cfg, double snr_db) {
    cfg.validate();
    return run_point(cfg, PointSpec{cfg.modulations.front(), cfg.channels.front(), cfg.codings.front(), snr_db, 0});
}

std::vector<BerPoint> run_sweep(const SimConfig& cfg, unsigned threads) {
    cfg.validate();
    const auto specs = enumerate_points(cfg);
    std::vector<BerPoint> out(specs.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, specs.size())));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) {
            try {
                out[i] = run_point(cfg, specs[i]);
            } catch (const SimError& e) {
                const auto& s = specs[i];
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::make_exception_ptr(SimError(
                        std::string(e.what()) + " [modulation=" + std::string(to_string(s.modulation)) +
                        " channel=" + std::string(to_string(s.channel)) + " coding=" +
                        std::string(to_string(s.coding)) + " receiver_mode=" +
                        std::string(to_string(cfg.receiver)) + " snr_db=" + std::to_string(s.snr_db) +
                        " seed=" + std::to_string(cfg.seed) + "]"));
                }
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

LmsTraceResult run_lms_trace(const SimConfig& cfg) {
    SimConfig c = cfg;
    c.receiver = ReceiverMode::PreFftLms;
    c.validate();
    const PointSpec point{c.modulations.front(), c.channels.front(), c.codings.front(), c.snr_start_db, 0};
    LinkResult link = run_link(c, point);
    return {link.mu, std::move(link.trace)};
}

}  // namespace ofdmlms
