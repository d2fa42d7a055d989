#include "ofdmlms/ofdm.hpp"

#include <algorithm>
#include <cmath>

#include "ofdmlms/numerics.hpp"

namespace ofdmlms {

OfdmGrid::OfdmGrid(std::size_t fft_size, std::size_t active, std::size_t pilot_spacing,
                   std::size_t pilot_offset)
    : fft_size_(fft_size) {
    if (!is_power_of_two(fft_size) || fft_size < 8)
        throw ConfigError("fft size must be a power of two >= 8");
    if (active == 0 || active % 2 != 0 || active > fft_size - 2)
        throw ConfigError("active subcarrier count must be even and leave DC and Nyquist free");
    if (pilot_spacing == 0 || pilot_offset >= pilot_spacing)
        throw ConfigError("pilot offset must be below the pilot spacing");

    const std::size_t side = active / 2;
    for (std::size_t k = fft_size - side; k < fft_size; ++k) active_bins_.push_back(k);
    for (std::size_t k = 1; k <= side; ++k) active_bins_.push_back(k);

    for (std::size_t i = 0; i < active_bins_.size(); ++i) {
        if (i % pilot_spacing == pilot_offset) {
            pilot_pos_.push_back(i);
            pilot_bins_.push_back(active_bins_[i]);
        } else {
            data_pos_.push_back(i);
            data_bins_.push_back(active_bins_[i]);
        }
    }
    std::vector<bool> used(fft_size, false);
    for (auto b : active_bins_) used[b] = true;
    for (std::size_t k = 0; k < fft_size; ++k)
        if (!used[k]) null_bins_.push_back(k);
}

long OfdmGrid::signed_frequency(std::size_t bin) const noexcept {
    const auto b = static_cast<long>(bin);
    return bin > fft_size_ / 2 ? b - static_cast<long>(fft_size_) : b;
}

double OfdmGrid::tx_scale() const noexcept {
    return static_cast<double>(fft_size_) / std::sqrt(static_cast<double>(active_bins_.size()));
}

CVec assemble(std::span<const cplx> data, std::span<const cplx> pilots, const OfdmGrid& grid) {
    if (data.size() != grid.data_bins().size() || pilots.size() != grid.pilot_bins().size()) {
        throw FramingError("assemble: expected " + std::to_string(grid.data_bins().size()) +
                           " data and " + std::to_string(grid.pilot_bins().size()) +
                           " pilot symbols, got " + std::to_string(data.size()) + " and " +
                           std::to_string(pilots.size()));
    }
    const std::size_t n = grid.fft_size();
    CVec spectrum(n, cplx{});
    for (std::size_t i = 0; i < data.size(); ++i) spectrum[grid.data_bins()[i]] = data[i];
    for (std::size_t i = 0; i < pilots.size(); ++i) spectrum[grid.pilot_bins()[i]] = pilots[i];

    CVec body = ifft(spectrum);
    const double scale = grid.tx_scale();
    for (auto& v : body) v *= scale;

    const std::size_t cp = grid.cp_len();
    CVec out;
    out.reserve(n + cp);
    out.insert(out.end(), body.end() - static_cast<long>(cp), body.end());
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

CVec demodulate_spectrum(std::span<const cplx> symbol, const OfdmGrid& grid) {
    if (symbol.size() != grid.symbol_len()) {
        throw FramingError("disassemble: expected " + std::to_string(grid.symbol_len()) +
                           " samples, got " + std::to_string(symbol.size()));
    }
    CVec spectrum = fft(symbol.subspan(grid.cp_len()));
    const double inv = 1.0 / grid.tx_scale();
    for (auto& v : spectrum) v *= inv;
    return spectrum;
}

BinValues disassemble(std::span<const cplx> symbol, const OfdmGrid& grid) {
    const CVec spectrum = demodulate_spectrum(symbol, grid);
    BinValues out;
    out.data.reserve(grid.data_bins().size());
    out.pilots.reserve(grid.pilot_bins().size());
    for (auto b : grid.data_bins()) out.data.push_back(spectrum[b]);
    for (auto b : grid.pilot_bins()) out.pilots.push_back(spectrum[b]);
    return out;
}

CVec equalize_one_tap(std::span<const cplx> values, std::span<const cplx> response) {
    if (values.size() != response.size())
        throw FramingError("equalize_one_tap: value and response lengths differ");
    CVec out(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (std::abs(response[k]) < 1e-12) {
            throw SingularChannelError(k, "equalize_one_tap: channel response vanishes at bin " +
                                              std::to_string(k));
        }
        out[k] = values[k] / response[k];
    }
    return out;
}

CVec frequency_response(std::span<const cplx> taps, std::size_t fft_size) {
    if (taps.size() > fft_size) throw ConfigError("impulse response longer than the FFT");
    CVec padded(fft_size, cplx{});
    std::copy(taps.begin(), taps.end(), padded.begin());
    return fft(padded);
}

}  // namespace ofdmlms
