#pragma once

#include <span>
#include <vector>

#include "ofdmlms/common.hpp"

namespace ofdmlms {

/// Subcarrier layout of one OFDM symbol.
///
/// Bins 0..fft_size-1 with DC at 0. The active band is the `active` bins
/// nearest DC on each side (DC excluded), listed in ascending frequency
/// order: negative frequencies first. Every `pilot_spacing`-th active bin,
/// starting at `pilot_offset`, carries a pilot.
class OfdmGrid {
public:
    static constexpr std::size_t kDefaultFftSize = 256;
    static constexpr std::size_t kDefaultActive = 200;
    static constexpr std::size_t kDefaultPilotSpacing = 8;
    static constexpr std::size_t kDefaultPilotOffset = 4;

    OfdmGrid() : OfdmGrid(kDefaultFftSize, kDefaultActive, kDefaultPilotSpacing, kDefaultPilotOffset) {}
    OfdmGrid(std::size_t fft_size, std::size_t active, std::size_t pilot_spacing,
             std::size_t pilot_offset);

    std::size_t fft_size() const noexcept { return fft_size_; }
    std::size_t cp_len() const noexcept { return fft_size_ / 4; }
    std::size_t symbol_len() const noexcept { return fft_size_ + cp_len(); }

    const std::vector<std::size_t>& active_bins() const noexcept { return active_bins_; }
    const std::vector<std::size_t>& data_bins() const noexcept { return data_bins_; }
    const std::vector<std::size_t>& pilot_bins() const noexcept { return pilot_bins_; }
    const std::vector<std::size_t>& null_bins() const noexcept { return null_bins_; }

    /// Positions of data / pilot bins within active_bins().
    const std::vector<std::size_t>& data_positions() const noexcept { return data_pos_; }
    const std::vector<std::size_t>& pilot_positions() const noexcept { return pilot_pos_; }

    /// Signed subcarrier frequency of a bin (bin k > N/2 maps to k - N).
    long signed_frequency(std::size_t bin) const noexcept;

    /// Factor applied after the inverse DFT so the time signal has unit mean
    /// power for unit-energy subcarrier symbols.
    double tx_scale() const noexcept;

    static cplx pilot_value() noexcept { return {1.0, 0.0}; }

private:
    std::size_t fft_size_;
    std::vector<std::size_t> active_bins_;
    std::vector<std::size_t> data_bins_;
    std::vector<std::size_t> pilot_bins_;
    std::vector<std::size_t> null_bins_;
    std::vector<std::size_t> data_pos_;
    std::vector<std::size_t> pilot_pos_;
};

struct BinValues {
    CVec data;
    CVec pilots;
};

/// Data and pilot symbols onto their bins, inverse DFT, scale, cyclic prefix.
CVec assemble(std::span<const cplx> data, std::span<const cplx> pilots, const OfdmGrid& grid);

/// Strip the cyclic prefix, forward DFT, undo the transmit scale and pick
/// out the data and pilot bins.
BinValues disassemble(std::span<const cplx> symbol, const OfdmGrid& grid);

/// Same as disassemble but returns the full fft_size spectrum.
CVec demodulate_spectrum(std::span<const cplx> symbol, const OfdmGrid& grid);

/// Zero-forcing: values[k] / response[k]. Throws SingularChannelError when
/// |response[k]| < 1e-12.
CVec equalize_one_tap(std::span<const cplx> values, std::span<const cplx> response);

/// Frequency response of an FIR impulse response on an fft_size grid.
CVec frequency_response(std::span<const cplx> taps, std::size_t fft_size);

}  // namespace ofdmlms
