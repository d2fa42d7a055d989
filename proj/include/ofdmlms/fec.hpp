#pragma once

#include <cstdint>
#include <span>

#include "ofdmlms/common.hpp"

namespace ofdmlms {

/// Rate-1/2 feedforward convolutional code.
struct ConvCodeSpec {
    unsigned constraint_length = 7;
    /// Generator polynomials in octal notation; the MSB taps the newest bit.
    std::uint32_t g0 = 0171;
    std::uint32_t g1 = 0133;

    unsigned memory() const noexcept { return constraint_length - 1; }
    std::size_t states() const noexcept { return std::size_t{1} << memory(); }
    std::size_t tail_bits() const noexcept { return memory(); }
    /// Both generators must tap the newest and the oldest register cell.
    void validate() const;
};

/// Encodes from the zero state, appends memory() zero tail bits and emits
/// (g0, g1) output pairs: 2 * (|bits| + memory()) coded bits.
Bits conv_encode(std::span<const std::uint8_t> bits, const ConvCodeSpec& spec = {});

/// Hard-decision Viterbi decoding with Hamming branch metrics, terminated in
/// the zero state. Returns the message without the tail. Metric ties pick
/// the lower-numbered predecessor state. Throws FramingError for an odd
/// length or fewer than 2 * memory() coded bits.
Bits viterbi_decode(std::span<const std::uint8_t> coded, const ConvCodeSpec& spec = {});

}  // namespace ofdmlms
