#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ofdmlms/common.hpp"

namespace ofdmlms {

enum class Modulation { QPSK, PSK16, PSK64, PSK256, QAM16, QAM64, QAM256 };

inline constexpr Modulation kAllModulations[] = {
    Modulation::QPSK,  Modulation::PSK16, Modulation::PSK64, Modulation::PSK256,
    Modulation::QAM16, Modulation::QAM64, Modulation::QAM256};

std::string_view to_string(Modulation m);
/// Accepts "qpsk", "16psk", "64psk", "256psk", "16qam", "64qam", "256qam"
/// (case-insensitive, optional '-' between order and family).
Modulation parse_modulation(std::string_view name);

std::uint32_t gray_encode(std::uint32_t v) noexcept;

/// Gray-labelled constellation with unit mean symbol energy.
///
/// PSK points sit on the unit ring at angle 2*pi*k/M with label gray(k).
/// Square QAM (QPSK is treated as 4-QAM) uses per-axis levels
/// (L-1-2p)*scale, p = 0..L-1, labelled gray(p); the I-axis label forms the
/// high half of the symbol label. Points are stored by position index:
/// PSK position k, QAM position pI*L + pQ.
class Constellation {
public:
    explicit Constellation(Modulation m);

    Modulation modulation() const noexcept { return modulation_; }
    bool is_psk() const noexcept { return psk_; }
    std::size_t order() const noexcept { return points_.size(); }
    unsigned bits_per_symbol() const noexcept { return bits_per_symbol_; }

    const CVec& points() const noexcept { return points_; }
    const std::vector<std::uint32_t>& labels() const noexcept { return labels_; }
    const cplx& point_for_label(std::uint32_t label) const { return points_[index_of_label_[label]]; }

    /// Groups of bits_per_symbol bits, MSB first. Throws FramingError when
    /// the bit count is not a multiple of bits_per_symbol.
    CVec map(std::span<const std::uint8_t> bits) const;

    /// Minimum-distance decision; ties go to the lowest point index.
    Bits demap_hard(std::span<const cplx> symbols) const;

    /// Position index of the nearest point.
    std::size_t decide(const cplx& s) const;

    /// Nearest constellation point (used for decision-directed adaptation).
    cplx slice(const cplx& s) const { return points_[decide(s)]; }

private:
    Modulation modulation_;
    bool psk_;
    unsigned bits_per_symbol_;
    std::size_t levels_ = 0;  // per-axis level count for QAM
    double scale_ = 1.0;
    CVec points_;
    std::vector<std::uint32_t> labels_;
    std::vector<std::size_t> index_of_label_;
};

}  // namespace ofdmlms
