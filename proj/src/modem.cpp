#include "ofdmlms/modem.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <numbers>

namespace ofdmlms {

namespace {

struct ModInfo {
    Modulation mod;
    std::string_view name;
    bool psk;
    std::size_t order;
};

constexpr std::array<ModInfo, 7> kModInfo{{
    {Modulation::QPSK, "qpsk", false, 4},
    {Modulation::PSK16, "16psk", true, 16},
    {Modulation::PSK64, "64psk", true, 64},
    {Modulation::PSK256, "256psk", true, 256},
    {Modulation::QAM16, "16qam", false, 16},
    {Modulation::QAM64, "64qam", false, 64},
    {Modulation::QAM256, "256qam", false, 256},
}};

const ModInfo& info(Modulation m) {
    for (const auto& i : kModInfo)
        if (i.mod == m) return i;
    throw ConfigError("unknown modulation");
}

}  // namespace

std::string_view to_string(Modulation m) { return info(m).name; }

Modulation parse_modulation(std::string_view name) {
    std::string key;
    for (char c : name) {
        if (c == '-' || c == '_' || std::isspace(static_cast<unsigned char>(c))) continue;
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (key == "4qam") key = "qpsk";
    for (const auto& i : kModInfo)
        if (i.name == key) return i.mod;
    throw ConfigError("unknown modulation '" + std::string(name) + "'");
}

std::uint32_t gray_encode(std::uint32_t v) noexcept { return v ^ (v >> 1); }

Constellation::Constellation(Modulation m) : modulation_(m) {
    const auto& mi = info(m);
    psk_ = mi.psk;
    const std::size_t order = mi.order;
    bits_per_symbol_ = static_cast<unsigned>(std::countr_zero(order));
    points_.resize(order);
    labels_.resize(order);
    index_of_label_.resize(order);

    if (psk_) {
        for (std::size_t k = 0; k < order; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(order);
            points_[k] = std::polar(1.0, angle);
            labels_[k] = gray_encode(static_cast<std::uint32_t>(k));
        }
    } else {
        levels_ = std::size_t{1} << (bits_per_symbol_ / 2);
        const double l = static_cast<double>(levels_);
        // Mean energy of the square grid is 2(L^2-1)/3.
        scale_ = 1.0 / std::sqrt(2.0 * (l * l - 1.0) / 3.0);
        const unsigned half = bits_per_symbol_ / 2;
        for (std::size_t pi = 0; pi < levels_; ++pi) {
            for (std::size_t pq = 0; pq < levels_; ++pq) {
                const std::size_t idx = pi * levels_ + pq;
                const double re = (l - 1.0 - 2.0 * static_cast<double>(pi)) * scale_;
                const double im = (l - 1.0 - 2.0 * static_cast<double>(pq)) * scale_;
                points_[idx] = {re, im};
                labels_[idx] = (gray_encode(static_cast<std::uint32_t>(pi)) << half) |
                               gray_encode(static_cast<std::uint32_t>(pq));
            }
        }
    }
    for (std::size_t i = 0; i < order; ++i) index_of_label_[labels_[i]] = i;
}

CVec Constellation::map(std::span<const std::uint8_t> bits) const {
    if (bits.size() % bits_per_symbol_ != 0) {
        throw FramingError("bit count " + std::to_string(bits.size()) +
                           " is not a multiple of " + std::to_string(bits_per_symbol_) +
                           " bits per symbol");
    }
    CVec out;
    out.reserve(bits.size() / bits_per_symbol_);
    for (std::size_t i = 0; i < bits.size(); i += bits_per_symbol_) {
        std::uint32_t label = 0;
        for (unsigned b = 0; b < bits_per_symbol_; ++b) label = (label << 1) | (bits[i + b] & 1u);
        out.push_back(points_[index_of_label_[label]]);
    }
    return out;
}

std::size_t Constellation::decide(const cplx& s) const {
    // Only the points around the coarse cell can be nearest; scanning them in
    // ascending index order keeps the lowest-index tie rule.
    std::array<std::size_t, 9> cand{};
    std::size_t n = 0;
    if (psk_) {
        const auto m = static_cast<long>(points_.size());
        const double pos = std::arg(s) / (2.0 * std::numbers::pi) * static_cast<double>(m);
        const long k = static_cast<long>(std::lround(pos));
        for (long d = -1; d <= 1; ++d) cand[n++] = static_cast<std::size_t>(((k + d) % m + m) % m);
    } else {
        const auto l = static_cast<long>(levels_);
        auto axis = [&](double v) {
            const double p = ((static_cast<double>(l) - 1.0) - v / scale_) / 2.0;
            return std::clamp(static_cast<long>(std::lround(p)), 0L, l - 1);
        };
        const long pi = axis(s.real());
        const long pq = axis(s.imag());
        for (long di = -1; di <= 1; ++di) {
            for (long dq = -1; dq <= 1; ++dq) {
                const long a = pi + di;
                const long b = pq + dq;
                if (a < 0 || a >= l || b < 0 || b >= l) continue;
                cand[n++] = static_cast<std::size_t>(a * l + b);
            }
        }
    }
    std::sort(cand.begin(), cand.begin() + static_cast<long>(n));
    std::size_t best = cand[0];
    double best_d = std::norm(s - points_[best]);
    for (std::size_t i = 1; i < n; ++i) {
        const double d = std::norm(s - points_[cand[i]]);
        if (d < best_d) {
            best_d = d;
            best = cand[i];
        }
    }
    return best;
}

Bits Constellation::demap_hard(std::span<const cplx> symbols) const {
    Bits out;
    out.reserve(symbols.size() * bits_per_symbol_);
    for (const auto& s : symbols) {
        const std::uint32_t label = labels_[decide(s)];
        for (int b = static_cast<int>(bits_per_symbol_) - 1; b >= 0; --b)
            out.push_back(static_cast<std::uint8_t>((label >> b) & 1u));
    }
    return out;
}

}  // namespace ofdmlms
