#include "ofdmlms/fec.hpp"

#include <bit>
#include <limits>
#include <string>
#include <vector>

namespace ofdmlms {

void ConvCodeSpec::validate() const {
    if (constraint_length < 2 || constraint_length > 16)
        throw ConfigError("constraint length must be within 2..16");
    const std::uint32_t top = 1u << (constraint_length - 1);
    for (auto g : {g0, g1}) {
        if (g >= (top << 1) || !(g & top) || !(g & 1u))
            throw ConfigError("generator polynomial must tap both ends of the register");
    }
}

namespace {

// Register layout: bit (K-1) holds the newest input, bits K-2..0 hold the
// state with the most recent past bit at bit K-2.
inline std::uint8_t parity(std::uint32_t v) { return static_cast<std::uint8_t>(std::popcount(v) & 1); }

struct Branch {
    std::uint8_t out0;
    std::uint8_t out1;
};

}  // namespace

Bits conv_encode(std::span<const std::uint8_t> bits, const ConvCodeSpec& spec) {
    spec.validate();
    const unsigned m = spec.memory();
    Bits out;
    out.reserve(2 * (bits.size() + m));
    std::uint32_t state = 0;
    auto push = [&](std::uint32_t b) {
        const std::uint32_t reg = (b << m) | state;
        out.push_back(parity(reg & spec.g0));
        out.push_back(parity(reg & spec.g1));
        state = reg >> 1;
    };
    for (auto b : bits) push(b & 1u);
    for (unsigned i = 0; i < m; ++i) push(0);
    return out;
}

Bits viterbi_decode(std::span<const std::uint8_t> coded, const ConvCodeSpec& spec) {
    spec.validate();
    const unsigned m = spec.memory();
    if (coded.size() % 2 != 0)
        throw FramingError("viterbi_decode: odd coded length " + std::to_string(coded.size()));
    if (coded.size() < 2 * m)
        throw FramingError("viterbi_decode: coded block shorter than the tail");

    const std::size_t n_states = spec.states();
    const std::size_t steps = coded.size() / 2;

    // Outputs for (state, input) transitions.
    std::vector<Branch> branch(n_states * 2);
    for (std::size_t s = 0; s < n_states; ++s) {
        for (std::uint32_t b = 0; b < 2; ++b) {
            const std::uint32_t reg = (b << m) | static_cast<std::uint32_t>(s);
            branch[s * 2 + b] = {parity(reg & spec.g0), parity(reg & spec.g1)};
        }
    }

    constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max() / 2;
    std::vector<std::uint32_t> metric(n_states, kInf), next(n_states);
    metric[0] = 0;
    // survivor[t * n_states + s] = predecessor state of s at step t.
    std::vector<std::uint32_t> survivor(steps * n_states);

    for (std::size_t t = 0; t < steps; ++t) {
        const std::uint8_t r0 = coded[2 * t] & 1u;
        const std::uint8_t r1 = coded[2 * t + 1] & 1u;
        for (std::size_t ns = 0; ns < n_states; ++ns) {
            // next state = reg >> 1 with reg = (b << m) | s, so b is the top
            // bit of ns and the two predecessors differ in their low bit.
            const std::uint32_t b = static_cast<std::uint32_t>(ns >> (m - 1)) & 1u;
            const std::uint32_t base = static_cast<std::uint32_t>((ns << 1) & (n_states - 1));
            std::uint32_t best = kInf;
            std::uint32_t best_prev = base;
            for (std::uint32_t low = 0; low < 2; ++low) {
                const std::uint32_t prev = base | low;
                if (metric[prev] >= kInf) continue;
                const Branch& br = branch[prev * 2 + b];
                const std::uint32_t cand = metric[prev] + (br.out0 ^ r0) + (br.out1 ^ r1);
                if (cand < best) {
                    best = cand;
                    best_prev = prev;
                }
            }
            next[ns] = best;
            survivor[t * n_states + ns] = best_prev;
        }
        metric.swap(next);
    }

    Bits decoded(steps);
    std::uint32_t s = 0;
    for (std::size_t t = steps; t-- > 0;) {
        decoded[t] = static_cast<std::uint8_t>((s >> (m - 1)) & 1u);
        s = survivor[t * n_states + s];
    }
    decoded.resize(steps - m);
    return decoded;
}

}  // namespace ofdmlms
