#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>

#include "ofdmlms/fec.hpp"
#include "ofdmlms/numerics.hpp"
#include "ofdmlms/sim.hpp"

using namespace ofdmlms;

namespace {

Bits random_bits(RngStream& rng, std::size_t n) {
    Bits b(n);
    for (auto& v : b) v = rng.bit();
    return b;
}

// Direct convolution: out_j[n] = XOR over taps k of g_j bit (6-k) times u[n-k].
Bits reference_encode(const Bits& u) {
    Bits padded = u;
    padded.resize(u.size() + 6, 0);
    Bits out;
    for (std::size_t n = 0; n < padded.size(); ++n) {
        for (std::uint32_t g : {0171u, 0133u}) {
            unsigned acc = 0;
            for (unsigned k = 0; k < 7; ++k) {
                if (((g >> (6 - k)) & 1u) && n >= k) acc ^= padded[n - k];
            }
            out.push_back(static_cast<std::uint8_t>(acc));
        }
    }
    return out;
}

std::size_t hamming(const Bits& a, const Bits& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

}  // namespace

TEST_CASE("code specification") {
    const ConvCodeSpec spec;
    CHECK(spec.states() == 64);
    CHECK(spec.tail_bits() == 6);
    CHECK((spec.g0 & 1u) == 1u);
    CHECK((spec.g0 >> 6) == 1u);
    CHECK((spec.g1 & 1u) == 1u);
    CHECK((spec.g1 >> 6) == 1u);
    CHECK_NOTHROW(spec.validate());
    ConvCodeSpec bad;
    bad.g1 = 0132;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("encoder examples") {
    const Bits zeros(10, 0);
    const Bits coded = conv_encode(zeros);
    CHECK(coded.size() == 32);
    for (auto b : coded) CHECK(b == 0);

    const Bits one{1};
    const Bits c1 = conv_encode(one);
    REQUIRE(c1.size() == 14);
    CHECK(c1[0] == 1);
    CHECK(c1[1] == 1);
    // Impulse response interleaves the two generator bit strings.
    CHECK(c1 == Bits{1, 1, 1, 0, 1, 1, 1, 1, 0, 0, 0, 1, 1, 1});
}

TEST_CASE("encoder matches direct convolution and is linear") {
    RngStream rng(11, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.next_u64() % 200;
        const Bits a = random_bits(rng, n), b = random_bits(rng, n);
        REQUIRE(conv_encode(a) == reference_encode(a));
        Bits x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = a[i] ^ b[i];
        const Bits ca = conv_encode(a), cb = conv_encode(b), cx = conv_encode(x);
        for (std::size_t i = 0; i < cx.size(); ++i) REQUIRE(cx[i] == (ca[i] ^ cb[i]));
    }
}

TEST_CASE("noiseless round trip") {
    RngStream rng(12, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const Bits u = random_bits(rng, rng.next_u64() % 1001);
        REQUIRE(viterbi_decode(conv_encode(u)) == u);
    }
    for (std::size_t len = 0; len <= 12; ++len) {
        for (std::uint32_t m = 0; m < (1u << len); ++m) {
            Bits u(len);
            for (std::size_t i = 0; i < len; ++i) u[i] = (m >> i) & 1u;
            REQUIRE(viterbi_decode(conv_encode(u)) == u);
        }
    }
}

TEST_CASE("every single coded-bit error is corrected") {
    RngStream rng(13, 0);
    for (int trial = 0; trial < 5; ++trial) {
        const Bits u = random_bits(rng, 64);
        const Bits c = conv_encode(u);
        for (std::size_t pos = 0; pos < c.size(); ++pos) {
            Bits r = c;
            r[pos] ^= 1u;
            REQUIRE(viterbi_decode(r) == u);
        }
    }
}

TEST_CASE("decoder is Hamming-optimal against exhaustive search") {
    RngStream rng(14, 0);
    const std::size_t len = 12;
    std::vector<Bits> codebook;
    for (std::uint32_t m = 0; m < (1u << len); ++m) {
        Bits u(len);
        for (std::size_t i = 0; i < len; ++i) u[i] = (m >> i) & 1u;
        codebook.push_back(reference_encode(u));
    }
    for (int trial = 0; trial < 50; ++trial) {
        Bits r = reference_encode(random_bits(rng, len));
        for (auto& b : r) {
            if (rng.uniform() < 0.12) b ^= 1u;
        }
        std::size_t best = std::numeric_limits<std::size_t>::max();
        for (const auto& c : codebook) best = std::min(best, hamming(c, r));
        const Bits decoded = viterbi_decode(r);
        REQUIRE(decoded.size() == len);
        CHECK(hamming(conv_encode(decoded), r) == best);
    }
}

TEST_CASE("decoder framing errors") {
    CHECK_THROWS_AS(viterbi_decode(Bits(13, 0)), FramingError);
    CHECK_THROWS_AS(viterbi_decode(Bits(10, 0)), FramingError);
    CHECK(viterbi_decode(Bits(12, 0)).empty());
}

TEST_CASE("coded beats uncoded at 6 dB Eb/N0 on AWGN") {
    SimConfig cfg;
    cfg.receiver = ReceiverMode::KnownChannelZf;
    cfg.n_bits = 100'000;
    // QPSK carries 2 bits per symbol; Es/N0 = Eb/N0 + 10 log10(2 R).
    cfg.codings = {Coding::None};
    const BerPoint uncoded = run_point(cfg, 6.0 + 10.0 * std::log10(2.0));
    cfg.codings = {Coding::ConvK7};
    const BerPoint coded = run_point(cfg, 6.0);
    CHECK(uncoded.ebn0_db == doctest::Approx(6.0));
    CHECK(coded.ebn0_db == doctest::Approx(6.0));
    MESSAGE("uncoded " << uncoded.ber << " coded " << coded.ber);
    CHECK(uncoded.bits >= 100'000);
    CHECK(coded.bits >= 100'000);
    CHECK(uncoded.errors > 0);
    CHECK(coded.ber < uncoded.ber);
}
