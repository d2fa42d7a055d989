#include "ofdmlms/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ofdmlms {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

namespace {

void check_length(std::size_t n) {
    if (n < 2 || !is_power_of_two(n)) {
        throw ConfigError("fft length " + std::to_string(n) + " is not a power of two >= 2");
    }
}

// In-place iterative radix-2 decimation in time. sign = -1 forward, +1 inverse.
void transform(CVec& a, int sign) {
    const std::size_t n = a.size();

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // Twiddles taken straight from std::polar so the error does not grow
    // with the recurrence depth.
    CVec twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        twiddle[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                                         static_cast<double>(n));
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = a[start + k];
                const cplx v = a[start + k + half] * twiddle[k * stride];
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
    }
}

}  // namespace

CVec fft(std::span<const cplx> x) {
    check_length(x.size());
    CVec out(x.begin(), x.end());
    transform(out, -1);
    return out;
}

CVec ifft(std::span<const cplx> X) {
    check_length(X.size());
    CVec out(X.begin(), X.end());
    transform(out, +1);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto& v : out) v *= scale;
    return out;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
}

// std::uniform_real_distribution is not specified bit-exactly across
// standard libraries, so the conversion is done by hand.
double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double RngStream::uniform_open() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

cplx RngStream::complex_gaussian(double variance) {
    const auto [a, b] = gaussian_pair(*this);
    const double s = std::sqrt(variance / 2.0);
    return {s * a, s * b};
}

std::pair<double, double> gaussian_pair(RngStream& rng) {
    const double u1 = rng.uniform_open();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

double q_function(double x) {
    // Near 1 the complement rounds more finely than erfc's value near 2.
    if (x < 0.0) return 1.0 - 0.5 * std::erfc(-x / std::numbers::sqrt2);
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

Interval binomial_ci(std::uint64_t errors, std::uint64_t trials, double sigmas) {
    const double p = static_cast<double>(errors) / static_cast<double>(trials);
    const double half = sigmas * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    return {std::clamp(p - half, 0.0, 1.0), std::clamp(p + half, 0.0, 1.0)};
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace ofdmlms
