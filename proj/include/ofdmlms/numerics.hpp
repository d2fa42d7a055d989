#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

#include "ofdmlms/common.hpp"

namespace ofdmlms {

/// Forward DFT, X[k] = sum_n x[n] exp(-j 2 pi k n / N), unnormalized.
/// N must be a power of two and at least 2; throws ConfigError otherwise.
CVec fft(std::span<const cplx> x);

/// Inverse DFT with the 1/N factor.
CVec ifft(std::span<const cplx> X);

bool is_power_of_two(std::size_t n) noexcept;

/// Seeded random source. A (master_seed, stream_id) pair always yields the
/// same sequence; workers take distinct stream ids.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform on (0, 1].
    double uniform_open();
    std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }
    /// Circular complex Gaussian with E|z|^2 = variance.
    cplx complex_gaussian(double variance);

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

/// Two independent N(0,1) variates via Box-Muller; consumes exactly two
/// uniforms.
std::pair<double, double> gaussian_pair(RngStream& rng);

/// Gaussian tail probability Q(x) = 0.5 erfc(x / sqrt 2).
double q_function(double x);

struct Interval {
    double low;
    double high;
};

/// Normal-approximation binomial interval p +- sigmas*sqrt(p(1-p)/trials),
/// clamped to [0, 1].
Interval binomial_ci(std::uint64_t errors, std::uint64_t trials, double sigmas);

double db_to_linear(double db);

}  // namespace ofdmlms
