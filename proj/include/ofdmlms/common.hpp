#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ofdmlms {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using Bits = std::vector<std::uint8_t>;

/// Base class for every error raised by the simulator.
class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters: bad FFT length, Doppler above Nyquist, malformed config.
class ConfigError : public SimError {
public:
    using SimError::SimError;
};

/// Sequence lengths that do not line up with the frame structure.
class FramingError : public SimError {
public:
    using SimError::SimError;
};

class SingularChannelError : public SimError {
public:
    SingularChannelError(std::size_t bin, const std::string& what)
        : SimError(what), bin_(bin) {}
    std::size_t bin() const noexcept { return bin_; }

private:
    std::size_t bin_;
};

/// LMS weights left the finite/bounded region.
class DivergenceError : public SimError {
public:
    DivergenceError(std::uint64_t step, double mu, const std::string& what)
        : SimError(what), step_(step), mu_(mu) {}
    std::uint64_t step() const noexcept { return step_; }
    double mu() const noexcept { return mu_; }

private:
    std::uint64_t step_;
    double mu_;
};

}  // namespace ofdmlms
