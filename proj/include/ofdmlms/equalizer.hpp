#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ofdmlms/common.hpp"
#include "ofdmlms/ofdm.hpp"

namespace ofdmlms {

/// Any |w_i| above this after an update counts as divergence.
inline constexpr double kDivergenceLimit = 1e6;

/// Weight vector, step size and update count of one LMS filter.
struct LmsState {
    CVec weights;
    double mu = 0.0;
    std::uint64_t updates = 0;

    LmsState() = default;
    LmsState(std::size_t taps, double step_size) : weights(taps, cplx{}), mu(step_size) {}

    std::size_t taps() const noexcept { return weights.size(); }
};

struct LmsStepResult {
    cplx y;  ///< filter output w^H x
    cplx e;  ///< error d - y
};

/// Filter output y = w^H x.
cplx lms_output(std::span<const cplx> weights, std::span<const cplx> x);

/// One complex LMS iteration:
///   y = w^H x,  e = d - y,  w <- w + mu * x * conj(e).
/// Throws FramingError if |x| differs from the tap count and DivergenceError
/// if the updated weights are non-finite or exceed kDivergenceLimit.
LmsStepResult lms_step(LmsState& state, std::span<const cplx> x, cplx d);

/// Rank-one estimates R = x x^H (row-major, N x N) and r = conj(d) x. With
/// these, lms_step's update equals w + mu (r - R w).
struct InstantaneousCovariance {
    std::size_t n = 0;
    CVec R;
    CVec r;

    cplx at(std::size_t row, std::size_t col) const { return R[row * n + col]; }
};

InstantaneousCovariance lms_instantaneous_covariance(std::span<const cplx> x, cplx d);

struct LmsTrace {
    std::vector<double> sq_error;  ///< |e(n)|^2 per update
    CVec final_weights;
};

/// Mean of consecutive non-overlapping windows of `window` samples; a short
/// tail window is dropped.
std::vector<double> windowed_mean(std::span<const double> values, std::size_t window);

enum class AdaptMode { TrainThenFreeze, TrainThenDecisionDirected };

/// Maps a block of equalizer outputs to the desired block used for
/// decision-directed adaptation (e.g. demodulate, slice, re-modulate).
using BlockDecision = std::function<CVec(std::span<const cplx>)>;

struct PreFftOptions {
    std::size_t taps = 11;
    double mu = 1e-2;
    AdaptMode mode = AdaptMode::TrainThenFreeze;
    /// Block length for decision-directed adaptation (one OFDM symbol).
    std::size_t block_len = 0;
    BlockDecision decide;
};

struct PreFftResult {
    CVec equalized;
    LmsTrace trace;
};

/// Time-domain transversal LMS equalizer ahead of the FFT.
///
/// Output n uses the regressor x_i = rx[n + D - i], i = 0..taps-1, with
/// decision delay D = taps / 2 and zeros outside the signal, so y[n]
/// estimates the transmitted sample n. The first |training| outputs adapt
/// towards the training samples. Afterwards the weights either stay frozen
/// or, block by block, the block is filtered with the current weights,
/// passed through `decide`, and the result used as the desired signal for
/// adaptation over the same block.
PreFftResult equalize_pre_fft(std::span<const cplx> rx, std::span<const cplx> training,
                              const PreFftOptions& opts);

inline constexpr std::array<double, 5> kStepSizeCandidates{1e-4, 3e-4, 1e-3, 3e-3, 1e-2};

/// Trains a fresh equalizer per candidate step size and returns the one with
/// the lowest mean |e|^2 over the last 100 training steps. Diverging
/// candidates are skipped; throws DivergenceError if all diverge.
double select_step_size(std::span<const cplx> rx, std::span<const cplx> training, std::size_t taps,
                        std::span<const double> candidates = kStepSizeCandidates);

/// Linear interpolation of pilot-bin estimates onto every active bin, in
/// signed-frequency coordinates. Bins outside the outermost pilots take the
/// nearest pilot value. Result is indexed like grid.active_bins().
CVec interpolate_pilots(std::span<const cplx> pilot_estimates, const OfdmGrid& grid);

/// Comb-pilot channel estimator: one single-tap LMS filter per pilot bin,
/// regressor = known pilot, desired = received pilot, so conj(w) converges
/// to the channel response at that bin.
class PilotLmsEstimator {
public:
    PilotLmsEstimator(const OfdmGrid& grid, double mu);

    /// Adapts on one OFDM symbol's pilots and returns the interpolated
    /// estimate over all active bins. Divergence is reported with the bin.
    CVec update(std::span<const cplx> pilot_rx, std::span<const cplx> pilot_tx);

    /// Current estimate at the pilot bins.
    CVec pilot_estimates() const;
    /// Current estimate on every active bin.
    CVec active_estimates() const { return interpolate_pilots(pilot_estimates(), *grid_); }
    /// Current estimate on the data bins, in grid.data_bins() order.
    CVec data_estimates() const;

    const std::vector<LmsState>& bank() const noexcept { return bank_; }

private:
    const OfdmGrid* grid_;
    std::vector<LmsState> bank_;
};

/// Free-function form: adapts `bank` (one state per pilot bin) on one symbol
/// and returns the interpolated estimate over all active bins.
CVec estimate_pilot_lms(std::span<const cplx> pilot_rx, std::span<const cplx> pilot_tx,
                        const OfdmGrid& grid, std::vector<LmsState>& bank);

}  // namespace ofdmlms
