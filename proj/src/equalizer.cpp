#include "ofdmlms/equalizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ofdmlms {

cplx lms_output(std::span<const cplx> weights, std::span<const cplx> x) {
    cplx y{};
    for (std::size_t i = 0; i < weights.size(); ++i) y += std::conj(weights[i]) * x[i];
    return y;
}

LmsStepResult lms_step(LmsState& state, std::span<const cplx> x, cplx d) {
    if (x.size() != state.weights.size()) {
        throw FramingError("lms_step: regressor has " + std::to_string(x.size()) + " entries, filter has " +
                           std::to_string(state.weights.size()) + " taps");
    }
    const cplx y = lms_output(state.weights, x);
    const cplx e = d - y;
    const cplx ce = std::conj(e);
    bool ok = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
        state.weights[i] += state.mu * x[i] * ce;
        const double m = std::abs(state.weights[i]);
        ok = ok && std::isfinite(m) && m <= kDivergenceLimit;
    }
    ++state.updates;
    if (!ok) {
        throw DivergenceError(state.updates, state.mu,
                              "LMS diverged at update " + std::to_string(state.updates) +
                                  " with step size " + std::to_string(state.mu));
    }
    return {y, e};
}

InstantaneousCovariance lms_instantaneous_covariance(std::span<const cplx> x, cplx d) {
    InstantaneousCovariance c;
    c.n = x.size();
    c.R.resize(c.n * c.n);
    c.r.resize(c.n);
    for (std::size_t i = 0; i < c.n; ++i) {
        for (std::size_t j = 0; j < c.n; ++j) c.R[i * c.n + j] = x[i] * std::conj(x[j]);
        c.r[i] = std::conj(d) * x[i];
    }
    return c;
}

std::vector<double> windowed_mean(std::span<const double> values, std::size_t window) {
    std::vector<double> out;
    if (window == 0) return out;
    for (std::size_t start = 0; start + window <= values.size(); start += window) {
        double acc = 0.0;
        for (std::size_t i = start; i < start + window; ++i) acc += values[i];
        out.push_back(acc / static_cast<double>(window));
    }
    return out;
}

namespace {

// Regressor for output n: x_i = rx[n + delay - i].
void fill_regressor(std::span<const cplx> rx, std::size_t n, std::size_t delay, CVec& x) {
    const auto len = static_cast<long>(rx.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long idx = static_cast<long>(n + delay) - static_cast<long>(i);
        x[i] = (idx >= 0 && idx < len) ? rx[static_cast<std::size_t>(idx)] : cplx{};
    }
}

}  // namespace

PreFftResult equalize_pre_fft(std::span<const cplx> rx, std::span<const cplx> training,
                              const PreFftOptions& opts) {
    if (opts.taps == 0) throw ConfigError("equalize_pre_fft: tap count must be positive");
    if (!(opts.mu > 0.0)) throw ConfigError("equalize_pre_fft: step size must be positive");
    if (training.size() < opts.taps)
        throw ConfigError("equalize_pre_fft: training shorter than the tap count");
    const bool dd = opts.mode == AdaptMode::TrainThenDecisionDirected;
    if (dd && (!opts.decide || opts.block_len == 0))
        throw ConfigError("equalize_pre_fft: decision-directed mode needs a block decision and length");

    const std::size_t delay = opts.taps / 2;
    const std::size_t train_len = std::min(training.size(), rx.size());
    LmsState state(opts.taps, opts.mu);
    PreFftResult out;
    out.equalized.resize(rx.size());
    out.trace.sq_error.reserve(dd ? rx.size() : train_len);
    CVec x(opts.taps);

    auto adapt = [&](std::size_t n, cplx d) {
        fill_regressor(rx, n, delay, x);
        try {
            const auto r = lms_step(state, x, d);
            out.trace.sq_error.push_back(std::norm(r.e));
            return r.y;
        } catch (const DivergenceError&) {
            throw DivergenceError(n, opts.mu,
                                  "pre-FFT LMS equalizer diverged at sample " + std::to_string(n) +
                                      " with step size " + std::to_string(opts.mu));
        }
    };

    for (std::size_t n = 0; n < train_len; ++n) out.equalized[n] = adapt(n, training[n]);

    if (!dd) {
        for (std::size_t n = train_len; n < rx.size(); ++n) {
            fill_regressor(rx, n, delay, x);
            out.equalized[n] = lms_output(state.weights, x);
        }
    } else {
        for (std::size_t begin = train_len; begin < rx.size(); begin += opts.block_len) {
            const std::size_t end = std::min(begin + opts.block_len, rx.size());
            for (std::size_t n = begin; n < end; ++n) {
                fill_regressor(rx, n, delay, x);
                out.equalized[n] = lms_output(state.weights, x);
            }
            const std::span<const cplx> block(out.equalized.data() + begin, end - begin);
            const CVec desired = opts.decide(block);
            if (desired.size() != block.size())
                throw FramingError("equalize_pre_fft: decision block has the wrong length");
            for (std::size_t n = begin; n < end; ++n) adapt(n, desired[n - begin]);
        }
    }
    out.trace.final_weights = state.weights;
    return out;
}

double select_step_size(std::span<const cplx> rx, std::span<const cplx> training, std::size_t taps,
                        std::span<const double> candidates) {
    double best_mu = 0.0;
    double best_mse = std::numeric_limits<double>::infinity();
    const std::size_t len = std::min(rx.size(), training.size());
    for (double mu : candidates) {
        PreFftOptions opts;
        opts.taps = taps;
        opts.mu = mu;
        try {
            const auto res = equalize_pre_fft(rx.first(len), training.first(len), opts);
            const auto& e = res.trace.sq_error;
            const std::size_t w = std::min<std::size_t>(100, e.size());
            double acc = 0.0;
            for (std::size_t i = e.size() - w; i < e.size(); ++i) acc += e[i];
            const double mse = acc / static_cast<double>(w);
            if (mse < best_mse) {
                best_mse = mse;
                best_mu = mu;
            }
        } catch (const DivergenceError&) {
        }
    }
    if (!std::isfinite(best_mse))
        throw DivergenceError(0, candidates.empty() ? 0.0 : candidates.back(),
                              "select_step_size: every candidate step size diverged");
    return best_mu;
}

CVec interpolate_pilots(std::span<const cplx> pilot_estimates, const OfdmGrid& grid) {
    const auto& pilot_pos = grid.pilot_positions();
    const auto& active = grid.active_bins();
    if (pilot_estimates.size() != pilot_pos.size())
        throw FramingError("interpolate_pilots: expected one estimate per pilot bin");
    CVec out(active.size());
    if (pilot_pos.empty()) return out;

    auto freq = [&](std::size_t pos) { return static_cast<double>(grid.signed_frequency(active[pos])); };
    std::size_t seg = 0;
    for (std::size_t i = 0; i < active.size(); ++i) {
        if (i <= pilot_pos.front()) {
            out[i] = pilot_estimates.front();
        } else if (i >= pilot_pos.back()) {
            out[i] = pilot_estimates.back();
        } else {
            while (pilot_pos[seg + 1] < i) ++seg;
            const double f0 = freq(pilot_pos[seg]);
            const double f1 = freq(pilot_pos[seg + 1]);
            const double t = (freq(i) - f0) / (f1 - f0);
            out[i] = (1.0 - t) * pilot_estimates[seg] + t * pilot_estimates[seg + 1];
        }
    }
    return out;
}

CVec estimate_pilot_lms(std::span<const cplx> pilot_rx, std::span<const cplx> pilot_tx,
                        const OfdmGrid& grid, std::vector<LmsState>& bank) {
    const std::size_t n = grid.pilot_bins().size();
    if (pilot_rx.size() != n || pilot_tx.size() != n || bank.size() != n)
        throw FramingError("estimate_pilot_lms: expected " + std::to_string(n) + " pilot values and states");
    CVec est(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::array<cplx, 1> x{pilot_tx[k]};
        try {
            lms_step(bank[k], x, pilot_rx[k]);
        } catch (const DivergenceError& e) {
            throw DivergenceError(e.step(), e.mu(),
                                  "pilot LMS diverged on bin " + std::to_string(grid.pilot_bins()[k]) +
                                      " at update " + std::to_string(e.step()));
        }
        est[k] = std::conj(bank[k].weights[0]);
    }
    return interpolate_pilots(est, grid);
}

PilotLmsEstimator::PilotLmsEstimator(const OfdmGrid& grid, double mu)
    : grid_(&grid), bank_(grid.pilot_bins().size(), LmsState(1, mu)) {
    if (!(mu > 0.0)) throw ConfigError("pilot estimator step size must be positive");
}

CVec PilotLmsEstimator::update(std::span<const cplx> pilot_rx, std::span<const cplx> pilot_tx) {
    return estimate_pilot_lms(pilot_rx, pilot_tx, *grid_, bank_);
}

CVec PilotLmsEstimator::pilot_estimates() const {
    CVec out;
    out.reserve(bank_.size());
    for (const auto& s : bank_) out.push_back(std::conj(s.weights[0]));
    return out;
}

CVec PilotLmsEstimator::data_estimates() const {
    const CVec active = active_estimates();
    CVec out;
    out.reserve(grid_->data_positions().size());
    for (auto p : grid_->data_positions()) out.push_back(active[p]);
    return out;
}

}  // namespace ofdmlms
