// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Usage: acceptance <path-to-sim-binary>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>

#include "ofdmlms/channel.hpp"
#include "ofdmlms/equalizer.hpp"
#include "ofdmlms/fec.hpp"
#include "ofdmlms/modem.hpp"
#include "ofdmlms/numerics.hpp"
#include "ofdmlms/ofdm.hpp"
#include "ofdmlms/sim.hpp"

using namespace ofdmlms;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
        }
    }
    void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double sigma3(double p, std::uint64_t n) { return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

int run(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

fs::path g_sim;
fs::path g_work;

// Uncoded QPSK over AWGN with the ideal receiver tracks Q(sqrt(2 Eb/N0)).
Outcome theory_ber() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    SimConfig cfg;
    cfg.receiver = ReceiverMode::KnownChannelZf;
    cfg.n_bits = 200'000;
    for (double eb : {0.0, 2.0, 4.0, 6.0, 8.0}) {
        const PointSpec pt{Modulation::QPSK, ChannelKind::AwgnOnly, Coding::None, eb + 10.0 * std::log10(2.0),
                           static_cast<std::uint64_t>(eb)};
        const BerPoint p = run_point(cfg, pt);
        const double th = q_function(std::sqrt(2.0 * db_to_linear(eb)));
        const bool ok = p.bits >= 200'000 && std::abs(p.ber - th) <= sigma3(th, p.bits);
        o.require(ok, "Eb/N0 " + fmt("%g", eb));
        o.note(fmt("%g dB:", eb) + fmt("%.4g", p.ber) + fmt("/%.4g", th));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs < 120.0, "runtime");
    o.note(fmt("runtime %.2f s", secs));
    return o;
}

// Higher PSK order never wins once the larger BER is statistically meaningful.
Outcome psk_ordering() {
    Outcome o;
    for (const char* ch : {"awgn", "rician"}) {
        std::istringstream in(std::string("modulation = qpsk, 16psk, 64psk, 256psk\nchannel = ") + ch + "\n");
        const auto pts = run_sweep(parse_config(in), 0);
        std::map<double, std::map<Modulation, BerPoint>> by_snr;
        for (const auto& p : pts) by_snr[p.snr_db][p.modulation] = p;
        int checked = 0, violations = 0;
        const Modulation order[] = {Modulation::QPSK, Modulation::PSK16, Modulation::PSK64, Modulation::PSK256};
        for (const auto& [snr, m] : by_snr) {
            for (int i = 0; i + 1 < 4; ++i) {
                const BerPoint& lo = m.at(order[i]);
                const BerPoint& hi = m.at(order[i + 1]);
                if (std::max(lo, hi, [](auto& a, auto& b) { return a.ber < b.ber; }).errors < 100) continue;
                ++checked;
                if (lo.ber > hi.ber) {
                    ++violations;
                    o.require(false, std::string(ch) + fmt(" %g dB ", snr) + std::string(to_string(order[i])));
                }
            }
        }
        o.note(std::string(ch) + ": " + std::to_string(checked) + " pairs checked, " + std::to_string(violations) +
               " out of order");
    }
    return o;
}

Outcome coding_gain() {
    Outcome o;
    SimConfig cfg;
    cfg.receiver = ReceiverMode::KnownChannelZf;
    cfg.n_bits = 100'000;
    const BerPoint u =
        run_point(cfg, PointSpec{Modulation::QPSK, ChannelKind::AwgnOnly, Coding::None, 6.0 + 10.0 * std::log10(2.0), 0});
    const BerPoint c = run_point(cfg, PointSpec{Modulation::QPSK, ChannelKind::AwgnOnly, Coding::ConvK7, 6.0, 1});
    o.require(u.bits >= 100'000 && c.bits >= 100'000, "bit count");
    o.require(std::abs(u.ebn0_db - 6.0) < 1e-9 && std::abs(c.ebn0_db - 6.0) < 1e-9, "Eb/N0 accounting");
    o.require(c.ber < u.ber, "coded BER below uncoded");
    o.note(fmt("uncoded %.3g", u.ber) + fmt(", coded %.3g", c.ber) + " at 6 dB");
    return o;
}

// Cyclic prefix turns the 4-tap channel into per-bin gains.
Outcome isi_elimination() {
    Outcome o;
    const OfdmGrid g;
    const Constellation qpsk(Modulation::QPSK);
    const CVec taps = normalize_power(reference_taps());
    const CVec H = frequency_response(taps, g.fft_size());
    CVec Hd;
    for (auto b : g.data_bins()) Hd.push_back(H[b]);
    RngStream rng(42, 0);
    double worst = 0.0;
    for (int s = 0; s < 50; ++s) {
        CVec data(g.data_bins().size());
        for (auto& v : data) v = qpsk.points()[rng.next_u64() % 4];
        const CVec tx = assemble(data, CVec(g.pilot_bins().size(), OfdmGrid::pilot_value()), g);
        const CVec rx = static_multipath(tx, taps);
        const CVec eq = equalize_one_tap(disassemble(std::span(rx).first(g.symbol_len()), g).data, Hd);
        for (std::size_t i = 0; i < data.size(); ++i) worst = std::max(worst, std::abs(eq[i] - data[i]));
    }
    o.require(worst < 1e-6, "noiseless symbol recovery");
    o.note(fmt("noiseless max error %.2g", worst));

    SimConfig cfg;
    cfg.receiver = ReceiverMode::KnownChannelZf;
    cfg.n_bits = 200'000;
    for (double eb : {0.0, 4.0, 8.0}) {
        const BerPoint p = run_point(
            cfg, PointSpec{Modulation::QPSK, ChannelKind::StaticMultipath, Coding::None, eb + 10.0 * std::log10(2.0),
                           static_cast<std::uint64_t>(eb)});
        double th = 0.0;
        for (const auto& h : Hd) th += q_function(std::sqrt(2.0 * std::norm(h) * db_to_linear(eb)));
        th /= static_cast<double>(Hd.size());
        o.require(std::abs(p.ber - th) <= sigma3(th, p.bits), "noisy BER at " + fmt("%g dB", eb));
        o.note(fmt("%g dB:", eb) + fmt("%.4g", p.ber) + fmt("/%.4g", th));
    }
    return o;
}

// Pre-FFT LMS on the static channel, measured from the CLI trace.
Outcome lms_convergence() {
    Outcome o;
    const fs::path conf = g_work / "trace.conf";
    write_text(conf,
               "channel = multipath\nreceiver_mode = pre_fft_lms\nsnr_start_db = 300\n"
               "lms_taps = 11\nlms_mu = auto\ntraining_symbols = 2\nseed = 1\n");
    const fs::path out = g_work / "trace";
    if (run(g_sim.string() + " lms-trace --config " + conf.string() + " --out " + out.string()) != 0) {
        o.require(false, "lms-trace command");
        return o;
    }
    std::ifstream in(out / "lms_trace.csv");
    std::string line;
    std::getline(in, line);
    std::vector<double> sq;
    while (std::getline(in, line)) sq.push_back(std::stod(line.substr(line.find(',') + 1)));
    const auto w = windowed_mean(sq, 100);
    if (w.size() < 3) {
        o.require(false, "trace too short");
        return o;
    }
    o.require(w.back() < 0.01, "final window < 0.01");
    o.require(w.back() < 0.01 * w.front(), "final window < 1% of initial");
    std::size_t rises = 0;
    for (std::size_t i = 2; i < w.size(); ++i) rises += w[i] > w[i - 1];
    o.require(rises == 0, "non-increasing windowed MSE");
    o.note(std::to_string(sq.size()) + " steps" + fmt(", initial %.3g", w.front()) + fmt(", final %.3g", w.back()) +
           ", " + std::to_string(rises) + " of " + std::to_string(w.size() - 2) + " window pairs rise");
    return o;
}

Outcome lms_micro() {
    Outcome o;
    RngStream rng(2024, 0);
    auto rc = [&] { return cplx{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0}; };
    double worst = 0.0;
    for (int t = 0; t < 10'000; ++t) {
        const std::size_t n = 1 + rng.next_u64() % 8;
        CVec w(n), x(n);
        for (auto& v : w) v = rc();
        for (auto& v : x) v = rc();
        const cplx d = rc();
        const double mu = 0.5 * rng.uniform();
        // y = w^H x, e = d - y, w <- w + mu x e*
        double yr = 0.0, yi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            yr += w[i].real() * x[i].real() + w[i].imag() * x[i].imag();
            yi += w[i].real() * x[i].imag() - w[i].imag() * x[i].real();
        }
        const double er = d.real() - yr, ei = d.imag() - yi;
        LmsState s;
        s.weights = w;
        s.mu = mu;
        const auto r = lms_step(s, x, d);
        worst = std::max({worst, std::abs(r.y - cplx{yr, yi}), std::abs(r.e - cplx{er, ei})});
        for (std::size_t i = 0; i < n; ++i) {
            const cplx ref{w[i].real() + mu * (x[i].real() * er + x[i].imag() * ei),
                           w[i].imag() + mu * (x[i].imag() * er - x[i].real() * ei)};
            worst = std::max(worst, std::abs(s.weights[i] - ref));
        }
    }
    o.require(worst <= 1e-12, "transcription match");
    o.note(fmt("max deviation %.2g over 1e4 steps", worst));

    const double power = 2.0, bound = 2.0 / power;
    auto drive = [&](double mu) {
        LmsState s(1, mu);
        for (int n = 0; n < 200; ++n) {
            const cplx x = std::polar(std::sqrt(power), 2.0 * std::numbers::pi * rng.uniform());
            lms_step(s, CVec{x}, x);
        }
        return std::abs(s.weights[0] - 1.0);
    };
    const double settled = drive(0.5 * bound);
    o.require(settled < 1e-9, "converges at 0.5x of 2/P");
    bool diverged = false;
    try {
        drive(4.0 * bound);
    } catch (const DivergenceError&) {
        diverged = true;
    }
    o.require(diverged, "diverges at 4x of 2/P");
    o.note(fmt("0.5x residual %.1g", settled) + (diverged ? ", 4x diverged" : ", 4x stayed bounded"));
    return o;
}

Outcome channel_stats() {
    Outcome o;
    // AWGN: measured noise power against the requested Es/N0.
    double worst_db = 0.0;
    for (double snr : {0.0, 10.0, 20.0}) {
        RngStream rng(7, static_cast<std::uint64_t>(snr));
        const CVec clean(200'000, cplx{1.0, 0.0});
        const CVec noisy = add_awgn(clean, snr, 1.0, rng);
        double p = 0.0;
        for (std::size_t i = 0; i < clean.size(); ++i) p += std::norm(noisy[i] - clean[i]);
        p /= static_cast<double>(clean.size());
        worst_db = std::max(worst_db, std::abs(-10.0 * std::log10(p) - snr));
    }
    o.require(worst_db <= 0.2, "AWGN calibration");
    o.note(fmt("AWGN off by %.3f dB", worst_db));

    const ChannelConfig cfg = ChannelConfig::make(ChannelKind::RicianFading);
    const double los = std::sqrt(3.0 / 4.0);
    double worst_total = 0.0, worst_diffuse = 0.0;
    std::vector<double> total(4, 0.0), diffuse(4, 0.0);
    const std::size_t reals = 500, n = 400;
    for (std::size_t r = 0; r < reals; ++r) {
        RngStream rng(99, r);
        const auto real = rician_taps(cfg, n, rng);
        for (std::size_t l = 0; l < 4; ++l) {
            const double mag = std::abs(cfg.taps0[l]);
            for (const auto& v : real.taps[l]) {
                total[l] += std::norm(v);
                diffuse[l] += std::norm(v - mag * los);
            }
        }
    }
    for (std::size_t l = 0; l < 4; ++l) {
        const double p = std::norm(cfg.taps0[l]) * static_cast<double>(reals * n);
        worst_total = std::max(worst_total, std::abs(total[l] / p - 1.0));
        worst_diffuse = std::max(worst_diffuse, std::abs(diffuse[l] / p / 0.25 - 1.0));
    }
    o.require(worst_total < 0.03 && worst_diffuse < 0.03, "Rician power split");
    o.note(fmt("Rician total %.2f%%", 100 * worst_total) + fmt(", diffuse %.2f%%", 100 * worst_diffuse));

    for (double fd : {40.0, 100.0}) {
        const double fs_hz = 4000.0;
        const std::size_t max_lag = 40, len = 800, runs = 200;
        std::vector<cplx> acc(max_lag + 1);
        for (std::size_t r = 0; r < runs; ++r) {
            RngStream rng(123, r);
            const CVec g = jakes_process(fd, fs_hz, len, rng);
            for (std::size_t lag = 0; lag <= max_lag; ++lag) {
                cplx s{};
                for (std::size_t t = 0; t + lag < len; ++t) s += g[t + lag] * std::conj(g[t]);
                acc[lag] += s / static_cast<double>(len - lag);
            }
        }
        double sq = 0.0;
        for (std::size_t lag = 0; lag <= max_lag; ++lag) {
            const double rho = acc[lag].real() / static_cast<double>(runs);
            const double ref = std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * fd * static_cast<double>(lag) / fs_hz);
            sq += (rho - ref) * (rho - ref);
        }
        const double rms = std::sqrt(sq / static_cast<double>(max_lag + 1));
        o.require(rms < 0.05, fmt("Jakes %g Hz", fd));
        o.note(fmt("Jakes %g Hz", fd) + fmt(" rms %.3f", rms));
    }
    return o;
}

Outcome fec() {
    Outcome o;
    RngStream rng(77, 0);
    auto random_bits = [&](std::size_t n) {
        Bits b(n);
        for (auto& v : b) v = rng.bit();
        return b;
    };
    bool inv = true;
    for (std::size_t len = 0; len <= 12 && inv; ++len) {
        for (std::uint32_t m = 0; m < (1u << len); ++m) {
            Bits u(len);
            for (std::size_t i = 0; i < len; ++i) u[i] = (m >> i) & 1u;
            if (viterbi_decode(conv_encode(u)) != u) {
                inv = false;
                break;
            }
        }
    }
    for (int t = 0; t < 1000 && inv; ++t) {
        const Bits u = random_bits(rng.next_u64() % 1001);
        inv = viterbi_decode(conv_encode(u)) == u;
    }
    o.require(inv, "noiseless inversion");

    bool single = true;
    for (int t = 0; t < 5 && single; ++t) {
        const Bits u = random_bits(64);
        const Bits c = conv_encode(u);
        for (std::size_t pos = 0; pos < c.size() && single; ++pos) {
            Bits r = c;
            r[pos] ^= 1u;
            single = viterbi_decode(r) == u;
        }
    }
    o.require(single, "single-flip correction");

    std::vector<Bits> book;
    for (std::uint32_t m = 0; m < 4096; ++m) {
        Bits u(12);
        for (std::size_t i = 0; i < 12; ++i) u[i] = (m >> i) & 1u;
        book.push_back(conv_encode(u));
    }
    auto dist = [](const Bits& a, const Bits& b) {
        std::size_t d = 0;
        for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
        return d;
    };
    bool ml = true;
    for (int t = 0; t < 50; ++t) {
        Bits r = conv_encode(random_bits(12));
        for (auto& b : r) b ^= rng.uniform() < 0.12 ? 1u : 0u;
        std::size_t best = r.size();
        for (const auto& c : book) best = std::min(best, dist(c, r));
        ml = ml && dist(conv_encode(viterbi_decode(r)), r) == best;
    }
    o.require(ml, "brute-force ML equivalence");
    o.note("exhaustive <= 12 bits, 1000 random <= 1000 bits, 640 single flips, 50 ML blocks");
    return o;
}

Outcome determinism() {
    Outcome o;
    const fs::path conf = g_work / "det.conf";
    write_text(conf,
               "modulation = qpsk, 16qam\nchannel = awgn, rician\ncoding = none, cc_k7\n"
               "snr_start_db = 0\nsnr_stop_db = 20\nsnr_step_db = 5\nn_bits = 8000\nseed = 5\n"
               "receiver_mode = pilot_fd_lms\n");
    const fs::path trace_conf = g_work / "det_trace.conf";
    write_text(trace_conf, "channel = multipath\nsnr_start_db = 20\nn_bits = 8000\nseed = 5\n");
    const std::string sim = g_sim.string();
    std::vector<std::string> artifacts;
    for (const char* run_id : {"a", "b"}) {
        const fs::path d = g_work / (std::string("det_") + run_id);
        bool ok = run(sim + " ber-sweep --config " + conf.string() + " --out " + d.string()) == 0;
        ok = ok && run(sim + " ber-sweep --config " + conf.string() + " --threads 2 --out " + (d / "mt").string()) == 0;
        ok = ok && run(sim + " demo-audio --config " + conf.string() + " --out " + d.string()) == 0;
        ok = ok && run(sim + " lms-trace --config " + trace_conf.string() + " --out " + d.string()) == 0;
        ok = ok && run(sim + " plot --in " + (d / "points.csv").string() + " --out " + (d / "replot.svg").string()) == 0;
        o.require(ok, std::string("commands in run ") + run_id);
    }
    std::size_t compared = 0;
    for (const char* f : {"points.csv", "curves.svg", "summary.txt", "demo_points.csv", "demo_waveform.csv",
                          "lms_trace.csv", "replot.svg", "mt/points.csv", "mt/curves.svg"}) {
        const std::string a = slurp(g_work / "det_a" / f), b = slurp(g_work / "det_b" / f);
        o.require(!a.empty() && a == b, std::string("identical ") + f);
        ++compared;
    }
    o.require(slurp(g_work / "det_a" / "points.csv") == slurp(g_work / "det_a" / "mt" / "points.csv"),
              "thread count independence");
    o.note(std::to_string(compared) + " artifacts byte-identical across runs");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <sim-binary>\n");
        return 2;
    }
    g_sim = fs::absolute(argv[1]);
    g_work = fs::temp_directory_path() / ("ofdmlms_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(g_work);

    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"theory-oracle BER", theory_ber},
        {"PSK order ranking", psk_ordering},
        {"coding gain direction", coding_gain},
        {"ISI elimination", isi_elimination},
        {"LMS convergence", lms_convergence},
        {"LMS micro-correctness", lms_micro},
        {"channel statistics", channel_stats},
        {"FEC correctness", fec},
        {"determinism", determinism},
    };
    int failed = 0;
    int id = 1;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", id++, name, o.detail.c_str());
        std::fflush(stdout);
    }
    fs::remove_all(g_work);
    std::printf("%d of %d criteria passed\n", 9 - failed, 9);
    return failed == 0 ? 0 : 1;
}
