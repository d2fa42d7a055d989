// Command-line front end: BER sweeps, audio demo, LMS traces and plotting.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ofdmlms/sim.hpp"

namespace fs = std::filesystem;
using namespace ofdmlms;

namespace {

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimError("cannot write " + path.string());
    out << body;
    if (!out) throw SimError("failed writing " + path.string());
}

std::string csv_string(const std::vector<BerPoint>& points) {
    std::ostringstream s;
    write_csv(s, points);
    return s.str();
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw SimError("cannot create output directory " + dir.string() + ": " + ec.message());
}

int ber_sweep(const std::string& config, std::optional<std::uint64_t> seed, const fs::path& out_dir,
              unsigned threads) {
    SimConfig cfg = load_config(config);
    if (seed) cfg.seed = *seed;
    ensure_dir(out_dir);
    const auto points = run_sweep(cfg, threads);
    write_file(out_dir / "points.csv", csv_string(points));
    write_file(out_dir / "summary.txt", comparison_summary(points));
    if (!points.empty()) emit_plot(points, out_dir / "curves.svg");
    std::cout << "wrote " << points.size() << " points to " << (out_dir / "points.csv").string() << '\n';
    return 0;
}

int demo_audio(const std::string& config, const fs::path& out_dir) {
    SimConfig cfg = load_config(config);
    cfg.source = SourceKind::Sine;
    cfg.validate();
    ensure_dir(out_dir);
    std::vector<BerPoint> points;
    std::ostringstream wave;
    wave << "snr_db,sample,sent,received\n";
    for (const auto& spec : enumerate_points(cfg)) {
        const LinkResult link = run_link(cfg, spec);
        points.push_back(run_point(cfg, spec));
        const auto sent = reconstruct_sine(link.sent);
        const auto got = reconstruct_sine(link.received);
        for (std::size_t i = 0; i < std::min<std::size_t>(sent.size(), 32); ++i) {
            wave << spec.snr_db << ',' << i << ',' << int{sent[i]} << ',' << int{got[i]} << '\n';
        }
        std::cout << to_string(spec.modulation) << " snr_db=" << spec.snr_db << " bit_errors=" << link.errors << '/'
                  << link.sent.size() << '\n';
    }
    write_file(out_dir / "demo_points.csv", csv_string(points));
    write_file(out_dir / "demo_waveform.csv", wave.str());
    return 0;
}

int lms_trace(const std::string& config, const fs::path& out_dir) {
    SimConfig cfg = load_config(config);
    ensure_dir(out_dir);
    const auto res = run_lms_trace(cfg);
    std::ostringstream s;
    write_trace_csv(s, res.trace);
    write_file(out_dir / "lms_trace.csv", s.str());
    std::cout << "mu=" << res.mu << " updates=" << res.trace.sq_error.size() << '\n';
    return 0;
}

int plot(const fs::path& in, const fs::path& out) {
    std::ifstream f(in);
    if (!f) throw SimError("cannot open " + in.string());
    emit_plot(read_csv(f), out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OFDM link simulator with LMS equalization"};
    app.require_subcommand(1);

    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    unsigned threads = 0;

    auto* sweep = app.add_subcommand("ber-sweep", "Monte-Carlo BER sweep to CSV and SVG");
    sweep->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--seed", seed, "override the config seed");
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* demo = app.add_subcommand("demo-audio", "send the 1 kHz PCM tone through the link");
    demo->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
    demo->add_option("--out", out_dir, "output directory");

    auto* trace = app.add_subcommand("lms-trace", "per-step squared error of the pre-FFT LMS equalizer");
    trace->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
    trace->add_option("--out", out_dir, "output directory");

    std::string plot_in, plot_out;
    auto* plot_cmd = app.add_subcommand("plot", "render a points CSV as an SVG semilog plot");
    plot_cmd->add_option("--in", plot_in, "points CSV")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--out", plot_out, "SVG path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) return ber_sweep(config, seed, out_dir, threads);
        if (*demo) return demo_audio(config, out_dir);
        if (*trace) return lms_trace(config, out_dir);
        if (*plot_cmd) return plot(plot_in, plot_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
