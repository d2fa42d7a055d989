#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "ofdmlms/sim.hpp"

namespace ofdmlms {

namespace {

std::string fmt_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v == 0.0 ? 0.0 : v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

using SeriesKey = std::tuple<Modulation, ChannelKind, Coding>;

std::string series_name(const SeriesKey& k) {
    return std::string(to_string(std::get<0>(k))) + " / " + std::string(to_string(std::get<1>(k))) + " / " +
           std::string(to_string(std::get<2>(k)));
}

std::map<SeriesKey, std::vector<BerPoint>> group_series(const std::vector<BerPoint>& points) {
    std::map<SeriesKey, std::vector<BerPoint>> series;
    for (const auto& p : points) series[{p.modulation, p.channel, p.coding}].push_back(p);
    for (auto& [k, v] : series)
        std::stable_sort(v.begin(), v.end(), [](const BerPoint& a, const BerPoint& b) { return a.ebn0_db < b.ebn0_db; });
    return series;
}

double plotted_ber(const BerPoint& p) {
    return p.errors == 0 ? 1.0 / (2.0 * static_cast<double>(p.bits)) : p.ber;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

void write_csv(std::ostream& out, const std::vector<BerPoint>& points) {
    out << kCsvHeader << '\n';
    for (const auto& p : points) {
        out << to_string(p.modulation) << ',' << to_string(p.channel) << ',' << to_string(p.coding) << ','
            << to_string(p.receiver) << ',' << fmt_g6(p.snr_db) << ',' << fmt_g6(p.ebn0_db) << ',' << p.bits << ','
            << p.errors << ',' << fmt_g6(p.ber) << ',' << p.seed << '\n';
    }
}

std::vector<BerPoint> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("read_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw ConfigError("read_csv: unexpected header '" + line + "'");
    std::vector<BerPoint> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 10) throw ConfigError("read_csv: line " + std::to_string(line_no) + " has " + std::to_string(f.size()) + " fields");
        try {
            BerPoint p;
            p.modulation = parse_modulation(f[0]);
            p.channel = parse_channel_kind(f[1]);
            p.coding = parse_coding(f[2]);
            p.receiver = parse_receiver_mode(f[3]);
            p.snr_db = std::stod(f[4]);
            p.ebn0_db = std::stod(f[5]);
            p.bits = std::stoull(f[6]);
            p.errors = std::stoull(f[7]);
            p.ber = std::stod(f[8]);
            p.seed = std::stoull(f[9]);
            out.push_back(p);
        } catch (const std::logic_error&) {
            throw ConfigError("read_csv: malformed number on line " + std::to_string(line_no));
        }
    }
    return out;
}

std::string render_svg(const std::vector<BerPoint>& points) {
    constexpr double kWidth = 720, kHeight = 480;
    constexpr double kLeft = 70, kRight = 200, kTop = 20, kBottom = 50;
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;

    const auto series = group_series(points);

    double xmin = 0.0, xmax = 1.0;
    int dmin = -6, dmax = 0;
    if (!points.empty()) {
        xmin = xmax = points.front().ebn0_db;
        double lmin = 0.0;
        for (const auto& p : points) {
            xmin = std::min(xmin, p.ebn0_db);
            xmax = std::max(xmax, p.ebn0_db);
            lmin = std::min(lmin, std::log10(plotted_ber(p)));
        }
        if (xmax - xmin < 1e-9) {
            xmin -= 1.0;
            xmax += 1.0;
        }
        dmin = static_cast<int>(std::floor(lmin));
        if (dmin >= dmax) dmin = dmax - 1;
    }
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double ber) {
        const double l = std::log10(ber);
        return kTop + (static_cast<double>(dmax) - l) / static_cast<double>(dmax - dmin) * ph;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Decade gridlines on the log axis.
    svg << "<g class=\"y-axis\" data-scale=\"log10\" stroke=\"#cccccc\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int d = dmin; d <= dmax; ++d) {
        const double y = sy(std::pow(10.0, d));
        svg << "<line class=\"decade\" x1=\"" << fmt_fixed(kLeft) << "\" y1=\"" << fmt_fixed(y) << "\" x2=\""
            << fmt_fixed(kLeft + pw) << "\" y2=\"" << fmt_fixed(y) << "\"/>\n";
        svg << "<text x=\"" << fmt_fixed(kLeft - 8) << "\" y=\"" << fmt_fixed(y + 4)
            << "\" text-anchor=\"end\" stroke=\"none\" fill=\"black\">1e" << d << "</text>\n";
    }
    svg << "</g>\n";

    svg << "<g class=\"x-axis\" stroke=\"#cccccc\" font-family=\"sans-serif\" font-size=\"11\">\n";
    const double xstep = std::max(1.0, std::ceil((xmax - xmin) / 10.0));
    for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9; x += xstep) {
        svg << "<line x1=\"" << fmt_fixed(sx(x)) << "\" y1=\"" << fmt_fixed(kTop) << "\" x2=\"" << fmt_fixed(sx(x))
            << "\" y2=\"" << fmt_fixed(kTop + ph) << "\"/>\n";
        svg << "<text x=\"" << fmt_fixed(sx(x)) << "\" y=\"" << fmt_fixed(kTop + ph + 16)
            << "\" text-anchor=\"middle\" stroke=\"none\" fill=\"black\">" << fmt_g6(x) << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<rect x=\"" << fmt_fixed(kLeft) << "\" y=\"" << fmt_fixed(kTop) << "\" width=\"" << fmt_fixed(pw)
        << "\" height=\"" << fmt_fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt_fixed(kLeft + pw / 2) << "\" y=\"" << fmt_fixed(kHeight - 10)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">Eb/N0 (dB)</text>\n";
    svg << "<text x=\"16\" y=\"" << fmt_fixed(kTop + ph / 2) << "\" transform=\"rotate(-90 16 "
        << fmt_fixed(kTop + ph / 2) << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">BER</text>\n";

    std::size_t color = 0;
    for (const auto& [key, pts] : series) {
        const char* c = kPalette[color++ % std::size(kPalette)];
        svg << "<g class=\"series\" data-name=\"" << xml_escape(series_name(key)) << "\">\n";
        svg << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            svg << (i ? " " : "") << fmt_fixed(sx(pts[i].ebn0_db)) << ',' << fmt_fixed(sy(plotted_ber(pts[i])));
        }
        svg << "\"/>\n";
        for (const auto& p : pts) {
            const double x = sx(p.ebn0_db);
            const double y = sy(plotted_ber(p));
            if (p.errors == 0) {
                svg << "<path class=\"floor\" data-ber=\"" << fmt_g6(plotted_ber(p)) << "\" d=\"M" << fmt_fixed(x) << ',' << fmt_fixed(y - 4) << " L"
                    << fmt_fixed(x - 4) << ',' << fmt_fixed(y + 3) << " L" << fmt_fixed(x + 4) << ','
                    << fmt_fixed(y + 3) << " Z\" fill=\"white\" stroke=\"" << c << "\"/>\n";
            } else {
                svg << "<circle data-ber=\"" << fmt_g6(p.ber) << "\" cx=\"" << fmt_fixed(x) << "\" cy=\"" << fmt_fixed(y) << "\" r=\"2.5\" fill=\"" << c
                    << "\"/>\n";
            }
        }
        const double ly = kTop + 14.0 * static_cast<double>(color);
        svg << "<text x=\"" << fmt_fixed(kLeft + pw + 12) << "\" y=\"" << fmt_fixed(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << c << "\">" << xml_escape(series_name(key))
            << "</text>\n";
        svg << "</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(const std::vector<BerPoint>& points, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SimError("cannot write plot " + path.string());
    out << render_svg(points);
    if (!out) throw SimError("failed writing plot " + path.string());
}

namespace {

// Eb/N0 where a series first falls to `target`, interpolating log10(BER)
// linearly between grid points.
std::optional<double> ebn0_at_ber(const std::vector<BerPoint>& pts, double target) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double b0 = plotted_ber(pts[i - 1]);
        const double b1 = plotted_ber(pts[i]);
        if (b0 >= target && b1 <= target && b0 > b1) {
            const double t = (std::log10(b0) - std::log10(target)) / (std::log10(b0) - std::log10(b1));
            return pts[i - 1].ebn0_db + t * (pts[i].ebn0_db - pts[i - 1].ebn0_db);
        }
    }
    return std::nullopt;
}

// Uncoded BER at `ebn0`, interpolating log10(BER) between the bracketing
// grid points; zero-error points do not take part.
std::optional<double> ber_at_ebn0(const std::vector<BerPoint>& pts, double ebn0) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].errors == 0) continue;
        if (std::abs(pts[i].ebn0_db - ebn0) < 1e-9) return pts[i].ber;
        if (i + 1 < pts.size() && pts[i + 1].errors > 0 && pts[i].ebn0_db < ebn0 && ebn0 < pts[i + 1].ebn0_db) {
            const double t = (ebn0 - pts[i].ebn0_db) / (pts[i + 1].ebn0_db - pts[i].ebn0_db);
            return std::pow(10.0, std::log10(pts[i].ber) + t * (std::log10(pts[i + 1].ber) - std::log10(pts[i].ber)));
        }
    }
    return std::nullopt;
}

}  // namespace

std::string comparison_summary(const std::vector<BerPoint>& points) {
    const auto series = group_series(points);
    std::ostringstream out;
    bool any = false;
    for (const auto& [key, coded] : series) {
        if (std::get<2>(key) != Coding::ConvK7) continue;
        const auto it = series.find({std::get<0>(key), std::get<1>(key), Coding::None});
        if (it == series.end()) continue;
        const auto& uncoded = it->second;
        any = true;
        out << "series " << to_string(std::get<0>(key)) << " / " << to_string(std::get<1>(key))
            << ": cc_k7 vs none\n";
        out << "  BER at equal Eb/N0 (vertical gap, decades = log10(uncoded/coded), uncoded interpolated):\n";
        for (const auto& c : coded) {
            const auto ub = ber_at_ebn0(uncoded, c.ebn0_db);
            if (!ub) continue;
            out << "    ebn0_db=" << fmt_g6(c.ebn0_db) << " uncoded=" << fmt_g6(*ub) << " coded=" << fmt_g6(c.ber);
            if (c.errors > 0) out << " decades=" << fmt_fixed(std::log10(*ub / c.ber), 3);
            out << '\n';
        }
        out << "  Eb/N0 at equal BER (horizontal gap, dB = uncoded - coded):\n";
        for (double target : {1e-2, 1e-3, 1e-4}) {
            const auto ec = ebn0_at_ber(coded, target);
            const auto eu = ebn0_at_ber(uncoded, target);
            out << "    ber=" << fmt_g6(target);
            if (ec && eu) {
                out << " uncoded_db=" << fmt_fixed(*eu, 3) << " coded_db=" << fmt_fixed(*ec, 3)
                    << " gain_db=" << fmt_fixed(*eu - *ec, 3) << '\n';
            } else {
                out << " not bracketed by both series\n";
            }
        }
    }
    if (!any) out << "no coded/uncoded series pairs to compare\n";
    return out.str();
}

void write_trace_csv(std::ostream& out, const LmsTrace& trace) {
    out << "step,sq_error\n";
    for (std::size_t i = 0; i < trace.sq_error.size(); ++i) out << i << ',' << fmt_g6(trace.sq_error[i]) << '\n';
}

}  // namespace ofdmlms
