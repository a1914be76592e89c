#include "cavityqed/emit.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace cavityqed::emit {

namespace {

std::string sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

// Maps data to pixels, linearly or logarithmically.
struct Scale {
    double lo{0}, hi{1};
    double p0{0}, p1{1};
    bool log{false};

    double operator()(double v) const {
        const double a = log ? std::log10(lo) : lo;
        const double b = log ? std::log10(hi) : hi;
        const double x = log ? std::log10(v) : v;
        const double t = b > a ? (x - a) / (b - a) : 0.5;
        return p0 + t * (p1 - p0);
    }
    bool accepts(double v) const { return std::isfinite(v) && (!log || v > 0.0); }

    std::vector<double> ticks() const {
        std::vector<double> t;
        if (log) {
            for (double e = std::floor(std::log10(lo)); e <= std::ceil(std::log10(hi)); e += 1.0) {
                const double v = std::pow(10.0, e);
                if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) t.push_back(v);
            }
            if (t.size() < 2) t = {lo, hi};
        } else {
            for (int i = 0; i <= 4; ++i) t.push_back(lo + (hi - lo) * i / 4.0);
        }
        return t;
    }
};

Scale fit_scale(const std::vector<double>& vals, bool want_log, double p0, double p1) {
    Scale s;
    s.p0 = p0;
    s.p1 = p1;
    s.log = want_log && std::any_of(vals.begin(), vals.end(), [](double v) { return v > 0.0; });
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : vals) {
        if (!std::isfinite(v) || (s.log && v <= 0.0)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (lo == hi) {
        if (s.log) lo /= 2.0, hi *= 2.0;
        else lo -= 0.5, hi += 0.5;
    }
    s.lo = lo;
    s.hi = hi;
    return s;
}

// Perceptually ordered blue -> yellow ramp.
std::string colormap(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops{{{68, 1, 84},
                                                                  {59, 82, 139},
                                                                  {33, 145, 140},
                                                                  {94, 201, 98},
                                                                  {253, 231, 37}}};
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * (stops.size() - 1);
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double f = t - static_cast<double>(i);
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                  static_cast<int>(stops[i][0] + f * (stops[i + 1][0] - stops[i][0])),
                  static_cast<int>(stops[i][1] + f * (stops[i + 1][1] - stops[i][1])),
                  static_cast<int>(stops[i][2] + f * (stops[i + 1][2] - stops[i][2])));
    return buf;
}

constexpr double kWidth = 820, kHeight = 520;
constexpr double kLeft = 90, kRight = 190, kTop = 40, kBottom = 70;

void axes(std::ostringstream& svg, const Scale& xs, const Scale& ys, const std::string& xlabel,
          const std::string& ylabel, const std::string& title) {
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
        << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (double t : xs.ticks()) {
        const double px = xs(t);
        svg << "<line x1=\"" << px << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << px << "\" y2=\""
            << kHeight - kBottom + 5 << "\" stroke=\"#000\"/>\n"
            << "<text x=\"" << px << "\" y=\"" << kHeight - kBottom + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << short_num(t) << "</text>\n";
    }
    for (double t : ys.ticks()) {
        const double py = ys(t);
        svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py << "\" x2=\"" << kLeft << "\" y2=\"" << py
            << "\" stroke=\"#000\"/>\n"
            << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4
            << "\" font-size=\"12\" text-anchor=\"end\">" << short_num(t) << "</text>\n";
    }
    svg << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 25
        << "\" font-size=\"14\" text-anchor=\"middle\">" << xml_escape(xlabel) << "</text>\n"
        << "<text x=\"20\" y=\"" << (kTop + kHeight - kBottom) / 2
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << (kTop + kHeight - kBottom) / 2 << ")\">" << xml_escape(ylabel) << "</text>\n"
        << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"15\">" << xml_escape(title) << "</text>\n";
}

std::string line_plot(const sweep::SweepResult& r) {
    std::vector<double> xv, yv;
    for (const auto& row : r.rows) {
        xv.push_back(row.value);
        for (const auto& c : row.cells)
            if (c) yv.push_back(*c);
    }
    const Scale xs = fit_scale(xv, r.plot.log_x, kLeft, kWidth - kRight);
    const Scale ys = fit_scale(yv, r.plot.log_y, kHeight - kBottom, kTop);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    axes(svg, xs, ys, r.axis_names.front(), r.columns.size() == 1 ? r.columns.front() : "value", r.name);

    for (std::size_t c = 0; c < r.columns.size(); ++c) {
        const char* color = kPalette[c % kPalette.size()];
        std::vector<std::string> segments;
        std::string current;
        for (const auto& row : r.rows) {
            const auto& cell = row.cells[c];
            if (!cell || !xs.accepts(row.value) || !ys.accepts(*cell)) {
                if (!current.empty()) segments.push_back(current), current.clear();
                continue;
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", xs(row.value), ys(*cell));
            current += buf;
        }
        if (!current.empty()) segments.push_back(current);
        for (const auto& s : segments)
            svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" points=\"" << s
                << "\"/>\n";
        const double ly = kTop + 10 + 20.0 * static_cast<double>(c);
        svg << "<line x1=\"" << kWidth - kRight + 15 << "\" y1=\"" << ly << "\" x2=\"" << kWidth - kRight + 40
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kWidth - kRight + 45 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
            << xml_escape(r.columns[c]) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string heatmap(const sweep::SweepResult& r) {
    std::vector<double> xs_u, ys_u, cv;
    for (const auto& row : r.rows) {
        if (std::find(xs_u.begin(), xs_u.end(), row.value) == xs_u.end()) xs_u.push_back(row.value);
        if (std::find(ys_u.begin(), ys_u.end(), *row.value2) == ys_u.end()) ys_u.push_back(*row.value2);
        if (!row.cells.empty() && row.cells.front()) cv.push_back(*row.cells.front());
    }
    std::sort(xs_u.begin(), xs_u.end());
    std::sort(ys_u.begin(), ys_u.end());
    const Scale xs = fit_scale(xs_u, false, kLeft, kWidth - kRight);
    const Scale ys = fit_scale(ys_u, false, kHeight - kBottom, kTop);
    const Scale cs = fit_scale(cv, r.plot.log_color, 0.0, 1.0);

    auto cell_width = [](const std::vector<double>& u, std::size_t i) {
        if (u.size() < 2) return 1.0;
        return i + 1 < u.size() ? u[i + 1] - u[i] : u[i] - u[i - 1];
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    Scale xfull = xs, yfull = ys;
    xfull.hi = xs_u.back() + cell_width(xs_u, xs_u.size() - 1);
    yfull.hi = ys_u.back() + cell_width(ys_u, ys_u.size() - 1);
    for (const auto& row : r.rows) {
        const auto ix = static_cast<std::size_t>(std::find(xs_u.begin(), xs_u.end(), row.value) - xs_u.begin());
        const auto iy = static_cast<std::size_t>(std::find(ys_u.begin(), ys_u.end(), *row.value2) - ys_u.begin());
        const double x0 = xfull(row.value), x1 = xfull(row.value + cell_width(xs_u, ix));
        const double y0 = yfull(*row.value2 + cell_width(ys_u, iy)), y1 = yfull(*row.value2);
        const auto& cell = row.cells.empty() ? std::optional<double>{} : row.cells.front();
        const std::string fill = cell && cs.accepts(*cell) ? colormap(cs(*cell)) : "#bbbbbb";
        svg << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0 + 0.3 << "\" height=\""
            << y1 - y0 + 0.3 << "\" fill=\"" << fill << "\"/>\n";
    }
    axes(svg, xfull, yfull, r.axis_names[0], r.axis_names[1],
         r.name + (r.columns.empty() ? "" : ": " + r.columns.front()));

    // Colorbar.
    const double bx = kWidth - kRight + 30, bw = 20, by0 = kTop, by1 = kHeight - kBottom;
    const int steps = 64;
    for (int i = 0; i < steps; ++i) {
        const double t0 = static_cast<double>(i) / steps;
        const double y = by1 - (by1 - by0) * (t0 + 1.0 / steps);
        svg << "<rect x=\"" << bx << "\" y=\"" << y << "\" width=\"" << bw << "\" height=\""
            << (by1 - by0) / steps + 0.5 << "\" fill=\"" << colormap(t0 + 0.5 / steps) << "\"/>\n";
    }
    svg << "<rect x=\"" << bx << "\" y=\"" << by0 << "\" width=\"" << bw << "\" height=\"" << by1 - by0
        << "\" fill=\"none\" stroke=\"#000\"/>\n";
    Scale bar = cs;
    bar.p0 = by1;
    bar.p1 = by0;
    for (double t : bar.ticks())
        svg << "<text x=\"" << bx + bw + 5 << "\" y=\"" << bar(t) + 4 << "\" font-size=\"12\">" << short_num(t)
            << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

std::string format_csv(const sweep::SweepResult& result) {
    std::ostringstream os;
    for (const auto& [k, v] : result.metadata) os << "# " << k << ": " << v << '\n';
    os << "# run: " << utc_timestamp() << " wall_seconds=" << short_num(result.wall_seconds) << '\n';

    std::vector<std::string> header = result.axis_names;
    header.insert(header.end(), result.columns.begin(), result.columns.end());
    header.emplace_back("flag");
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_field(header[i]);
    os << '\n';

    for (const auto& row : result.rows) {
        os << sci(row.value);
        if (result.axis_names.size() > 1) os << ',' << (row.value2 ? sci(*row.value2) : "");
        for (const auto& c : row.cells) os << ',' << (c ? sci(*c) : "");
        os << ',' << csv_field(row.flag) << '\n';
    }
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RuntimeFailure("cannot open '" + path + "' for writing");
    out << text;
    out.close();
    if (!out) throw RuntimeFailure("write to '" + path + "' failed");
}

void emit_csv(const sweep::SweepResult& result, const std::string& path) {
    write_text(path, format_csv(result));
}

std::string format_svg(const sweep::SweepResult& result) {
    if (result.rows.empty() || result.columns.empty())
        throw ValidationError("emit_plot: nothing to plot in '" + result.name + "'");
    const bool two_d = result.axis_names.size() > 1;
    return two_d ? heatmap(result) : line_plot(result);
}

void emit_plot(const sweep::SweepResult& result, const std::string& path) {
    write_text(path, format_svg(result));
}

}  // namespace cavityqed::emit
