#include "cavityqed/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace cavityqed::config {

namespace {

using sweep::Axis;

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"model", {"n_atoms", "g0", "omega", "delta_a", "delta_c", "gamma", "kappa", "lambda", "n_max",
                   "positions", "positions_y", "max_dim"}},
        {"sweep", {"engine", "axis", "values", "min", "max", "count", "spacing", "axis2", "values2", "min2",
                   "max2", "count2", "spacing2", "probe_x", "cross_check", "threads"}},
        {"output", {"observables", "format", "log_x", "log_y", "log_color", "name"}},
        {"probe", {"x", "min", "max", "count"}},
        {"zeros", {"nx", "ny", "x_min", "x_max", "y_min", "y_max", "alpha_re", "alpha_im"}},
        {"stability", {"step"}},
    };
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string where(const std::string& section, const std::string& key) { return section + "." + key; }

double to_double(const std::string& section, const std::string& key, const Entry& e, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
        throw ConfigError(where(section, key) + ": expected a finite number, got '" + t + "'", e.line);
    return v;
}

class Reader {
public:
    Reader(const Document& doc, std::string section) : doc_(doc), section_(std::move(section)) {}

    const Entry* entry(const std::string& key) const { return doc_.find(section_, key); }

    double number(const std::string& key, double fallback) const {
        const Entry* e = entry(key);
        return e ? to_double(section_, key, *e, e->value) : fallback;
    }

    int integer(const std::string& key, int fallback) const {
        const Entry* e = entry(key);
        if (!e) return fallback;
        const double v = to_double(section_, key, *e, e->value);
        if (v != std::floor(v) || std::abs(v) > 1e9)
            throw ConfigError(where(section_, key) + ": expected an integer", e->line);
        return static_cast<int>(v);
    }

    bool boolean(const std::string& key, bool fallback) const {
        const Entry* e = entry(key);
        if (!e) return fallback;
        const std::string v = trim(e->value);
        if (v == "true" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "no" || v == "0") return false;
        throw ConfigError(where(section_, key) + ": expected true or false", e->line);
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        const Entry* e = entry(key);
        return e ? trim(e->value) : fallback;
    }

    std::vector<double> numbers(const std::string& key) const {
        const Entry* e = entry(key);
        std::vector<double> out;
        if (!e) return out;
        for (const auto& item : split_list(e->value)) out.push_back(to_double(section_, key, *e, item));
        return out;
    }

    int line(const std::string& key) const {
        const Entry* e = entry(key);
        return e ? e->line : 0;
    }

private:
    const Document& doc_;
    std::string section_;
};

template <class F>
auto rethrow_with_line(int line, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ConfigError(e.what(), line);
    }
}

sweep::AxisSpec read_axis(const Reader& r, const std::string& suffix, const std::string& default_axis) {
    sweep::AxisSpec spec;
    const std::string axis_key = suffix.empty() ? "axis" : "axis2";
    spec.axis = rethrow_with_line(r.line(axis_key), [&] { return sweep::parse_axis(r.text(axis_key, default_axis)); });

    const bool listed = r.entry("values" + suffix) != nullptr;
    const bool ruled = r.entry("min" + suffix) || r.entry("max" + suffix) || r.entry("count" + suffix);
    if (listed && ruled)
        throw ConfigError("sweep.values" + suffix + ": give either a value list or min/max/count, not both",
                          r.line("values" + suffix));
    if (listed) {
        spec.values = r.numbers("values" + suffix);
    } else if (ruled) {
        for (const char* k : {"min", "max", "count"})
            if (!r.entry(k + suffix))
                throw ConfigError("sweep." + std::string(k) + suffix + ": required with a min/max/count rule", 0);
        const auto spacing = rethrow_with_line(r.line("spacing" + suffix), [&] {
            return sweep::parse_spacing(r.text("spacing" + suffix, "linear"));
        });
        spec.values = rethrow_with_line(r.line("min" + suffix), [&] {
            return sweep::sample_axis(r.number("min" + suffix, 0), r.number("max" + suffix, 0),
                                      r.integer("count" + suffix, 0), spacing);
        });
    }
    if (spec.axis == Axis::n_atoms) {
        // Atom numbers are integers; rounding can repeat values on log grids.
        std::vector<double> unique;
        for (double v : spec.values) {
            const double n = std::round(v);
            if (std::find(unique.begin(), unique.end(), n) == unique.end()) unique.push_back(n);
        }
        spec.values = std::move(unique);
    }
    return spec;
}

}  // namespace

ConfigError::ConfigError(const std::string& what, int line)
    : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

bool Document::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

const Entry* Document::find(const std::string& section, const std::string& key) const {
    const auto s = sections.find(section);
    if (s == sections.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
}

Document parse_document(const std::string& text) {
    Document doc;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().count(section)) throw ConfigError("unknown section [" + section + "]", line_no);
            doc.sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        if (section.empty()) throw ConfigError("key '" + key + "' outside any section", line_no);
        if (!schema().at(section).count(key))
            throw ConfigError("unknown key '" + key + "' in [" + section + "]", line_no);
        auto& entries = doc.sections[section];
        if (entries.count(key)) throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line_no);
        entries[key] = Entry{value, line_no};
    }
    return doc;
}

ModelParams model_params(const Document& doc) {
    const Reader r(doc, "model");
    ModelParams p;
    p.n_atoms = r.integer("n_atoms", 1);
    p.g0 = r.number("g0", 1.0);
    p.omega = r.number("omega", 1.0);
    p.delta_a = r.number("delta_a", 0.0);
    p.delta_c = r.number("delta_c", 0.0);
    p.gamma = r.number("gamma", 1.0);
    p.kappa = r.number("kappa", 1.0);
    p.lambda = r.number("lambda", 1.0);
    if (r.entry("n_max")) p.n_max = r.integer("n_max", 0);

    if (p.n_atoms < 0) throw ConfigError("model.n_atoms: must be >= 0", r.line("n_atoms"));
    if (!(p.lambda > 0.0)) throw ConfigError("model.lambda: must be > 0", r.line("lambda"));

    const auto xs = r.numbers("positions");
    const auto ys = r.numbers("positions_y");
    if (r.entry("positions")) {
        if (static_cast<int>(xs.size()) != p.n_atoms)
            throw ConfigError("model.positions: expected " + std::to_string(p.n_atoms) + " values",
                              r.line("positions"));
        p.positions.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) p.positions[i].x = xs[i];
    } else {
        p.positions = pattern_positions(p.n_atoms, p.lambda);
    }
    if (r.entry("positions_y")) {
        if (ys.size() != p.positions.size())
            throw ConfigError("model.positions_y: expected " + std::to_string(p.n_atoms) + " values",
                              r.line("positions_y"));
        for (std::size_t i = 0; i < ys.size(); ++i) p.positions[i].y = ys[i];
    }

    const std::pair<const char*, bool> checks[] = {
        {"gamma", p.gamma > 0.0}, {"kappa", p.kappa >= 0.0}, {"n_max", !p.n_max || *p.n_max >= 1}};
    for (const auto& [key, ok] : checks)
        if (!ok) throw ConfigError(std::string("model.") + key + ": out of range", r.line(key));
    return p;
}

sweep::SweepSpec sweep_spec(const Document& doc) {
    sweep::SweepSpec spec;
    spec.base = model_params(doc);
    const Reader model(doc, "model");
    spec.max_dim = model.integer("max_dim", static_cast<int>(kDefaultMaxDim));
    if (spec.max_dim < 2) throw ConfigError("model.max_dim: must be >= 2", model.line("max_dim"));

    const Reader sw(doc, "sweep");
    spec.engine = rethrow_with_line(sw.line("engine"), [&] { return sweep::parse_engine(sw.text("engine", "analytic")); });
    spec.axis = read_axis(sw, "", "N");
    if (spec.axis.values.empty() && !sw.entry("values")) {
        // No sampling given: a single point at the base value.
        const auto& b = spec.base;
        switch (spec.axis.axis) {
            case Axis::n_atoms: spec.axis.values = {static_cast<double>(b.n_atoms)}; break;
            case Axis::kappa: spec.axis.values = {b.kappa}; break;
            case Axis::omega: spec.axis.values = {b.omega}; break;
            case Axis::delta_c: spec.axis.values = {b.delta_c}; break;
            case Axis::delta_a: spec.axis.values = {b.delta_a}; break;
            case Axis::x1: spec.axis.values = {b.positions.empty() ? 0.0 : b.positions[0].x}; break;
            case Axis::x2: spec.axis.values = {b.positions.size() < 2 ? 0.0 : b.positions[1].x}; break;
            case Axis::delta_p: spec.axis.values = {0.0}; break;
        }
    }
    if (sw.entry("axis2")) spec.axis2 = read_axis(sw, "2", "");
    spec.probe_x = sw.number("probe_x", 0.0);
    spec.cross_check = sw.boolean("cross_check", false);
    spec.threads = sw.integer("threads", 0);

    const Reader out(doc, "output");
    if (out.entry("observables")) spec.outputs = split_list(out.text("observables", ""));
    const std::string fmt = out.text("format", "csv");
    if (fmt == "csv") spec.format = sweep::OutputFormat::csv;
    else if (fmt == "csv+plot") spec.format = sweep::OutputFormat::csv_plot;
    else throw ConfigError("output.format: expected csv or csv+plot", out.line("format"));
    spec.plot.log_x = out.boolean("log_x", false);
    spec.plot.log_y = out.boolean("log_y", false);
    spec.plot.log_color = out.boolean("log_color", false);
    spec.name = out.text("name", "sweep");
    if (spec.name.empty() || spec.name.find_first_of("/\\") != std::string::npos)
        throw ConfigError("output.name: must be a plain file stem", out.line("name"));

    spec.validate();
    return spec;
}

sweep::SweepSpec parse_config(const std::string& text) { return sweep_spec(parse_document(text)); }

ProbeSettings probe_settings(const Document& doc) {
    const Reader r(doc, "probe");
    ProbeSettings s;
    s.x = r.number("x", s.x);
    s.min = r.number("min", s.min);
    s.max = r.number("max", s.max);
    s.count = r.integer("count", s.count);
    if (s.count < 2) throw ConfigError("probe.count: must be >= 2", r.line("count"));
    if (!(s.max > s.min)) throw ConfigError("probe.max: must exceed probe.min", r.line("max"));
    return s;
}

ZeroSettings zero_settings(const Document& doc) {
    const Reader r(doc, "zeros");
    ZeroSettings s;
    const double lambda = model_params(doc).lambda;
    s.grid.nx = r.integer("nx", 64);
    s.grid.ny = r.integer("ny", 64);
    s.grid.x_min = r.number("x_min", 0.0);
    s.grid.x_max = r.number("x_max", lambda);
    s.grid.y_min = r.number("y_min", 0.0);
    s.grid.y_max = r.number("y_max", lambda);
    if (s.grid.nx < 1 || s.grid.ny < 1) throw ConfigError("zeros.nx/ny: must be >= 1", r.line("nx"));
    if (r.entry("alpha_re") || r.entry("alpha_im"))
        s.alpha = std::complex<double>(r.number("alpha_re", 0.0), r.number("alpha_im", 0.0));
    return s;
}

StabilitySettings stability_settings(const Document& doc) {
    const Reader r(doc, "stability");
    StabilitySettings s;
    s.step = r.number("step", s.step);
    if (!(s.step > 0.0)) throw ConfigError("stability.step: must be > 0", r.line("step"));
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace cavityqed::config
