#include "cavityqed/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "cavityqed/analytic.hpp"
#include "cavityqed/semiclassical.hpp"
#include "cavityqed/steady_state.hpp"

#ifndef CAVITYQED_VERSION
#define CAVITYQED_VERSION "0.0.0"
#endif

namespace cavityqed::sweep {

namespace {

using Values = std::map<std::string, double>;

struct PointOutcome {
    Values values;
    std::vector<std::string> flags;
};

double free_space_rate(const ModelParams& p) {
    const double om2 = p.omega * p.omega;
    return p.gamma * om2 / (p.gamma * p.gamma / 4.0 + p.delta_a * p.delta_a + 2.0 * om2);
}

void common_values(const ModelParams& p, Values& v) {
    if (p.kappa > 0.0) v["inv_kappa"] = 1.0 / p.kappa;
    v["free_space_rate"] = free_space_rate(p);
}

void intensity_values(double i_cav, double i_at, double photons, analytic::Complex field, Values& v) {
    v["i_cav"] = i_cav;
    v["i_at"] = i_at;
    v["mean_photons"] = photons;
    v["field_re"] = field.real();
    v["field_im"] = field.imag();
    if (i_at > 0.0) v["ratio"] = i_cav / i_at;
}

PointOutcome eval_analytic(const SweepSpec& spec, const ModelParams& p, double probe_detuning) {
    PointOutcome out;
    if (spec.axis.axis == Axis::delta_p) {
        out.values["probe_rate"] = analytic::probe_rate(p, spec.probe_x, probe_detuning);
        return out;
    }
    const double site = p.positions.empty() ? 0.0 : p.positions.front().x;
    const auto r = analytic::weak_excitation(p, p.n_atoms, site);
    intensity_values(r.i_cav, r.i_at, std::norm(r.alpha), r.alpha, out.values);
    out.values["pi"] = r.pi_n;
    out.values["s"] = r.s;
    if (p.kappa > 0.0 && p.g0 != 0.0) {
        const auto d = analytic::derived_scales(p, p.n_atoms);
        out.values["n_critical"] = d.n_critical;
        out.values["coop_c"] = d.coop_c;
        out.values["coop_c1"] = d.coop_c1;
        out.values["i_at_limit"] = d.i_at_limit;
        out.values["i_cav_limit"] = d.i_cav_limit;
    }
    if (!r.below_saturation) out.flags.emplace_back("beyond_weak_drive");
    return out;
}

PointOutcome eval_quantum(const SweepSpec& spec, const ModelParams& p) {
    PointOutcome out;
    const auto ss = solve_model(p, spec.max_dim);
    const auto& o = ss.obs;
    intensity_values(o.i_cav, o.i_at, o.mean_photons, o.field, out.values);
    if (o.g2) out.values["g2"] = *o.g2;
    else out.flags.emplace_back("g2_undefined");
    double sum = 0.0;
    for (std::size_t n = 0; n < o.pi_n.size(); ++n) {
        out.values["pi_" + std::to_string(n + 1)] = o.pi_n[n];
        sum += o.pi_n[n];
    }
    if (!o.pi_n.empty()) out.values["pi"] = sum / static_cast<double>(o.pi_n.size());
    out.values["coherent_fidelity"] = o.coherent_fidelity;
    out.values["top_population"] = o.top_population;
    out.values["n_max_used"] = ss.n_max;

    if (spec.cross_check && p.n_atoms <= 2) {
        const auto lin = analytic::linear_response_oracle(p, p.positions);
        const double a_cav = lin.i_cav(p.kappa);
        const double a_at = lin.i_at(p.gamma);
        out.values["analytic_i_cav"] = a_cav;
        out.values["analytic_i_at"] = a_at;
        if (a_cav > 0.0) out.values["cross_dev_i_cav"] = std::abs(o.i_cav - a_cav) / a_cav;
        if (a_at > 0.0) out.values["cross_dev_i_at"] = std::abs(o.i_at - a_at) / a_at;
    }
    return out;
}

PointOutcome eval_oracle(const SweepSpec& spec, const ModelParams& p, double probe_detuning) {
    PointOutcome out;
    if (spec.axis.axis == Axis::delta_p) {
        const double grid[] = {probe_detuning};
        if (p.positions.empty())
            out.values["probe_rate"] = analytic::probe_response_oracle(p, spec.probe_x, grid).front();
        else
            out.values["probe_rate"] = analytic::probe_response_oracle(p, p.positions, grid).front();
        return out;
    }
    const auto st = analytic::linear_response_oracle(p, p.positions);
    intensity_values(st.i_cav(p.kappa), st.i_at(p.gamma), std::norm(st.alpha), st.alpha, out.values);
    if (!st.sigma_bar.empty()) {
        double sum = 0.0;
        for (const auto& s : st.sigma_bar) sum += std::norm(s);
        out.values["pi"] = sum / static_cast<double>(st.sigma_bar.size());
    }
    return out;
}

PointOutcome eval_semiclassical(const ModelParams& p) {
    PointOutcome out;
    if (!semiclassical::far_off_resonance(p)) out.flags.emplace_back("near_resonance");
    const semiclassical::Configuration c{p, p.positions};
    const auto r = semiclassical::stability(c);
    out.values["max_eig_real"] = r.max_eig_real;
    out.values["stable"] = r.stable ? 1.0 : 0.0;
    out.values["jacobian_diag"] = r.jacobian.diagonal().mean();
    double fmax = 0.0;
    for (double f : r.forces) fmax = std::max(fmax, std::abs(f));
    out.values["max_force"] = fmax;
    if (r.estimated_stiffness) out.values["stiffness_estimate"] = *r.estimated_stiffness;
    else out.flags.emplace_back("estimate_inapplicable");
    return out;
}

PointOutcome evaluate(const SweepSpec& spec, double v1, std::optional<double> v2) {
    ModelParams p = apply_axis(spec.base, spec.axis.axis, v1);
    if (spec.axis2) p = apply_axis(p, spec.axis2->axis, *v2);
    const double probe_detuning = spec.axis.axis == Axis::delta_p ? v1 : 0.0;
    p.validate();

    PointOutcome out;
    switch (spec.engine) {
        case Engine::analytic: out = eval_analytic(spec, p, probe_detuning); break;
        case Engine::quantum: out = eval_quantum(spec, p); break;
        case Engine::oracle: out = eval_oracle(spec, p, probe_detuning); break;
        case Engine::semiclassical: out = eval_semiclassical(p); break;
    }
    common_values(p, out.values);
    return out;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += sep;
        s += parts[i];
    }
    return s;
}

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

std::string tool_version() { return CAVITYQED_VERSION; }

std::string to_string(Engine e) {
    switch (e) {
        case Engine::analytic: return "analytic";
        case Engine::quantum: return "quantum";
        case Engine::oracle: return "oracle";
        case Engine::semiclassical: return "semiclassical";
    }
    return "?";
}

std::string to_string(Axis a) {
    switch (a) {
        case Axis::n_atoms: return "N";
        case Axis::kappa: return "kappa";
        case Axis::omega: return "omega";
        case Axis::delta_c: return "delta_c";
        case Axis::delta_a: return "delta_a";
        case Axis::x1: return "x1";
        case Axis::x2: return "x2";
        case Axis::delta_p: return "delta_p";
    }
    return "?";
}

std::string to_string(Spacing s) {
    switch (s) {
        case Spacing::linear: return "linear";
        case Spacing::log: return "log";
        case Spacing::inverse: return "inverse";
    }
    return "?";
}

Engine parse_engine(const std::string& s) {
    for (Engine e : {Engine::analytic, Engine::quantum, Engine::oracle, Engine::semiclassical})
        if (to_string(e) == s) return e;
    throw ValidationError("engine: unknown value '" + s + "' (analytic|quantum|oracle|semiclassical)");
}

Axis parse_axis(const std::string& s) {
    for (Axis a : {Axis::n_atoms, Axis::kappa, Axis::omega, Axis::delta_c, Axis::delta_a, Axis::x1,
                   Axis::x2, Axis::delta_p})
        if (to_string(a) == s) return a;
    throw ValidationError("axis: unknown value '" + s +
                          "' (N|kappa|omega|delta_c|delta_a|x1|x2|delta_p)");
}

Spacing parse_spacing(const std::string& s) {
    for (Spacing sp : {Spacing::linear, Spacing::log, Spacing::inverse})
        if (to_string(sp) == s) return sp;
    throw ValidationError("spacing: unknown value '" + s + "' (linear|log|inverse)");
}

std::vector<double> sample_axis(double min, double max, int count, Spacing spacing) {
    if (count < 1) throw ValidationError("count must be >= 1");
    if (!std::isfinite(min) || !std::isfinite(max)) throw ValidationError("min/max must be finite");
    if (count == 1) return {min};
    std::vector<double> v(static_cast<std::size_t>(count));
    const double last = count - 1;
    switch (spacing) {
        case Spacing::linear:
            for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = min + (max - min) * (i / last);
            break;
        case Spacing::log:
            if (!(min > 0.0) || !(max > 0.0)) throw ValidationError("log spacing needs min, max > 0");
            for (int i = 0; i < count; ++i)
                v[static_cast<std::size_t>(i)] = std::exp(std::log(min) + (std::log(max) - std::log(min)) * (i / last));
            break;
        case Spacing::inverse:
            if (!(min > 0.0) || !(max > 0.0)) throw ValidationError("inverse spacing needs min, max > 0");
            for (int i = 0; i < count; ++i)
                v[static_cast<std::size_t>(i)] = 1.0 / (1.0 / min + (1.0 / max - 1.0 / min) * (i / last));
            break;
    }
    v.front() = min;
    v.back() = max;
    return v;
}

ModelParams apply_axis(const ModelParams& base, Axis axis, double value) {
    ModelParams p = base;
    switch (axis) {
        case Axis::n_atoms: {
            const int n = static_cast<int>(std::llround(value));
            const double offset = base.positions.empty() ? 0.0 : base.positions.front().x;
            p.n_atoms = n;
            p.positions = pattern_positions(n, p.lambda, offset);
            break;
        }
        case Axis::kappa: p.kappa = value; break;
        case Axis::omega: p.omega = value; break;
        case Axis::delta_c: p.delta_c = value; break;
        case Axis::delta_a: p.delta_a = value; break;
        case Axis::x1:
            if (p.positions.empty()) throw ValidationError("axis x1 needs at least one atom");
            p.positions[0].x = value;
            break;
        case Axis::x2:
            if (p.positions.size() < 2) throw ValidationError("axis x2 needs at least two atoms");
            p.positions[1].x = value;
            break;
        case Axis::delta_p: break;
    }
    return p;
}

std::vector<std::string> available_outputs(Engine e, Axis axis, int n_atoms) {
    std::vector<std::string> common{"inv_kappa", "free_space_rate"};
    std::vector<std::string> out;
    const std::vector<std::string> intensities{"i_cav", "i_at", "mean_photons", "field_re", "field_im", "ratio", "pi"};
    switch (e) {
        case Engine::analytic:
            if (axis == Axis::delta_p) out = {"probe_rate"};
            else {
                out = intensities;
                out.insert(out.end(), {"s", "n_critical", "coop_c", "coop_c1", "i_at_limit", "i_cav_limit"});
            }
            break;
        case Engine::oracle:
            out = axis == Axis::delta_p ? std::vector<std::string>{"probe_rate"} : intensities;
            break;
        case Engine::quantum:
            out = intensities;
            out.insert(out.end(), {"g2", "coherent_fidelity", "top_population", "n_max_used", "analytic_i_cav",
                                   "analytic_i_at", "cross_dev_i_cav", "cross_dev_i_at"});
            for (int n = 1; n <= std::max(n_atoms, kQuantumMaxAtoms); ++n) out.push_back("pi_" + std::to_string(n));
            break;
        case Engine::semiclassical:
            out = {"max_eig_real", "stable", "jacobian_diag", "stiffness_estimate", "max_force"};
            break;
    }
    out.insert(out.end(), common.begin(), common.end());
    return out;
}

std::vector<std::string> default_outputs(Engine e, Axis axis) {
    switch (e) {
        case Engine::analytic:
        case Engine::oracle:
            if (axis == Axis::delta_p) return {"probe_rate"};
            return {"i_cav", "i_at"};
        case Engine::quantum: return {"i_cav", "i_at", "mean_photons", "g2"};
        case Engine::semiclassical: return {"max_eig_real", "stable", "jacobian_diag", "stiffness_estimate"};
    }
    return {};
}

std::vector<std::string> SweepSpec::resolved_outputs() const {
    std::vector<std::string> out = outputs ? *outputs : default_outputs(engine, axis.axis);
    if (cross_check && engine == Engine::quantum && (!outputs || !outputs->empty())) {
        for (const char* c : {"analytic_i_cav", "analytic_i_at", "cross_dev_i_cav", "cross_dev_i_at"})
            if (std::find(out.begin(), out.end(), c) == out.end()) out.emplace_back(c);
    }
    return out;
}

void SweepSpec::validate() const {
    base.validate();
    if (axis.values.empty()) throw ValidationError("sweep.values: empty");
    for (double v : axis.values)
        if (!std::isfinite(v)) throw ValidationError("sweep.values: non-finite value");
    if (axis2) {
        if (axis2->values.empty()) throw ValidationError("sweep.values2: empty");
        if (axis2->axis == axis.axis) throw ValidationError("sweep.axis2: must differ from axis");
        if (axis2->axis == Axis::delta_p || axis2->axis == Axis::n_atoms)
            throw ValidationError("sweep.axis2: only kappa, omega, delta_c, delta_a, x1, x2 allowed");
        for (double v : axis2->values)
            if (!std::isfinite(v)) throw ValidationError("sweep.values2: non-finite value");
    }
    if (threads < 0) throw ValidationError("sweep.threads: must be >= 0");

    int max_atoms = base.n_atoms;
    if (axis.axis == Axis::n_atoms) {
        for (double v : axis.values) {
            if (v < 0.0) throw ValidationError("sweep.values: N must be >= 0");
            max_atoms = std::max(max_atoms, static_cast<int>(std::llround(v)));
        }
    }
    auto uses = [&](Axis a) { return axis.axis == a || (axis2 && axis2->axis == a); };
    if (uses(Axis::x1) && base.n_atoms < 1 && axis.axis != Axis::n_atoms)
        throw ValidationError("sweep.axis: x1 needs n_atoms >= 1");
    if (uses(Axis::x2) && base.n_atoms < 2 && axis.axis != Axis::n_atoms)
        throw ValidationError("sweep.axis: x2 needs n_atoms >= 2");
    if (axis.axis == Axis::delta_p && engine != Engine::analytic && engine != Engine::oracle)
        throw ValidationError("sweep.axis: delta_p needs engine analytic or oracle");
    if (engine == Engine::quantum && max_atoms > kQuantumMaxAtoms)
        throw ValidationError("sweep.engine: quantum engine supports N <= " +
                              std::to_string(kQuantumMaxAtoms) + " (requested " +
                              std::to_string(max_atoms) + ")");

    const auto allowed = available_outputs(engine, axis.axis, max_atoms);
    for (const auto& o : resolved_outputs())
        if (std::find(allowed.begin(), allowed.end(), o) == allowed.end())
            throw ValidationError("output.observables: '" + o + "' not available for engine " +
                                  to_string(engine));
}

std::optional<std::size_t> SweepResult::column_index(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) return std::nullopt;
    return static_cast<std::size_t>(it - columns.begin());
}

std::optional<double> SweepResult::cell(std::size_t row, const std::string& column) const {
    const auto idx = column_index(column);
    if (!idx || row >= rows.size()) return std::nullopt;
    return rows[row].cells[*idx];
}

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    const auto t_start = std::chrono::steady_clock::now();

    SweepResult result;
    result.name = spec.name;
    result.plot = spec.plot;
    result.axis_names.push_back(to_string(spec.axis.axis));
    if (spec.axis2) result.axis_names.push_back(to_string(spec.axis2->axis));
    result.columns = spec.resolved_outputs();

    for (double v1 : spec.axis.values) {
        if (spec.axis2) {
            for (double v2 : spec.axis2->values) result.rows.push_back(SweepRow{v1, v2, {}, {}, 0.0});
        } else {
            result.rows.push_back(SweepRow{v1, std::nullopt, {}, {}, 0.0});
        }
    }

    auto work = [&](SweepRow& row) {
        const auto t0 = std::chrono::steady_clock::now();
        row.cells.assign(result.columns.size(), std::nullopt);
        try {
            const PointOutcome out = evaluate(spec, row.value, row.value2);
            for (std::size_t c = 0; c < result.columns.size(); ++c) {
                const auto it = out.values.find(result.columns[c]);
                if (it != out.values.end()) row.cells[c] = it->second;
            }
            row.flag = join(out.flags, ";");
        } catch (const std::exception& e) {
            std::fill(row.cells.begin(), row.cells.end(), std::nullopt);
            row.flag = std::string("error: ") + e.what();
        }
        row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    unsigned threads = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(result.rows.size()));
    if (threads <= 1) {
        for (auto& row : result.rows) work(row);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < result.rows.size(); i = next++) work(result.rows[i]);
            });
        for (auto& th : pool) th.join();
    }

    const auto& b = spec.base;
    std::ostringstream params;
    params << "n_atoms=" << b.n_atoms << " g0=" << format_number(b.g0) << " omega=" << format_number(b.omega)
           << " delta_a=" << format_number(b.delta_a) << " delta_c=" << format_number(b.delta_c)
           << " gamma=" << format_number(b.gamma) << " kappa=" << format_number(b.kappa)
           << " lambda=" << format_number(b.lambda)
           << " n_max=" << (b.n_max ? std::to_string(*b.n_max) : std::string("auto"));
    std::vector<std::string> xs;
    for (const auto& pos : b.positions) xs.push_back(format_number(pos.x) + ":" + format_number(pos.y));

    result.metadata.emplace_back("tool", "cavityqed simulate " + tool_version());
    result.metadata.emplace_back("name", spec.name);
    result.metadata.emplace_back("engine", to_string(spec.engine));
    result.metadata.emplace_back("params", params.str());
    result.metadata.emplace_back("positions", xs.empty() ? "none" : join(xs, ","));
    result.metadata.emplace_back("axis", to_string(spec.axis.axis) + " (" + std::to_string(spec.axis.values.size()) + " values)");
    if (spec.axis2)
        result.metadata.emplace_back("axis2", to_string(spec.axis2->axis) + " (" +
                                                  std::to_string(spec.axis2->values.size()) + " values)");
    if (spec.axis.axis == Axis::delta_p) result.metadata.emplace_back("probe_x", format_number(spec.probe_x));
    if (spec.engine == Engine::quantum) {
        std::set<int> used;
        for (std::size_t r = 0; r < result.rows.size(); ++r)
            if (auto v = result.cell(r, "n_max_used")) used.insert(static_cast<int>(*v));
        std::vector<std::string> u;
        for (int n : used) u.push_back(std::to_string(n));
        result.metadata.emplace_back("truncation",
                                     b.n_max ? "n_max=" + std::to_string(*b.n_max)
                                             : "auto (default " + std::to_string(default_fock_cutoff(b)) +
                                                   (u.empty() ? std::string() : ", used " + join(u, ",")) + ")");
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

SweepResult merge_columns(const SweepResult& a, const std::string& suffix_a, const SweepResult& b,
                          const std::string& suffix_b) {
    if (a.rows.size() != b.rows.size()) throw ValidationError("merge_columns: row counts differ");
    SweepResult out = a;
    out.columns.clear();
    for (const auto& c : a.columns) out.columns.push_back(c + suffix_a);
    for (const auto& c : b.columns) out.columns.push_back(c + suffix_b);
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        if (a.rows[r].value != b.rows[r].value || a.rows[r].value2 != b.rows[r].value2)
            throw ValidationError("merge_columns: axis values differ");
        auto& row = out.rows[r];
        row.cells.insert(row.cells.end(), b.rows[r].cells.begin(), b.rows[r].cells.end());
        std::vector<std::string> flags;
        if (!a.rows[r].flag.empty()) flags.push_back(a.rows[r].flag + suffix_a);
        if (!b.rows[r].flag.empty()) flags.push_back(b.rows[r].flag + suffix_b);
        row.flag = join(flags, ";");
        row.wall_seconds += b.rows[r].wall_seconds;
    }
    for (const auto& [k, v] : b.metadata) out.metadata.emplace_back(k + suffix_b, v);
    out.wall_seconds += b.wall_seconds;
    return out;
}

}  // namespace cavityqed::sweep
