#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cavityqed/config.hpp"
#include "cavityqed/emit.hpp"
#include "cavityqed/figures.hpp"

using namespace cavityqed;
using namespace cavityqed::sweep;

namespace {

SweepSpec intensity_spec() {
    return config::parse_config(
        "[model]\ng0 = 10\nomega = 10\nkappa = 10\ndelta_a = -1000\n"
        "[sweep]\naxis = N\nmin = 1\nmax = 1e4\ncount = 40\nspacing = log\n");
}

std::string without_run_line(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line))
        if (line.rfind("# run:", 0) != 0) out += line + "\n";
    return out;
}

std::vector<std::string> lines(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "cavityqed_test_sweep";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("rows follow the axis order with any thread count") {
    auto spec = intensity_spec();
    spec.threads = 1;
    const auto serial = run_sweep(spec);
    spec.threads = 4;
    const auto parallel = run_sweep(spec);
    REQUIRE(serial.rows.size() == spec.axis.values.size());
    REQUIRE(parallel.rows.size() == serial.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].value == spec.axis.values[i]);
        CHECK(parallel.rows[i].value == spec.axis.values[i]);
        for (std::size_t c = 0; c < serial.columns.size(); ++c)
            CHECK(serial.rows[i].cells[c] == parallel.rows[i].cells[c]);
    }
}

TEST_CASE("identical specs give identical CSV") {
    const auto spec = intensity_spec();
    const auto a = emit::format_csv(run_sweep(spec));
    const auto b = emit::format_csv(run_sweep(spec));
    CHECK(without_run_line(a) == without_run_line(b));
}

TEST_CASE("intensities saturate and atomic emission falls off") {
    const auto r = run_sweep(intensity_spec());
    const auto last = r.rows.size() - 1;
    CHECK(*r.cell(last, "i_cav") == doctest::Approx(10.0).epsilon(0.01));
    // i_at rises then falls
    std::size_t peak = 0;
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        if (*r.cell(i, "i_at") > *r.cell(peak, "i_at")) peak = i;
    CHECK(peak > 0);
    CHECK(peak < last);
    CHECK(*r.cell(last, "i_at") < 0.05 * *r.cell(peak, "i_at"));
}

TEST_CASE("CSV layout") {
    auto spec = intensity_spec();
    spec.axis.values = {1.0, 2.0, 3.0};
    const auto r = run_sweep(spec);
    const auto all = lines(emit::format_csv(r));
    std::size_t comments = 0;
    for (const auto& l : all)
        if (!l.empty() && l[0] == '#') ++comments;
    CHECK(all.size() == comments + 1 + 3);
    CHECK(all[comments] == "N,i_cav,i_at,flag");
    CHECK(all[comments + 1].rfind("1.0000000000000000e+00,", 0) == 0);
    const std::string text = emit::format_csv(r);
    CHECK(text.find("# engine: analytic") != std::string::npos);
    CHECK(text.find("# tool: cavityqed simulate") != std::string::npos);
    CHECK(text.find("kappa=10") != std::string::npos);
}

TEST_CASE("empty observable list gives metadata-only rows") {
    auto spec = intensity_spec();
    spec.outputs = std::vector<std::string>{};
    const auto r = run_sweep(spec);
    CHECK(r.columns.empty());
    CHECK(r.rows.size() == spec.axis.values.size());
    CHECK_THROWS_AS(emit::format_svg(r), ValidationError);
}

TEST_CASE("failing points are recorded in their rows") {
    SweepSpec spec;
    spec.engine = Engine::quantum;
    spec.base = with_pattern(ModelParams{}, 1);
    spec.base.n_max = 4;
    spec.base.omega = 0.05;
    spec.axis = AxisSpec{Axis::omega, {0.05, 3.0, 0.1}};
    const auto r = run_sweep(spec);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].flag.empty());
    CHECK(r.rows[1].flag.rfind("error:", 0) == 0);
    CHECK(r.rows[1].flag.find("truncation") != std::string::npos);
    for (const auto& c : r.rows[1].cells) CHECK_FALSE(c.has_value());
    CHECK(r.rows[2].cells[0].has_value());

    const auto text = emit::format_csv(r);
    CHECK(text.find(",,,,error: Fock truncation") != std::string::npos);
}

TEST_CASE("spec validation") {
    SweepSpec spec;
    spec.base = with_pattern(ModelParams{}, 1);
    spec.engine = Engine::quantum;
    spec.axis = AxisSpec{Axis::n_atoms, {1.0, 5.0}};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.axis.values = {};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
    spec.axis.values = {1.0};
    spec.outputs = std::vector<std::string>{"stiffness_estimate"};
    CHECK_THROWS_WITH_AS(spec.validate(), doctest::Contains("stiffness_estimate"), ValidationError);
    spec.outputs.reset();
    CHECK_NOTHROW(spec.validate());
    spec.axis = AxisSpec{Axis::delta_p, {0.0}};
    CHECK_THROWS_AS(spec.validate(), ValidationError);
}

TEST_CASE("quantum engine with the analytic cross-check") {
    SweepSpec spec;
    spec.engine = Engine::quantum;
    spec.cross_check = true;
    spec.base = with_pattern(ModelParams{}, 1);
    spec.base.g0 = 10.0;
    spec.base.omega = 0.1;
    spec.axis = AxisSpec{Axis::kappa, {0.1, 1.0, 10.0}};
    const auto r = run_sweep(spec);
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        REQUIRE(r.cell(i, "cross_dev_i_cav").has_value());
        CHECK(*r.cell(i, "cross_dev_i_cav") < 0.05);
        CHECK(*r.cell(i, "cross_dev_i_at") < 0.05);
        CHECK(r.cell(i, "g2").has_value());
    }
}

TEST_CASE("oracle and semiclassical engines") {
    SweepSpec spec;
    spec.engine = Engine::oracle;
    spec.base = with_pattern(ModelParams{}, 3);
    spec.base.g0 = 2.0;
    spec.base.kappa = 0.0;
    spec.axis = AxisSpec{Axis::delta_p, {-1.0, 0.0, 1.0}};
    const auto probe = run_sweep(spec);
    CHECK(*probe.cell(1, "probe_rate") == doctest::Approx(0.0));
    CHECK(*probe.cell(0, "probe_rate") > 0.0);

    SweepSpec mech;
    mech.engine = Engine::semiclassical;
    mech.base.g0 = 10.0;
    mech.base.omega = 10.0;
    mech.base.kappa = 10.0;
    mech.base.delta_a = -1000.0;
    mech.base = with_pattern(mech.base, 200);
    mech.axis = AxisSpec{Axis::delta_c, {-5.0, 5.0}};
    const auto r = run_sweep(mech);
    CHECK(*r.cell(0, "stable") == 1.0);
    CHECK(*r.cell(1, "stable") == 0.0);
}

TEST_CASE("two-atom ratio peaks when the atoms are a wavelength apart") {
    SweepSpec spec;
    spec.engine = Engine::quantum;
    spec.base.g0 = 10.0;
    spec.base.omega = 1.0;
    spec.base.delta_a = 100.0;
    spec.base.kappa = 0.2;
    spec.base.n_atoms = 2;
    spec.base.positions = {Position{0.0, 0.0}, Position{0.0, 0.0}};
    spec.outputs = std::vector<std::string>{"ratio"};
    spec.axis = AxisSpec{Axis::x2, sample_axis(0.1, 1.0, 10, Spacing::linear)};
    const auto r = run_sweep(spec);
    std::size_t best = 0;
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        if (*r.cell(i, "ratio") > *r.cell(best, "ratio")) best = i;
    CHECK(r.rows[best].value == doctest::Approx(1.0));
}

TEST_CASE("plots") {
    auto spec = intensity_spec();
    spec.plot.log_x = spec.plot.log_y = true;
    const auto svg = emit::format_svg(run_sweep(spec));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("i_cav") != std::string::npos);
    CHECK(svg.find("i_at") != std::string::npos);

    SweepResult map;
    map.name = "map";
    map.axis_names = {"x1", "x2"};
    map.columns = {"ratio"};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) map.rows.push_back({i * 0.5, j * 0.5, {1.0 + i + j}, "", 0.0});
    const auto heat = emit::format_svg(map);
    CHECK(heat.find("<polyline") == std::string::npos);
    CHECK(heat.find("<rect") != std::string::npos);

    SweepResult empty;
    empty.name = "empty";
    const auto path = scratch("empty.svg");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(emit::emit_plot(empty, path.string()), ValidationError);
    CHECK_FALSE(std::filesystem::exists(path));
}

TEST_CASE("file output") {
    auto spec = intensity_spec();
    const auto r = run_sweep(spec);
    const auto path = scratch("intensity.csv");
    emit::emit_csv(r, path.string());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(without_run_line(buf.str()) == without_run_line(emit::format_csv(r)));
    CHECK_THROWS_WITH_AS(emit::emit_csv(r, "/nonexistent/dir/x.csv"), doctest::Contains("/nonexistent/dir/x.csv"),
                         RuntimeFailure);
}

TEST_CASE("built-in figures") {
    CHECK(figures::figure_names().size() == 7);
    CHECK_THROWS_AS(figures::figure_specs("fig9"), ValidationError);

    const auto fig2a = figures::figure_specs("fig2a").front();
    CHECK(fig2a.base.omega == 10.0);
    CHECK(fig2a.base.g0 == 10.0);
    CHECK(fig2a.base.kappa == 10.0);
    CHECK(fig2a.base.delta_a == -1000.0);
    CHECK(fig2a.axis.values.front() == 1.0);
    CHECK(fig2a.axis.values.back() == 1e4);

    const auto fig3b = figures::run_figure("fig3b");
    CHECK(fig3b.columns == std::vector<std::string>{"inv_kappa", "i_cav", "i_at", "free_space_rate"});
    CHECK(*fig3b.cell(0, "i_cav") > 100.0 * *fig3b.cell(0, "i_at"));

    const auto fig4 = figures::run_figure("fig4");
    REQUIRE(fig4.column_index("g2_g10").has_value());
    REQUIRE(fig4.column_index("inv_kappa").has_value());
    CHECK_FALSE(fig4.column_index("inv_kappa_g10").has_value());
    CHECK(*fig4.cell(0, "g2_g10") == doctest::Approx(1.0).epsilon(0.01));
}
