#include "ob2d/error.hpp"
#include "ob2d/experiments.hpp"
#include "ob2d/initial.hpp"
#include "ob2d/io.hpp"
#include "ob2d/simulation.hpp"

#include <doctest.h>

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

using namespace ob2d;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ob2d_test_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

RunConfig small_run() {
    RunConfig c;
    c.grid.n = 16;
    c.params = ModelParams::paper_normalized(0.5);
    c.stepper.dt = 0.01;
    c.stepper.t_end = 0.2;
    c.initial.kmax = 4.0;
    c.diagnostics.cadence = 5;
    return c;
}

} // namespace

TEST_CASE("csv numbers carry 17 significant digits") {
    CHECK(format_csv_number(0.1) == "1.0000000000000001e-01");
    CHECK(std::stod(format_csv_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("snapshot round trip is bit-exact with the documented layout") {
    TempDir d;
    const GridPtr g = Grid::create(16);
    InitialConditionConfig ic;
    ic.kmax = 4.0;
    State s = make_initial(ic, g);
    s.time = 0.75;
    ModelParams p = ModelParams::paper_normalized(0.3);
    const Snapshot snap = make_snapshot(s, p);
    write_snapshot(d / "a.ob2d", snap);
    CHECK(fs::file_size(d / "a.ob2d") == snapshot_header_bytes + 5 * 16 * 16 * 8);
    const std::string raw = slurp(d / "a.ob2d");
    CHECK(raw.substr(0, 4) == "OB2D");
    const Snapshot back = read_snapshot(d / "a.ob2d");
    CHECK(back.fields == snap.fields);
    CHECK(back.alpha == 0.3);
    CHECK(back.time == 0.75);
    const State st = snapshot_state(back, g);
    CHECK(std::memcmp(st.u[1].values().data(), s.u[1].values().data(), 256 * sizeof(double)) == 0);
}

TEST_CASE("truncated or foreign snapshots are rejected") {
    TempDir d;
    const GridPtr g = Grid::create(8);
    const Snapshot snap = make_snapshot(State{0.0, VectorField::zeros(g), SymTensorField::zeros(g)}, ModelParams{});
    write_snapshot(d / "s.ob2d", snap);
    const std::string raw = slurp(d / "s.ob2d");
    std::ofstream(d / "t.ob2d", std::ios::binary) << raw.substr(0, raw.size() - 3);
    CHECK_THROWS_AS(read_snapshot(d / "t.ob2d"), IoError);
    std::ofstream(d / "x.ob2d", std::ios::binary) << "XXXX" << raw.substr(4);
    CHECK_THROWS_AS(read_snapshot(d / "x.ob2d"), IoError);
    std::ofstream(d / "l.ob2d", std::ios::binary) << raw << "extra";
    CHECK_THROWS_AS(read_snapshot(d / "l.ob2d"), IoError);
    CHECK_THROWS_AS(read_snapshot(d / "missing.ob2d"), IoError);
}

TEST_CASE("checkpoint round trip") {
    TempDir d;
    const GridPtr g = Grid::create(16);
    Checkpoint cp;
    cp.n = 16;
    cp.length = g->length();
    cp.clock = Clock{0.0, 12};
    cp.time = 0.12;
    cp.dt = 0.01;
    InitialConditionConfig ic;
    ic.kmax = 4.0;
    cp.spectra = spectra_of(make_initial(ic, g));
    cp.monitor = {{"a", 1.5}, {"prev:a", -2.0}};
    write_checkpoint(d / "c.ob2c", cp);
    const Checkpoint b = read_checkpoint(d / "c.ob2c");
    CHECK(b.clock.step == 12);
    CHECK(b.time == 0.12);
    CHECK(b.spectra == cp.spectra);
    CHECK(b.monitor == cp.monitor);
}

TEST_CASE("zero-step run writes the header and the initial row only") {
    TempDir d;
    RunConfig c = small_run();
    c.stepper.t_end = 0.0;
    RunOptions o;
    o.out_dir = d / "run";
    const RunOutcome r = run_simulation(c, o);
    CHECK(r.status == StepStatus::ok);
    const CsvTable t = read_csv(o.out_dir + "/" + ledger_file);
    CHECK(t.rows.size() == 1);
    CHECK(t.header[0] == "time");
    CHECK(t.number(0, "step") == 0.0);
    CHECK(fs::exists(o.out_dir + "/config.json"));
    CHECK(parse_config(slurp(o.out_dir + "/config.json")).grid.n == 16);
}

TEST_CASE("ledger cadence, snapshots and restart equivalence") {
    TempDir d;
    RunConfig c = small_run();
    c.output.snapshot_every = 10;
    c.output.checkpoint_every = 10;
    RunOptions whole;
    whole.out_dir = d / "whole";
    const RunOutcome r = run_simulation(c, whole);
    const CsvTable t = read_csv(whole.out_dir + "/" + ledger_file);
    REQUIRE(t.rows.size() == 5); // steps 0, 5, 10, 15, 20
    CHECK(t.number(4, "step") == 20.0);
    CHECK(t.number(4, "time") == doctest::Approx(0.2));
    CHECK(fs::exists(whole.out_dir + "/" + snapshot_name(10)));
    CHECK(r.final_time == 0.2);

    RunConfig first = c;
    first.stepper.max_steps = 10;
    RunOptions split;
    split.out_dir = d / "split";
    run_simulation(first, split);
    split.restart = true;
    run_simulation(c, split);
    CHECK(slurp(whole.out_dir + "/" + ledger_file) == slurp(split.out_dir + "/" + ledger_file));

    RunConfig wrong = c;
    wrong.stepper.dt = 0.02;
    CHECK_THROWS_AS(run_simulation(wrong, split), ConfigError);
}

TEST_CASE("unwritable output directory is an I/O error naming the path") {
    RunConfig c = small_run();
    RunOptions o;
    o.out_dir = "/proc/ob2d_forbidden/run";
    try {
        run_simulation(c, o);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/proc/ob2d_forbidden") != std::string::npos);
    }
}

TEST_CASE("blow-up is reported as data") {
    RunConfig c = small_run();
    c.stepper.blowup_threshold = 1e-3;
    const RunOutcome r = run_simulation(c);
    CHECK(r.status == StepStatus::blowup);
    CHECK(r.rows.size() == 2);
    CHECK(r.rows.back().step == 1);
}

TEST_CASE("plateau test") {
    std::vector<double> t, flat, ramp;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(i * 0.05);
        flat.push_back(1.0 - std::exp(-t.back() * 3.0));
        ramp.push_back(t.back());
    }
    CHECK(plateaus(t, flat));
    CHECK_FALSE(plateaus(t, ramp));
    CHECK(plateaus(t, std::vector<double>(t.size(), 2.0)));
}

TEST_CASE("sweep points and axis names") {
    const RunConfig base = small_run();
    CHECK(sweep_point(base, SweepAxis::alpha, 0.2).params.alpha == 0.2);
    CHECK(sweep_point(base, SweepAxis::resolution, 32).grid.n == 32);
    CHECK(parse_axis("gamma_u") == SweepAxis::gamma_u);
    CHECK_THROWS_AS(parse_axis("zeta"), ConfigError);
    CHECK(sweep_point_dir(SweepAxis::eta, 0.5) == "eta=0.5");
    SweepSpec bad;
    bad.base = base;
    bad.axis = SweepAxis::gamma_u;
    bad.values = {1.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("sweep writes per-point ledgers and a deterministic summary") {
    TempDir d;
    SweepSpec s;
    s.base = small_run();
    s.axis = SweepAxis::alpha;
    s.values = {0.2, 1.0};
    s.out_dir = d / "seq";
    const std::vector<SweepRow> rows = run_sweep(s);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == StepStatus::ok);
    CHECK(rows[1].steps == 20);
    CHECK(fs::exists(s.out_dir + "/alpha=0.2/ledger.csv"));
    CHECK(fs::exists(s.out_dir + "/timings.csv"));
    const CsvTable sum = read_csv(s.out_dir + "/summary.csv");
    CHECK(sum.rows.size() == 2);
    CHECK(sum.number(1, "alpha") == 1.0);

    s.out_dir = d / "par";
    s.parallel = true;
    run_sweep(s);
    CHECK(slurp(d / "seq/summary.csv") == slurp(d / "par/summary.csv"));
}

TEST_CASE("twin runs: zero perturbation and size guard") {
    RunConfig c = small_run();
    TwinSpec spec;
    spec.delta = 0.0;
    const TwinResult z = run_twin(c, spec);
    CHECK(z.status == StepStatus::ok);
    CHECK(z.terminal.V_L2 == 0.0);
    CHECK(z.max_ratio == 0.0);
    spec.delta = 1e-6;
    const TwinResult r = run_twin(c, spec);
    CHECK(r.rows.front().ratio == doctest::Approx(1.0));
    CHECK(r.max_ratio <= 10.0);
    CHECK(r.terminal.time == doctest::Approx(0.2));
    spec.delta = 10.0;
    CHECK_THROWS_AS(run_twin(c, spec), ConfigError);
}

TEST_CASE("identical runs give identical ledgers") {
    TempDir d;
    RunOptions a, b;
    a.out_dir = d / "a";
    b.out_dir = d / "b";
    run_simulation(small_run(), a);
    run_simulation(small_run(), b);
    CHECK(slurp(a.out_dir + "/" + ledger_file) == slurp(b.out_dir + "/" + ledger_file));
}

TEST_CASE("degenerate sweep reproduces the single-run ledger") {
    TempDir d;
    RunConfig c = small_run();
    c.params.alpha = 1.0;
    RunOptions o;
    o.out_dir = d / "single";
    run_simulation(c, o);
    SweepSpec s;
    s.base = c;
    s.axis = SweepAxis::alpha;
    s.values = {1.0};
    s.out_dir = d / "sweep";
    run_sweep(s);
    CHECK(slurp(o.out_dir + "/" + ledger_file) == slurp(s.out_dir + "/alpha=1/ledger.csv"));
}

TEST_CASE("resolution sweep agrees across grids for smooth data") {
    SweepSpec s;
    s.base = small_run();
    s.base.initial.kmax = 4.0;
    s.base.stepper.dt = 5e-3;
    s.base.stepper.t_end = 0.1;
    s.axis = SweepAxis::resolution;
    s.values = {64, 128};
    const std::vector<SweepRow> rows = run_sweep(s);
    auto terminal = [](const SweepRow& r) {
        for (const auto& kv : r.terminal)
            if (kv.first == "tau_L2") return kv.second;
        return -1.0;
    };
    CHECK(std::fabs(terminal(rows[0]) - terminal(rows[1])) <= 1e-6);
}

TEST_CASE("critical alpha = 0 probe with and without corotation is reported") {
    SweepSpec s;
    s.base = small_run();
    s.base.params.alpha = 0.0;
    s.base.stepper.t_end = 1.0;
    s.axis = SweepAxis::eta;
    s.values = {0.0, 1.0};
    const std::vector<SweepRow> rows = run_sweep(s);
    for (const SweepRow& r : rows) {
        CHECK(r.error.empty());
        for (const auto& kv : r.peak) {
            CAPTURE(kv.first);
            CHECK(std::isfinite(kv.second));
        }
        MESSAGE("eta=" << r.value << " status " << std::string(to_string(r.status)) << " peak tau_Linf " << r.peak[4].second);
    }
}
