#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rabi/experiment.hpp"

using namespace rabi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "rabi_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parsing: comments, whitespace, types") {
    const Config cfg = Config::from_string(
        "# a comment\n"
        "model = semiclassical   # trailing comment\n"
        "model.rabi_ratio = 0.25\n"
        "method.n_steps = 40\n"
        "model.rwa = true\n"
        "\n");
    CHECK(cfg.require("model") == "semiclassical");
    CHECK(cfg.get_double("model.rabi_ratio", 0) == doctest::Approx(0.25));
    CHECK(cfg.get_int("method.n_steps", 0) == 40);
    CHECK(cfg.get_bool("model.rwa", false));
    CHECK(cfg.get("missing", "fallback") == "fallback");
    CHECK_THROWS_AS((void)Config::from_string("no equals sign"), ValidationError);
    CHECK_THROWS_AS((void)Config::from_string("model.omega = not_a_number\n").get_double("model.omega", 0),
                    ValidationError);
    CHECK_THROWS_AS((void)Config::from_string("figure = fig99\n"), ValidationError);
}

TEST_CASE("preset expansion: explicit keys override preset defaults") {
    const Config cfg = Config::from_string("figure = fig8\nmethod.n_steps = 12\n");
    CHECK(cfg.get_int("method.n_steps", 0) == 12);       // explicit wins
    CHECK(cfg.require("model") == "semiclassical");      // pulled from preset
    CHECK(cfg.get("method", "") == "magnus_concat");
}

TEST_CASE("preset listing is stable and carries the paper bindings") {
    const std::string a = list_presets();
    const std::string b = list_presets();
    CHECK(a == b);
    CHECK(a.find("fig8") != std::string::npos);
    CHECK(a.find("method.n_steps = 3000") != std::string::npos);
    CHECK(a.find("fig10") != std::string::npos);
    CHECK(a.find("model.coupling_ratio = 0.12") != std::string::npos);
    CHECK(a.find("fig11") != std::string::npos);
    for (const auto& p : presets()) CHECK(!p.description.empty());
}

TEST_CASE("run_experiment writes deterministic CSVs") {
    const fs::path dir = fresh_dir("run_det");
    Config cfg = Config::from_string(
        "mode = run\n"
        "model = semiclassical\n"
        "model.rabi_ratio = 0.1\n"
        "method = rk4\n"
        "method.grid_density = 0.05\n"
        "run.horizon = 20.0\n"
        "run.observables = re_cg,re_ce\n");
    cfg.set("output.dir", dir.string());

    const RunRecord rec1 = run_experiment(cfg);
    REQUIRE(rec1.files_written.size() == 1);
    const std::string first = slurp(dir / "trajectory.csv");
    CHECK(first.find("t,re_cg,re_ce") != std::string::npos);
    CHECK(first.find("# model = semiclassical") != std::string::npos);

    (void)run_experiment(cfg);  // rerun over the same outputs
    CHECK(slurp(dir / "trajectory.csv") == first);
}

TEST_CASE("run_experiment validation failures") {
    Config base = Config::from_string(
        "mode = run\nmodel = semiclassical\nmethod = rk4\nrun.horizon = 5.0\n");
    {
        Config cfg = base;
        cfg.set("run.observables", "");
        CHECK_THROWS_AS((void)run_experiment(cfg), ValidationError);
    }
    {
        Config cfg = base;
        cfg.set("run.observables", "mean_photons");  // quantum observable, wrong model
        CHECK_THROWS_AS((void)run_experiment(cfg), ValidationError);
    }
    {
        Config cfg = base;
        cfg.set("run.horizon", "-3");
        CHECK_THROWS_AS((void)run_experiment(cfg), ValidationError);
    }
    {
        Config cfg = Config::from_string(
            "mode = run\nmodel = mathieu\nmethod = magnus_concat\nmethod.n_steps = 5\n"
            "run.horizon = 5.0\n");
        CHECK_THROWS_AS((void)run_experiment(cfg), ValidationError);
    }
}

TEST_CASE("Fock truncation breach raises the numerics error") {
    Config cfg = Config::from_string(
        "mode = run\n"
        "model = quantum\n"
        "model.coupling_ratio = 0.5\n"
        "model.n_max = 3\n"
        "method = rk4\n"
        "method.grid_density = 0.01\n"
        "run.horizon = 10.0\n"
        "run.observables = mean_photons\n");
    cfg.set("output.dir", fresh_dir("trunc").string());
    CHECK_THROWS_AS((void)run_experiment(cfg), NumericsError);
}

TEST_CASE("fig8 preset emits spectrum and peaks with the decay fit") {
    Config cfg = Config::from_string("figure = fig8\n");
    cfg.set("output.dir", fresh_dir("fig8").string());
    const RunRecord rec = run_experiment(cfg);
    REQUIRE(rec.spectrum.has_value());
    REQUIRE(rec.peaks.has_value());
    CHECK(rec.peaks->fit.valid);
    CHECK(rec.files_written.size() == 3);
}

TEST_CASE("compare: sup-norm table on the common grid") {
    Config cfg = Config::from_string(
        "mode = compare\n"
        "model = semiclassical\n"
        "model.rabi_ratio = 0.1\n"
        "run.horizon = 20.0\n"
        "compare.observable = re_cg\n"
        "methods = rk4,magnus\n"
        "rk4.type = rk4\n"
        "rk4.grid_density = 0.01\n"
        "magnus.type = magnus_concat\n"
        "magnus.scheme = order4_gauss2\n"
        "magnus.n_steps = 200\n");
    cfg.set("output.dir", fresh_dir("compare").string());
    const CompareResult res = compare_methods(cfg);
    CHECK(res.grid.n_points == 201);  // coarsest = magnus boundaries
    CHECK(res.sup_diff[0][1] < 1e-6);
    CHECK(res.files_written.size() == 2);
}

TEST_CASE("compare rejects trivial or inconsistent method lists") {
    Config cfg = Config::from_string(
        "mode = compare\nmodel = semiclassical\nrun.horizon = 10\nmethods = rk4\nrk4.type = rk4\n");
    CHECK_THROWS_AS((void)compare_methods(cfg), ValidationError);

    Config cfg2 = Config::from_string(
        "mode = compare\nmodel = semiclassical\nrun.horizon = 10\n"
        "methods = rk4,other\nrk4.type = rk4\nother.type = rk4\nother.horizon = 7\n");
    CHECK_THROWS_AS((void)compare_methods(cfg2), ValidationError);
}

TEST_CASE("picard-vs-rk4 comparison diverges after roughly one Rabi period") {
    Config cfg = Config::from_string(
        "mode = compare\n"
        "model = semiclassical\n"
        "model.rabi_ratio = 0.1\n"
        "run.horizon = 125.6637061435917\n"  // Omega t = 4 pi
        "compare.observable = re_cg\n"
        "methods = rk4,picard3\n"
        "rk4.type = rk4\n"
        "picard3.type = picard\n"
        "picard3.order = 3\n");
    cfg.set("output.dir", fresh_dir("fig1ish").string());
    const CompareResult res = compare_methods(cfg);
    // small until Omega t ~ 1, large by the end of the window
    double early = 0.0, late = 0.0;
    for (int j = 0; j < res.grid.n_points; ++j) {
        const double omt = 0.1 * res.grid.at(j);
        const double d = std::abs(res.series[0][j] - res.series[1][j]);
        if (omt <= 1.0) early = std::max(early, d);
        late = std::max(late, d);
    }
    CHECK(early < 0.05);
    CHECK(late > 0.5);
}

TEST_CASE("peak-time sweep writes the extraction table") {
    Config cfg = Config::from_string(
        "mode = sweep\n"
        "model = quantum\n"
        "model.n_max = 16\n"
        "sweep.kind = peak_times\n"
        "sweep.lambdas = 0.05,0.1\n"
        "method.grid_density = 0.01\n");
    const fs::path dir = fresh_dir("peaks_sweep");
    cfg.set("output.dir", dir.string());
    std::vector<std::string> files;
    (void)run_sweep(cfg, &files);
    REQUIRE(files.size() == 1);
    const std::string table = slurp(dir / "peak_times.csv");
    CHECK(table.find("lambda,tau_p") != std::string::npos);
}

TEST_CASE("coarse-grid warnings surface in the run record") {
    Config cfg = Config::from_string(
        "mode = run\n"
        "model = semiclassical\n"
        "method = picard\n"
        "method.order = 2\n"
        "method.grid_density = 0.2\n"
        "run.horizon = 10.0\n"
        "run.observables = re_cg\n");
    cfg.set("output.dir", fresh_dir("coarse").string());
    const RunRecord rec = run_experiment(cfg);
    REQUIRE(!rec.warnings.empty());
    CHECK(rec.warnings[0].find("coarse") != std::string::npos);
}
