#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "adhesion/experiment.hpp"
#include "adhesion/presets.hpp"

using namespace adhesion;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("adhesion-test-" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path path = dir / name;
    std::ofstream out(path);
    out << text;
    return path;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream content;
        content << in.rdbuf();
        files[fs::relative(entry.path(), root).string()] = content.str();
    }
    return files;
}

/// Small both-perspective experiment that runs in well under a second.
std::string small_both_config(const std::string& out_dir) {
    return "perspective = both\n"
           "model = nonlocal-sat\n"
           "K = 0.6\n"
           "gamma = 50\n"
           "cells = 200\n"
           "init = uniform-perturbed\n"
           "seed = 77\n"
           "out_dir = " + out_dir + "\n"
           "pde_dt = 1e-3\n"
           "sde_n = 40\n"
           "sde_dt = 0.01\n"
           "sde_steps = 30\n"
           "sde_snapshot_stride = 15\n"
           "hist_binwidth = 0.1\n";
}

} // namespace

TEST_CASE("config parsing") {
    SUBCASE("minimal config fills the common-parameter defaults") {
        const ExperimentConfig c = parse_config_text(
            "perspective = pde\nmodel = aps\nout_dir = demo\nseed = 3\n");
        CHECK(c.half_length == 1.0);
        CHECK(c.spec.sensing_radius == 0.5);
        CHECK(c.spec.gamma == 1000.0);
        CHECK(c.cells == 1000);
        CHECK(c.pde_dt == 1e-4);
        CHECK(c.sde_eps2 == 0.4);
        CHECK(c.sde_dt == 0.01);
        CHECK(c.spec.kind == ModelKind::Aps);
        CHECK(c.spec.lambda == 0);
    }

    SUBCASE("comments and blank lines are ignored") {
        const ExperimentConfig c = parse_config_text(
            "# experiment\n\nperspective = pde\nmodel = aps # the basic model\n"
            "out_dir = demo\nseed = 3\n");
        CHECK(c.spec.kind == ModelKind::Aps);
    }

    SUBCASE("unknown keys are rejected with their line number") {
        try {
            parse_config_text("perspective = pde\nmodel = aps\nfrobnicate = 1\n");
            FAIL("expected a parse error");
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            CHECK(msg.find("line 3") != std::string::npos);
            CHECK(msg.find("frobnicate") != std::string::npos);
        }
    }

    SUBCASE("validation names the offending field") {
        try {
            parse_config_text("perspective = pde\nmodel = nonlocal-sat\nK = 1.5\n"
                              "out_dir = demo\nseed = 3\n");
            FAIL("expected a validation error");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("model") != std::string::npos);
        }
    }

    SUBCASE("stochastic runs demand a seed") {
        CHECK_THROWS_AS(
            parse_config_text("perspective = sde\nmodel = aps\nout_dir = demo\n"),
            ConfigError);
        // A deterministic pde run does not.
        CHECK_NOTHROW(parse_config_text(
            "perspective = pde\nmodel = aps\ninit = cosine-bump\nout_dir = demo\n"));
    }

    SUBCASE("the concentrated slab is Eulerian-only") {
        CHECK_NOTHROW(parse_config_text("perspective = pde\nmodel = nonlocal-sat\nK = 0.6\n"
                                        "init = concentrated-slab\nout_dir = demo\nseed = 3\n"));
        CHECK_THROWS_AS(
            parse_config_text("perspective = both\nmodel = nonlocal-sat\nK = 0.6\n"
                              "init = concentrated-slab\nout_dir = demo\nseed = 3\n"),
            ConfigError);
    }

    SUBCASE("comma lists are reserved for sweeps") {
        CHECK_THROWS_AS(parse_config_text("perspective = pde\nmodel = aps\nK = 0.2, 0.4\n"
                                          "out_dir = demo\nseed = 3\n"),
                        ConfigError);
    }

    SUBCASE("malformed lines carry their number") {
        try {
            parse_config_text("perspective = pde\nnot a key value pair\n");
            FAIL("expected a parse error");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
}

TEST_CASE("sweep expansion") {
    const fs::path dir = fresh_dir("sweep");
    const fs::path cfg = write_file(dir, "sweep.cfg",
                                    "perspective = pde\nmodel = nonlocal-sat\n"
                                    "K = 0.2, 0.4\nseed = 1, 2\nout_dir = scan\n"
                                    "init = cosine-bump\ncells = 100\npde_steps = 5\n");
    const std::vector<ExperimentConfig> combos = expand_sweep_file(cfg);
    REQUIRE(combos.size() == 4);
    std::set<std::string> dirs;
    for (const ExperimentConfig& c : combos) dirs.insert(c.out_dir);
    CHECK(dirs.count("scan/K=0.2/seed=1") == 1);
    CHECK(dirs.count("scan/K=0.4/seed=2") == 1);

    const fs::path dup = write_file(dir, "dup.cfg",
                                    "perspective = pde\nmodel = aps\nK = 0.5\nK = 0.9\n"
                                    "out_dir = scan\ninit = cosine-bump\n");
    CHECK_THROWS_AS(expand_sweep_file(dup), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("experiment bundle layout") {
    const fs::path root = fresh_dir("bundle");
    const ExperimentConfig config = parse_config_text(small_both_config("bundle"));
    const ExperimentResult result = run_experiment(config, root);

    CHECK(fs::exists(result.out_dir / "config_echo.json"));
    CHECK(fs::exists(result.out_dir / "pde" / "meta.json"));
    CHECK(fs::exists(result.out_dir / "sde" / "meta.json"));
    CHECK(fs::exists(result.out_dir / "sde" / "trajectories.csv"));
    CHECK(fs::exists(result.out_dir / "compare.json"));
    CHECK(fs::exists(result.out_dir / "panels" / "trajectories.gp"));
    CHECK(fs::exists(result.out_dir / "panels" / "density.gp"));

    // Both perspectives share the configured seed.
    std::ifstream echo(result.out_dir / "config_echo.json");
    const nlohmann::json j = nlohmann::json::parse(echo);
    CHECK(j["seed"] == 77);

    // The comparison report carries one row triple per matched snapshot.
    std::ifstream cmp(result.out_dir / "compare.json");
    const nlohmann::json rows = nlohmann::json::parse(cmp);
    CHECK(rows.is_array());
    CHECK(rows.size() >= 3);
    std::set<std::string> fields;
    for (const auto& row : rows) {
        fields.insert(row["field"].get<std::string>());
        CHECK(row["K"].get<double>() == 0.6);
        CHECK(row["l1"].get<double>() >= 0.0);
    }
    CHECK(fields == std::set<std::string>{"density", "drift", "saturation"});

    // Snapshot CSVs carry the documented header.
    bool found_snapshot = false;
    for (const auto& entry : fs::directory_iterator(result.out_dir / "pde")) {
        if (entry.path().extension() != ".csv") continue;
        std::ifstream snap(entry.path());
        std::string header;
        std::getline(snap, header);
        CHECK(header == "x,u,drift,saturation");
        found_snapshot = true;
    }
    CHECK(found_snapshot);
    fs::remove_all(root);
}

TEST_CASE("reruns are byte-identical") {
    const fs::path root_a = fresh_dir("rerun-a");
    const fs::path root_b = fresh_dir("rerun-b");
    ExperimentConfig config = parse_config_text(small_both_config("rerun"));
    config.threads = 1;
    run_experiment(config, root_a);
    ExperimentConfig threaded = config;
    threaded.threads = 2;
    run_experiment(threaded, root_b);
    CHECK(read_tree(root_a) == read_tree(root_b));
    fs::remove_all(root_a);
    fs::remove_all(root_b);
}

TEST_CASE("presets") {
    CHECK(preset_names().size() == 13);
    CHECK(is_preset("fig-aps"));
    CHECK(!is_preset("fig-unknown"));
    CHECK_THROWS_AS(preset("fig-unknown"), std::invalid_argument);

    for (const std::string& name : preset_names()) {
        const ExperimentConfig c = preset(name);
        CHECK(c.out_dir == name);
        CHECK_NOTHROW(validate_experiment(c));
        CHECK(c.spec.gamma == 1000.0);
        CHECK(c.spec.sensing_radius == 0.5);
    }

    const ExperimentConfig aps = preset("fig-aps");
    CHECK(aps.spec.kind == ModelKind::Aps);
    CHECK(aps.spec.attraction == WeightKind::ConstantOne);
    const ExperimentConfig concentrated = preset("fig-nlsat-k06-concentrated");
    CHECK(concentrated.initial.kind == InitialCondition::Kind::ConcentratedSlab);
    CHECK(concentrated.initial.delta == 0.3);
    CHECK(concentrated.perspective == Perspective::Pde);
    const ExperimentConfig localsat = preset("fig-localsat-k04");
    CHECK(localsat.sde_n == 2500);
    CHECK(localsat.a_rule == ARule::InvSqrtN);
    // local-sat reconstruction mesh follows 2/sqrt(N)
    CHECK(localsat.resolved_hist_binwidth() ==
          doctest::Approx(2.0 / std::sqrt(2500.0)).epsilon(1e-12));
}
