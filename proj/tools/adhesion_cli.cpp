// Command-line runner: single experiments, figure presets, validation suites
// and parameter sweeps. Exit codes: 0 ok, 1 experiment/suite failure,
// 2 config error.

#include <algorithm>
#include <atomic>
#include <exception>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adhesion/experiment.hpp"
#include "adhesion/presets.hpp"
#include "adhesion/suites.hpp"

namespace {

using adhesion::ConfigError;

int run_one(adhesion::ExperimentConfig config, const std::string& out_root, int threads) {
    if (threads > 0) config.threads = threads;
    const auto root = adhesion::resolve_out_root(out_root);
    const adhesion::ExperimentResult result = adhesion::run_experiment(config, root);
    std::cout << config.name << ": wrote " << result.written.size() << " files to "
              << result.out_dir.string() << "\n";
    return 0;
}

int run_sweep(const std::string& path, const std::string& out_root, int jobs) {
    const std::vector<adhesion::ExperimentConfig> combos = adhesion::expand_sweep_file(path);
    const auto root = adhesion::resolve_out_root(out_root);
    std::cout << "sweep: " << combos.size() << " experiment(s)\n";

    std::atomic<std::size_t> next{0};
    std::atomic<int> failures{0};
    const int workers = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t k = next.fetch_add(1);
                if (k >= combos.size()) return;
                try {
                    adhesion::run_experiment(combos[k], root);
                } catch (const std::exception& e) {
                    ++failures;
                    std::cerr << "sweep item " << combos[k].out_dir << " failed: " << e.what()
                              << "\n";
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& combo : combos) std::cout << "  " << (root / combo.out_dir).string() << "\n";
    return failures.load() == 0 ? 0 : 1;
}

int run_suite_cmd(const std::string& name) {
    const adhesion::SuiteReport report = adhesion::run_suite(name);
    nlohmann::json j;
    j["suite"] = report.suite;
    j["pass"] = report.all_pass();
    j["checks"] = nlohmann::json::array();
    for (const adhesion::CheckResult& check : report.checks) {
        std::cerr << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << ": " << check.detail
                  << "\n";
        j["checks"].push_back(
            {{"name", check.name}, {"pass", check.pass}, {"detail", check.detail}});
    }
    std::cout << j.dump(2) << "\n";
    return report.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"nonlocal cell-cell adhesion simulations, Eulerian and Lagrangian"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    std::string out_root;
    int threads = 0;
    app.add_option("--out-root", out_root,
                   "output root directory (default: $ADHESION_OUT_ROOT or ./out)");
    app.add_option("--threads", threads, "worker threads (0 = auto)");

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run one experiment from a config file");
    run_cmd->add_option("config", config_path, "config file (key = value lines)")->required();

    std::string preset_name;
    bool list_presets = false;
    auto* preset_cmd = app.add_subcommand("preset", "run a named figure preset");
    preset_cmd->add_option("name", preset_name, "preset name");
    preset_cmd->add_flag("--list", list_presets, "list preset names and exit");

    std::string suite_name;
    auto* suite_cmd =
        app.add_subcommand("suite", "run a validation suite (invariants | convergence | oracle | figures)");
    suite_cmd->add_option("name", suite_name, "suite name")->required();

    std::string sweep_path;
    int sweep_jobs = 2;
    auto* sweep_cmd = app.add_subcommand("sweep", "expand a config with comma lists and run all");
    sweep_cmd->add_option("config", sweep_path, "sweep config file")->required();
    sweep_cmd->add_option("--jobs", sweep_jobs, "concurrent experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // command-line misuse is a config error
    }

    try {
        if (run_cmd->parsed()) {
            return run_one(adhesion::parse_config_file(config_path), out_root, threads);
        }
        if (preset_cmd->parsed()) {
            if (list_presets) {
                for (const std::string& name : adhesion::preset_names()) std::cout << name << "\n";
                return 0;
            }
            if (!adhesion::is_preset(preset_name)) {
                std::cerr << "unknown preset '" << preset_name << "' (see preset --list)\n";
                return 2;
            }
            return run_one(adhesion::preset(preset_name), out_root, threads);
        }
        if (suite_cmd->parsed()) {
            const auto names = adhesion::suite_names();
            if (std::find(names.begin(), names.end(), suite_name) == names.end()) {
                std::cerr << "unknown suite '" << suite_name << "'\n";
                return 2;
            }
            return run_suite_cmd(suite_name);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep(sweep_path, out_root, sweep_jobs);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "experiment failed: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
