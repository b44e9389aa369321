//==============================================================================
// mns_main.cpp
// Command-line front end. Links the C API only; manifests are read from
// --config and passed through as JSON strings. Exit codes: 0 pass,
// 1 assertion failure, 2 config error, 3 numerical divergence.
//==============================================================================

#include "mns.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int exit_code(mns_status st) {
    switch (st) {
    case MNS_OK: return 0;
    case MNS_ERR_ASSERTION: return 1;
    case MNS_ERR_CONFIG: return 2;
    case MNS_ERR_DIVERGENCE: return 3;
    case MNS_ERR_RUNTIME: return 2;
    }
    return 2;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

nlohmann::json load_config(const std::string& path) {
    if (path.empty()) return nlohmann::json::object();
    nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw std::runtime_error("config file is not valid JSON: " + path);
    return j;
}

std::string out_root(const std::string& flag) {
    if (!flag.empty()) return flag;
    const char* env = std::getenv("MNS_OUT");
    return env ? env : "out";
}

int report(mns_status st) {
    if (st != MNS_OK) std::cerr << "error: " << mns_last_error() << "\n";
    return exit_code(st);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mnslab: pseudospectral mild Navier-Stokes laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir, suite, traj_path;
    int threads = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int stride = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON manifest path");
        cmd->add_option("--out", out_dir, "output directory (default $MNS_OUT or ./out)");
        cmd->add_option("--threads", threads, "worker threads for sweeps");
        cmd->add_option("--seed", seed, "override manifest seed")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--stride", stride, "trajectory save stride override");
    };

    CLI::App* run = app.add_subcommand("run", "solve one scenario manifest");
    add_common(run);
    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep manifest");
    add_common(sweep);
    CLI::App* verify = app.add_subcommand(
        "verify", "run a verification suite "
                  "(cutoffs|decay|heat_spacetime|support|global_criterion|profiles)");
    verify->add_option("suite", suite, "suite name")->required();
    add_common(verify);
    CLI::App* analyze = app.add_subcommand("analyze", "post-hoc diagnostics of a trajectory");
    analyze->add_option("trajectory", traj_path, "trajectory file (.mnst)")->required();
    add_common(analyze);

    CLI11_PARSE(app, argc, argv);

    try {
        nlohmann::json config = load_config(config_path);
        if (seed_set) config["seed"] = seed;
        if (stride > 0) config["output"]["stride"] = stride;
        const std::string dir = out_root(out_dir);
        const std::string text = config.dump();

        if (run->parsed()) return report(mns_run_scenario(text.c_str(), dir.c_str()));
        if (sweep->parsed()) return report(mns_run_sweep(text.c_str(), dir.c_str(), threads));
        if (verify->parsed()) {
            const std::string report_path = dir + "/" + suite + "_report.txt";
            const mns_status st =
                mns_run_verify(suite.c_str(), text.c_str(), dir.c_str(), report_path.c_str());
            if (st == MNS_ERR_ASSERTION) {
                std::cerr << mns_last_error();
                std::cerr << "verify " << suite << ": FAILED\n";
                return 1;
            }
            if (st != MNS_OK) return report(st);
            std::cout << "verify " << suite << ": PASSED\n";
            return 0;
        }
        if (analyze->parsed())
            return report(mns_run_analyze(traj_path.c_str(), text.c_str(), dir.c_str()));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
