// Command-line front end:
//   biphoton <experiment> --config <file> [--out <dir>] [--workers <n>]
// Exit codes: 0 success, 2 invalid config/usage, 3 solver failure, 4 I/O failure.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "biphoton/io.hpp"
#include "biphoton/run_config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"two-excitation simulator for modulated qubit arrays in a waveguide"};
    app.name("biphoton");

    std::string experiment, config_path, out_dir;
    int workers = -1;
    app.add_option("experiment", experiment,
                   "one of: bands, chern, finite, dos, interface, critical-phase")
        ->required();
    app.add_option("--config", config_path, "flat key = value config file")->required();
    app.add_option("--out", out_dir, "output directory (overrides config out_dir)");
    app.add_option("--workers", workers, "worker threads (overrides config workers)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    biphoton::RunConfig cfg;
    try {
        cfg = biphoton::load_config(config_path);
        cfg.experiment = experiment;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (workers >= 0) cfg.workers = workers;
    } catch (const biphoton::io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    try {
        biphoton::run(cfg);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const biphoton::io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
