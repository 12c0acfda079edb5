#include <iostream>

#include <CLI11.hpp>

#include "dynsync/cli.hpp"

namespace {

void add_common(CLI::App* cmd, dynsync::CommandOptions& o) {
    cmd->add_option("scenario", o.scenario_path, "Scenario JSON file")->required();
    cmd->add_option("--seed", o.seed, "Override the master seed");
    cmd->add_option("--horizon", o.horizon, "Override the horizon");
    cmd->add_option("--checks", o.checks, "Comma-separated verifier checks")->delimiter(',');
    cmd->add_option("--out-dir", o.out_dir, "Output directory");
    cmd->add_flag("--freeze-on-detect", o.freeze_on_detect, "Terminating variant: freeze nodes after detection");
    cmd->add_option("--ell", o.ell, "Estimator length override for A4 (non-conforming)");
    cmd->add_flag("--full-lemma-sweep", o.full_lemma_sweep, "Check Lemma 2 bounds on every interval");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Round-based simulator and checker for synchronization in dynamic networks"};
    app.require_subcommand(1);
    dynsync::CommandOptions opts;

    auto* run = app.add_subcommand("run", "Run one scenario and check it");
    add_common(run, opts);
    auto* batch = app.add_subcommand("batch", "Run a scenario under many derived seeds");
    add_common(batch, opts);
    batch->add_option("--seeds", opts.seeds, "Number of runs");
    batch->add_option("--parallel", opts.parallel, "Worker threads");
    batch->add_option("--threshold", opts.threshold, "Largest acceptable failure fraction");
    auto* certify = app.add_subcommand("certify", "Certify the declared connectivity class");
    add_common(certify, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dynsync::kExitSchema;
    }

    if (*run) return dynsync::cmd_run(opts, std::cout, std::cerr);
    if (*batch) return dynsync::cmd_batch(opts, std::cout, std::cerr);
    return dynsync::cmd_certify(opts, std::cout, std::cerr);
}
