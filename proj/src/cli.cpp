#include "dynsync/cli.hpp"

#include <filesystem>
#include <fstream>

#include "dynsync/batch.hpp"
#include "dynsync/report.hpp"
#include "dynsync/scenario_file.hpp"

namespace dynsync {

namespace {

// Parses the file and applies overrides. Throws SchemaError.
ScenarioFile prepare(const CommandOptions& opts, nlohmann::json doc) {
    // Seed and horizon go through the document so that derived values
    // (random starts, default graph seed) follow the override.
    if (doc.is_object()) {
        if (opts.seed) doc["seed"] = *opts.seed;
        if (opts.horizon) doc["horizon"] = *opts.horizon;
    }
    ScenarioFile file = parse_scenario(doc);
    Scenario& s = file.scenario;
    if (opts.freeze_on_detect) s.terminate_on_detect = true;
    if (opts.ell) {
        if (s.params.algorithm != Algorithm::A4) throw SchemaError("--ell", "only meaningful for A4");
        s.params.ell_override = *opts.ell;
    }
    if (opts.checks) {
        for (const std::string& c : *opts.checks) {
            if (!is_known_check(c)) throw SchemaError("--checks", "unknown check '" + c + "'");
        }
        file.plan.checks = *opts.checks;
    }
    if (opts.full_lemma_sweep) file.plan.lemma.full_sweep = true;
    if (opts.out_dir) file.output.dir = *opts.out_dir;
    if (opts.seeds) file.batch.seeds = *opts.seeds;
    if (opts.parallel) file.batch.parallel = *opts.parallel;
    if (opts.threshold) file.batch.threshold = *opts.threshold;
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError("scenario", e.what());
    }
    return file;
}

ScenarioFile prepare(const CommandOptions& opts) { return prepare(opts, read_scenario_document(opts.scenario_path)); }

std::ofstream open_output(const OutputSpec& o, const std::string& name) {
    std::filesystem::create_directories(o.dir);
    const auto path = std::filesystem::path(o.dir) / name;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    return f;
}

template <typename Body>
int guarded(std::ostream& err, Body body) {
    try {
        return body();
    } catch (const SchemaError& e) {
        err << "error: invalid scenario at '" << e.key() << "': " << e.what() << '\n';
        return kExitSchema;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitViolated;
    }
}

} // namespace

int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScenarioFile file = prepare(opts);
        const Trace trace = run(file.scenario);
        const std::vector<Verdict> verdicts = run_checks(trace, file.plan);

        {
            auto f = open_output(file.output, file.output.trace);
            f << trace_json_string(trace) << '\n';
        }
        {
            auto f = open_output(file.output, file.output.trace_csv);
            write_trace_csv(trace, f);
        }
        {
            auto f = open_output(file.output, file.output.summary);
            write_verdicts_csv(verdicts, f);
        }

        if (auto t = find_t_synch(trace)) {
            out << "t_synch " << *t << '\n';
        } else {
            out << "t_synch inconclusive\n";
        }
        for (const Verdict& v : verdicts) {
            out << v.property << ' ' << to_string(v.status);
            if (v.witness) {
                out << " at round " << v.witness->round;
                if (v.witness->node) out << " node " << v.witness->node->value;
                if (!v.witness->detail.empty()) out << " (" << v.witness->detail << ')';
            }
            if (!v.note.empty()) out << " [" << v.note << ']';
            out << '\n';
        }
        return exit_code(verdicts);
    });
}

int cmd_batch(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const nlohmann::json doc = read_scenario_document(opts.scenario_path);
        const ScenarioFile file = prepare(opts, doc);
        // Run i is the document re-read under seed batch_seed(master, i), so
        // `run --seed <that seed>` replays it exactly.
        std::vector<Scenario> runs;
        runs.reserve(file.batch.seeds);
        for (std::size_t i = 0; i < file.batch.seeds; ++i) {
            CommandOptions single = opts;
            single.seed = batch_seed(file.scenario.master_seed, i);
            runs.push_back(prepare(single, doc).scenario);
        }
        const std::vector<RunSummary> summaries = batch(runs, file.plan, file.batch.parallel);
        {
            auto f = open_output(file.output, file.output.batch);
            write_batch_csv(summaries, f);
        }
        write_batch_csv(summaries, out);
        for (std::size_t i = 0; i < summaries.size(); ++i) {
            if (!summaries[i].error.empty()) err << "run " << i << ": " << summaries[i].error << '\n';
        }
        return failure_fraction(summaries) <= file.batch.threshold ? kExitHolds : kExitViolated;
    });
}

int cmd_certify(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ScenarioFile file = prepare(opts);
        if (!file.declared_class) {
            out << "no bounded connectivity class declared for " << to_string(file.scenario.graph.params.kind)
                << "; nothing to certify\n";
            return kExitInconclusive;
        }
        const ConnectivityClass& cls = *file.declared_class;
        if (file.scenario.horizon < cls.T) throw SchemaError("horizon", "shorter than the window length T");
        const Certification cert = certify_window(file.scenario.graph_source(), cls, file.scenario.horizon);
        if (cert.certified) {
            out << "certified " << describe(cls) << " over horizon " << cert.horizon << " (" << cert.windows_checked
                << " windows)\n";
            return kExitHolds;
        }
        out << "not " << describe(cls) << ": first failing window t=" << *cert.first_failing_window << '\n';
        return kExitViolated;
    });
}

} // namespace dynsync
