#include "dynsync/batch.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>

#include "dynsync/rng.hpp"

namespace dynsync {

namespace {

const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> names = {
        "synchronization", "detection", "simultaneity", "counting", "lemma_L2a", "lemma_L2b", "lemma_L3",
        "lemma_L4",        "lemmas",    "bound_T2",     "bound_T3", "bound_T4",  "bound_C1",  "bound",
    };
    return names;
}

} // namespace

bool is_known_check(const std::string& name) {
    const auto& names = known_checks();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<Verdict> run_checks(const Trace& trace, const CheckPlan& plan) {
    std::vector<Verdict> out;
    std::optional<std::optional<Round>> t_synch;
    auto synch_round = [&] {
        if (!t_synch) t_synch = find_t_synch(trace);
        return *t_synch;
    };
    for (const std::string& name : plan.checks) {
        if (name == "synchronization") {
            out.push_back(check_synchronization(trace));
        } else if (name == "detection") {
            out.push_back(check_detection(trace, synch_round()));
        } else if (name == "simultaneity") {
            out.push_back(check_simultaneity(trace));
        } else if (name == "counting") {
            out.push_back(check_counting(trace));
        } else if (name == "lemmas") {
            for (auto l : {LemmaCheck::L2a, LemmaCheck::L2b, LemmaCheck::L3, LemmaCheck::L4}) {
                if (l == LemmaCheck::L4 && trace.scenario().params.algorithm != Algorithm::A3) continue;
                out.push_back(check_lemma_bounds(trace, l, plan.lemma));
            }
        } else if (name.starts_with("lemma_")) {
            for (auto l : {LemmaCheck::L2a, LemmaCheck::L2b, LemmaCheck::L3, LemmaCheck::L4}) {
                if (to_string(l) == name) out.push_back(check_lemma_bounds(trace, l, plan.lemma));
            }
        } else if (name == "bound") {
            switch (trace.scenario().params.algorithm) {
            case Algorithm::A2: out.push_back(check_bound_theorem(trace, BoundTheorem::T2)); break;
            case Algorithm::A3: out.push_back(check_bound_theorem(trace, BoundTheorem::T3)); break;
            case Algorithm::A4: out.push_back(check_bound_theorem(trace, BoundTheorem::T4)); break;
            default: {
                Verdict v;
                v.property = "bound";
                v.note = "no detection-time bound for this algorithm";
                out.push_back(v);
            }
            }
        } else if (name.starts_with("bound_")) {
            for (auto b : {BoundTheorem::T2, BoundTheorem::T3, BoundTheorem::T4, BoundTheorem::C1}) {
                if (to_string(b) == name) out.push_back(check_bound_theorem(trace, b));
            }
        } else {
            throw std::invalid_argument("unknown check '" + name + "'");
        }
    }
    return out;
}

bool RunSummary::failed() const {
    if (!error.empty()) return true;
    return std::any_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.status != Status::holds; });
}

RunSummary summarize(const Trace& trace, const CheckPlan& plan) {
    RunSummary s;
    s.seed = trace.scenario().master_seed;
    s.t_synch = find_t_synch(trace);
    s.detection_rounds = detection_rounds(trace);
    const bool all = std::all_of(s.detection_rounds.begin(), s.detection_rounds.end(),
                                 [](const auto& r) { return r.has_value(); });
    if (all && !s.detection_rounds.empty() &&
        std::all_of(s.detection_rounds.begin(), s.detection_rounds.end(),
                    [&](const auto& r) { return r == s.detection_rounds.front(); })) {
        s.common_detection = s.detection_rounds.front();
    }
    s.simultaneous = check_simultaneity(trace).status == Status::holds;
    s.max_msg_bytes = trace.max_msg_bytes();
    s.verdicts = run_checks(trace, plan);
    return s;
}

RunSummary run_and_summarize(const Scenario& scenario, const CheckPlan& plan) {
    try {
        return summarize(run(scenario), plan);
    } catch (const std::exception& e) {
        RunSummary s;
        s.seed = scenario.master_seed;
        s.error = e.what();
        return s;
    }
}

std::vector<RunSummary> batch(std::span<const Scenario> scenarios, const CheckPlan& plan, int parallel) {
    std::vector<RunSummary> out(scenarios.size());
    const auto workers = static_cast<std::size_t>(std::clamp<int>(parallel, 1, 256));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) out[i] = run_and_summarize(scenarios[i], plan);
    };
    if (workers == 1 || scenarios.size() <= 1) {
        work();
        return out;
    }
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < std::min(workers, scenarios.size()); ++w) pool.emplace_back(work);
    }
    return out;
}

std::uint64_t batch_seed(std::uint64_t master_seed, std::uint64_t index) {
    return derive_seed(master_seed, SeedDomain::batch, index);
}

std::vector<Scenario> expand_seeds(const Scenario& base, std::size_t count) {
    std::vector<Scenario> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Scenario s = base;
        s.master_seed = batch_seed(base.master_seed, i);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace dynsync
