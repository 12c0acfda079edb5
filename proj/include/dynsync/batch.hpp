#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynsync/engine.hpp"
#include "dynsync/verifier.hpp"

namespace dynsync {

// Names accepted in a scenario's check list.
//   synchronization, detection, simultaneity, counting,
//   lemma_L2a, lemma_L2b, lemma_L3, lemma_L4, lemmas (all four),
//   bound_T2, bound_T3, bound_T4, bound_C1,
//   bound (the bound matching the algorithm: A2 -> T2, A3 -> T3, A4 -> T4)
struct CheckPlan {
    std::vector<std::string> checks;
    LemmaOptions lemma;
};

bool is_known_check(const std::string& name);

std::vector<Verdict> run_checks(const Trace& trace, const CheckPlan& plan);

struct RunSummary {
    std::uint64_t seed = 0;
    std::optional<Round> t_synch;
    std::vector<std::optional<Round>> detection_rounds;
    std::optional<Round> common_detection;
    bool simultaneous = false;
    std::size_t max_msg_bytes = 0;
    std::vector<Verdict> verdicts;
    std::string error;  // non-empty when the run itself failed

    // Violated, inconclusive, or errored.
    bool failed() const;
};

RunSummary summarize(const Trace& trace, const CheckPlan& plan);
RunSummary run_and_summarize(const Scenario& scenario, const CheckPlan& plan);

// Independent runs on `parallel` worker threads. Per-run exceptions are
// recorded in RunSummary::error; the batch carries on.
std::vector<RunSummary> batch(std::span<const Scenario> scenarios, const CheckPlan& plan, int parallel = 1);

// Seed of the i-th run derived from a template's seed.
std::uint64_t batch_seed(std::uint64_t master_seed, std::uint64_t index);
std::vector<Scenario> expand_seeds(const Scenario& base, std::size_t count);

} // namespace dynsync
