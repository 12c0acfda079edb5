#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dynsync/node_id.hpp"

namespace dynsync {

inline constexpr int kExitHolds = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitSchema = 3;

// Command-line overrides applied on top of the scenario file.
struct CommandOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<Round> horizon;
    std::optional<std::vector<std::string>> checks;
    std::optional<std::string> out_dir;
    bool freeze_on_detect = false;
    std::optional<int> ell;
    bool full_lemma_sweep = false;
    std::optional<std::size_t> seeds;
    std::optional<int> parallel;
    std::optional<double> threshold;
};

// Run one scenario, check it, write trace (JSON + CSV) and verdict summary.
int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err);
// k runs with derived seeds; exit 0 iff the failure fraction <= threshold.
int cmd_batch(const CommandOptions& opts, std::ostream& out, std::ostream& err);
// Certify the declared connectivity class over the scenario horizon.
int cmd_certify(const CommandOptions& opts, std::ostream& out, std::ostream& err);

} // namespace dynsync
