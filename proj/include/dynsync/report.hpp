#pragma once

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "dynsync/batch.hpp"
#include "dynsync/engine.hpp"
#include "dynsync/verifier.hpp"

namespace dynsync {

// Trace document, keys in this order:
//   scenario: canonical scenario echo
//   rounds: [{ t, edges: [[src, dst], ...], active_edges: [[src, dst], ...],
//              nodes: [{ id, active, before?, sent, after?, msg_bytes }] }]
// States carry r, synch and the algorithm's own fields (ho, ok, y, n_hat);
// messages carry the variant tag and the same payload fields.
nlohmann::ordered_json trace_to_json(const Trace& trace);
std::string trace_json_string(const Trace& trace);

// One row per (round, node), state at the end of the round. Passive rows
// leave the state columns empty.
inline constexpr const char* kTraceCsvHeader = "round,node,r,synch,ho_size,ok_size,n_hat,msg_bytes";
void write_trace_csv(const Trace& trace, std::ostream& out);

inline constexpr const char* kVerdictCsvHeader = "property,status,round,node,other,measured,note";
void write_verdicts_csv(std::span<const Verdict> verdicts, std::ostream& out);
nlohmann::ordered_json verdict_to_json(const Verdict& v);

// One row per run, then "failure_fraction,<fraction>,<failures>,<runs>".
inline constexpr const char* kBatchCsvHeader =
    "run,seed,t_synch,detection_round,simultaneous,max_msg_bytes,status,failed";
void write_batch_csv(std::span<const RunSummary> runs, std::ostream& out);
double failure_fraction(std::span<const RunSummary> runs);

} // namespace dynsync
