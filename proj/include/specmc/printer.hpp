#pragma once

#include <string>

#include "specmc/explorer.hpp"

namespace specmc {

// Render a system back to concrete syntax.  parse(program_text(parse(s)))
// equals parse(s) structurally.
std::string program_text(const Program& prog);

// Trace rendering: one `proc: action` line per visible label.
std::string trace_text(const Trace& t, const Program& prog);

// Cache contents as canonical location names.
std::string cache_text(const MemoryImage& img, const AddressMap& amap);

// Final global valuation as `name=value` pairs (arrays elementwise).
std::string finals_text(const MemoryImage& img, const Program& prog);

// One jsonl record per run: {"labels": [...], "finals": {...}, "cache":
// [...]}.  Byte-stable for a fixed program and flags.
std::string run_jsonl(const RunResult& run, const Program& prog);

}  // namespace specmc
