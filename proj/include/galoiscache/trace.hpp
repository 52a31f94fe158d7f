#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <vector>

#include "galoiscache/cache.hpp"

namespace galoiscache {

// One line of a trace file: `<domain_id> <R|W> <hex_address>`.
// Blank lines and `#` comments are skipped.
struct TraceRecord {
  DomainId domain = 0;
  bool write = false;  // recorded, does not affect placement
  Address addr = 0;
  std::size_t line = 0;

  bool operator==(const TraceRecord&) const = default;
};

// Throws TraceError carrying the 1-based line number of the first bad line.
std::vector<TraceRecord> parse_trace(std::istream& in);

// Replays every record; a domain the cache rejects raises TraceError for
// that record's line.
std::vector<AccessOutcome> replay_trace(Cache& cache, const std::vector<TraceRecord>& trace);

}  // namespace galoiscache
