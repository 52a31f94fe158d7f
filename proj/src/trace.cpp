#include "galoiscache/trace.hpp"

#include <charconv>
#include <sstream>
#include <string>

#include "galoiscache/errors.hpp"

namespace galoiscache {

std::vector<TraceRecord> parse_trace(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::string dom, op, addr, extra;
    if (!(fields >> dom)) continue;
    if (!(fields >> op >> addr)) throw TraceError(lineno, "expected '<domain> <R|W> <hex address>'");
    if (fields >> extra) throw TraceError(lineno, "trailing field '" + extra + "'");

    TraceRecord rec;
    rec.line = lineno;
    auto [dp, dec] = std::from_chars(dom.data(), dom.data() + dom.size(), rec.domain);
    if (dec != std::errc{} || dp != dom.data() + dom.size()) throw TraceError(lineno, "bad domain id '" + dom + "'");

    if (op == "R" || op == "r")
      rec.write = false;
    else if (op == "W" || op == "w")
      rec.write = true;
    else
      throw TraceError(lineno, "access type must be R or W, got '" + op + "'");

    std::string_view hex = addr;
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    auto [ap, aec] = std::from_chars(hex.data(), hex.data() + hex.size(), rec.addr, 16);
    if (hex.empty() || aec != std::errc{} || ap != hex.data() + hex.size())
      throw TraceError(lineno, "bad hex address '" + addr + "'");
    out.push_back(rec);
  }
  return out;
}

std::vector<AccessOutcome> replay_trace(Cache& cache, const std::vector<TraceRecord>& trace) {
  std::vector<AccessOutcome> out;
  out.reserve(trace.size());
  for (const auto& rec : trace) {
    if (rec.domain >= cache.config().max_domains())
      throw TraceError(rec.line, "unknown domain id " + std::to_string(rec.domain) + " (cache admits " +
                                     std::to_string(cache.config().max_domains()) + ")");
    out.push_back(cache.access(rec.domain, rec.addr));
  }
  return out;
}

}  // namespace galoiscache
