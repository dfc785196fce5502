#pragma once

#include <string>

#include "json.hpp"

namespace warplag {

using Json = nlohmann::ordered_json;

/// Serialize `doc` with doubles printed to 17 significant digits (lossless
/// round trip) and non-finite values emitted as null.  Keys keep insertion
/// order.  `indent` < 0 gives the compact single-line form.
std::string dump_report(const Json& doc, int indent = 2);

/// Write `doc` to `path` (or stdout when `path` is empty), trailing newline
/// included.
void write_report(const Json& doc, const std::string& path);

/// One entry for a report's "checks" array.
Json check_record(const std::string& name, bool pass, double max_residual, double tolerance);

} // namespace warplag
