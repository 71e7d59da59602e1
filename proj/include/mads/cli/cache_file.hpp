#pragma once

#include "mads/mads.hpp"

#include <string>

namespace mads::cli {

/// Text cache: `#` header lines carry the restart state, then one line per
/// point `x_1 ... x_n | f c_1 ... c_m | OK|FAILED` in completion order.
/// Written to a temporary file and renamed into place.
void write_cache_file(const std::string& path, const RestartSnapshot& snap);

/// Reads a cache file. The params of the returned snapshot are left at
/// their defaults. Throws IoError or ParseError.
RestartSnapshot read_cache_file(const std::string& path);

std::string cache_text(const RestartSnapshot& snap);
RestartSnapshot parse_cache_text(const std::string& text);

}  // namespace mads::cli
