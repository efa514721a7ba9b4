#pragma once
// Portable persistence for solved fixed points: a JSON header (metadata,
// solver diagnostics, name of the value dump) next to a CSV file with one
// row per (r, m) node.  Text only, so artifacts diff cleanly and reload
// bit-identically for synthesis without re-solving.

#include <string>

#include "bltk/inner.hpp"

namespace bltk {

// Writes json_path and a CSV named in the header (same directory, basename of
// json_path with a .csv extension).  Doubles are printed round-trip exact.
void save_fixed_point(const FixedPointResult& fp, const std::string& json_path);

// Reads the header and the CSV it names (resolved relative to json_path).
FixedPointResult load_fixed_point(const std::string& json_path);

}  // namespace bltk
