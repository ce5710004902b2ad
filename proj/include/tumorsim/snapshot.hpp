#pragma once

#include <filesystem>
#include <iosfwd>

#include "tumorsim/grid.hpp"

namespace tumorsim {

/// Plain-text field snapshot: a header line "nx ny hx hy time" followed by
/// nx*ny values, one per line, in storage order (x fastest), printed with
/// 17 significant digits so that reading back is exact.
void write_snapshot(std::ostream& os, const ScalarField& f, double time);
void write_snapshot(const std::filesystem::path& path, const ScalarField& f, double time);

struct Snapshot {
  ScalarField field;
  double time;
};

/// Reads a snapshot; the domain lengths are reconstructed as n * h.
Snapshot read_snapshot(std::istream& is);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace tumorsim
