#pragma once

// State files: one JSON header line followed by the amplitudes (pure) or
// matrix entries (density, row-major) as (re, im) pairs. The binary encoding
// stores little-endian float64; the text encoding writes one "re,im" per line.

#include <iosfwd>
#include <optional>
#include <string>

#include "lossent/channels.hpp"
#include "lossent/witnesses.hpp"

namespace lossent {

enum class Encoding { Binary, Text };

struct StateFile {
  StateRef state;
  std::optional<Ownership> ownership;
};

void write_state(std::ostream& os, const StateFile& f, Encoding enc = Encoding::Binary);
void write_state_file(const std::string& path, const StateFile& f, Encoding enc = Encoding::Binary);

StateFile read_state(std::istream& is);
StateFile read_state_file(const std::string& path);

/// Ownership stored in the file, or one party per subsystem.
Ownership ownership_or_trivial(const StateFile& f);
const DimVector& dims_of(const StateRef& s);
DensityMatrix to_density(const StateRef& s);

}  // namespace lossent
