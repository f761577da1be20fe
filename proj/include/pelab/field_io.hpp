#pragma once

#include "pelab/grid.hpp"

#include <string>
#include <vector>

namespace pelab {

/// Binary container: "PELAB1", then mode, nx, ny, nz as little-endian int32, then the
/// components one after another as float64, each in the grid's storage order (z fastest).
void write_field(const std::string& path, const std::vector<const SField*>& comps);
void write_field(const std::string& path, const SField& f);
void write_field(const std::string& path, const HField& u);

/// Reads every component; the component count follows from the payload size.
/// Periodic channels are restored with the given period (the header does not store it).
std::vector<SField> read_field(const std::string& path, double period = 0.0);

/// x,y,z,value... rows for plotting.
void write_field_csv(const std::string& path, const std::vector<const SField*>& comps);

} // namespace pelab
