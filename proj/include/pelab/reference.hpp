#pragma once

// Straightforward serial implementations kept as oracles for the parallel kernels.

#include "pelab/grid.hpp"
#include "pelab/mollify.hpp"

namespace pelab::reference {

/// Direct convolution, one output node at a time.
SField mollify_direct(const SField& f, const KernelStencil& st);

/// Max over nodes of |f(x + offset) - f(x)| for a periodic horizontal offset (in cells),
/// or a vertical offset dk with both nodes inside [kmin, kmax].
double max_increment(const SField& f, const SField* f2, int di, int dj, int dk, int kmin, int kmax);

double integrate(const SField& f);

} // namespace pelab::reference
