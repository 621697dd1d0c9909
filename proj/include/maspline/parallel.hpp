#pragma once

namespace maspline {

// Number of threads used by the OpenMP assembly kernels.  Defaults to the
// OpenMP runtime's value; the MA_SPLINE_THREADS environment variable (>= 1)
// caps it.  Returns 1 when built without OpenMP.
int max_threads();

}  // namespace maspline
