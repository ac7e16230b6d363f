#pragma once

namespace iqa {

// Worker count for the OpenMP kernels. All parallel paths produce results
// bit-identical to the serial order, so this only affects wall clock.
void set_threads(int n);
int threads();

} // namespace iqa
