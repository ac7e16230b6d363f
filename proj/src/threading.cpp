#include "iqa/threading.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace iqa {

namespace {
int g_threads = 1;
}

void set_threads(int n) {
    if (n < 1) n = 1;
    g_threads = n;
#ifdef _OPENMP
    omp_set_num_threads(n);
#endif
}

int threads() {
    return g_threads;
}

} // namespace iqa
