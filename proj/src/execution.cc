#include "longtail/execution.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace longtail {

void SetThreadCount(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int ThreadCount() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace longtail
