#include "webly/parallel.hpp"

#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace webly {

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_dynamic(0);
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace webly
