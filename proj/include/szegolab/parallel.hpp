#ifndef SZEGOLAB_PARALLEL_HPP
#define SZEGOLAB_PARALLEL_HPP

#include <functional>

namespace szegolab {

// Hardware concurrency capped by the SZEGOLAB_THREADS environment variable.
int max_threads();

// Runs fn(0..n-1) on up to max_threads() workers. Callers write results into
// preallocated index-addressed slots and reduce serially afterwards, so
// output does not depend on the thread count. Jacobi coefficient caches must
// be pre-extended (ensure) before entering a parallel region.
void parallel_for(int n, const std::function<void(int)>& fn);

} // namespace szegolab

#endif
