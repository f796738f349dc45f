#include "rslab/parallel.hpp"

namespace rslab {

namespace {
unsigned g_threads = 1;
}

unsigned thread_count() { return g_threads; }

void set_thread_count(unsigned n) { g_threads = n == 0 ? 1 : n; }

} // namespace rslab
