#include "algebroid/parallel.hpp"

#include <atomic>

namespace algebroid {

namespace {
std::atomic<Exec> g_exec{Exec::Parallel};
}

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec e) { g_exec.store(e); }

}  // namespace algebroid
