#include "widzard/core.hpp"
#include "widzard/cores/chromatic.hpp"
#include "widzard/cores/independence.hpp"
#include "widzard/cores/vertex_count.hpp"

namespace widzard {

const CoreRegistry &CoreRegistry::builtin() {
  static const CoreRegistry registry = [] {
    CoreRegistry r;
    r.add<ChromaticNumberAtMost>();
    r.add<IndependenceNumber>();
    r.add<VertexCount>();
    return r;
  }();
  return registry;
}

} // namespace widzard
