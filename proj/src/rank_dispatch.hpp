#pragma once

#include "curvflow/error.hpp"

namespace curvflow::ym {

// Runs f.template operator()<R>() for the runtime rank r.
template <class F>
decltype(auto) dispatch_rank(int r, F&& f) {
  switch (r) {
    case 1: return f.template operator()<1>();
    case 2: return f.template operator()<2>();
    case 3: return f.template operator()<3>();
    case 4: return f.template operator()<4>();
    case 5: return f.template operator()<5>();
    case 6: return f.template operator()<6>();
    case 7: return f.template operator()<7>();
    case 8: return f.template operator()<8>();
    default: throw DimensionError("rank must be in [1, 8]");
  }
}

}  // namespace curvflow::ym
