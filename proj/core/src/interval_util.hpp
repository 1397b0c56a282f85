#ifndef PTOSC_SRC_INTERVAL_UTIL_HPP
#define PTOSC_SRC_INTERVAL_UTIL_HPP

#include <functional>
#include <vector>

#include "ptosc/region.hpp"

namespace ptosc::detail {

// Groups a classified grid into maximal same-phase runs and bisects each
// boundary between neighbouring grid points of different phase down to
// refine_tol.  Endpoints at the sweep edges stay unrefined.
std::vector<PhaseInterval> group_and_refine(const std::vector<double>& grid,
                                            const std::vector<Phase>& phases,
                                            const std::function<Phase(double)>& at,
                                            double refine_tol);

}  // namespace ptosc::detail

#endif
