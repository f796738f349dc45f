// Shared small-scale pipeline for the unit suite.  Built once per binary.

#pragma once

#include "rslab/eigenform.hpp"
#include "rslab/mainterm.hpp"
#include "rslab/rankin.hpp"

namespace rslab::testing {

inline constexpr std::size_t kFixtureNmax = 4000;

const EigenformTable& small_eigen();          // reference build, nmax 4000
const RankinTable& small_table();             // from small_eigen
const MainTermConstants& small_constants();   // calibrated at X = 2000

// Synthetic table with c_n = value for every n (bypasses the builder).
RankinTable constant_table(std::size_t nmax, const Real& value);

} // namespace rslab::testing
