// Independent oracle for the eigenform coefficients: direct expansion of
// q * prod_{m<=nmax} (1 - q^m)^24 by repeated sparse multiplication, with
// no shared code with the table builder.

#pragma once

#include "rslab/real.hpp"

#include <cstddef>
#include <vector>

namespace rslab::testing {

std::vector<BigInt> eta_product_tau(std::size_t nmax);

} // namespace rslab::testing
