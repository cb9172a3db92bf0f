#pragma once

// Umbrella header: distribution functions, moments and reliability of
// weighted lattice polynomials (min/max/constant expressions) of independent
// random variables.

#include "wlp/cdf.hpp"
#include "wlp/dist.hpp"
#include "wlp/errors.hpp"
#include "wlp/expr.hpp"
#include "wlp/lattice.hpp"
#include "wlp/moments.hpp"
#include "wlp/numeric.hpp"
#include "wlp/oracle.hpp"
#include "wlp/quadrature.hpp"
#include "wlp/reliability.hpp"
#include "wlp/rng.hpp"
#include "wlp/setfunc.hpp"
