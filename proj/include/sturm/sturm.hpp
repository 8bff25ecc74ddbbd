#ifndef STURM_STURM_HPP
#define STURM_STURM_HPP

#include "sturm/asymptotics.hpp"
#include "sturm/error.hpp"
#include "sturm/expr.hpp"
#include "sturm/jumps.hpp"
#include "sturm/liouville_green.hpp"
#include "sturm/ode.hpp"
#include "sturm/oscillation.hpp"
#include "sturm/parallel.hpp"
#include "sturm/potential.hpp"
#include "sturm/quadrature.hpp"
#include "sturm/spectra_oracle.hpp"

#endif // STURM_STURM_HPP
