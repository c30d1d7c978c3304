#pragma once

#include "logeq/branches.hpp"
#include "logeq/density.hpp"
#include "logeq/equilibrium.hpp"
#include "logeq/error.hpp"
#include "logeq/integrate.hpp"
#include "logeq/oracle.hpp"
#include "logeq/quadrature.hpp"
#include "logeq/regime.hpp"
#include "logeq/sampling.hpp"
#include "logeq/series.hpp"
#include "logeq/specfun.hpp"
#include "logeq/transform.hpp"
