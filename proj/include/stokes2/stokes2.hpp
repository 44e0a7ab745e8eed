#pragma once

// Umbrella header: analytical Neumann-series solution of the second Stokes
// problem for a rarefied gas with specular-diffuse wall reflection.

#include "stokes2/asymptotics.hpp"
#include "stokes2/errors.hpp"
#include "stokes2/grid.hpp"
#include "stokes2/inversion.hpp"
#include "stokes2/kernels.hpp"
#include "stokes2/neumann.hpp"
#include "stokes2/oracle.hpp"
#include "stokes2/params.hpp"
#include "stokes2/quadrature.hpp"
#include "stokes2/run.hpp"
