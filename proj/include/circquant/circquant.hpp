#pragma once

#include "asymptotics.hpp"
#include "bessel.hpp"
#include "density.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "grid_oracle.hpp"
#include "integrate.hpp"
#include "lloyd.hpp"
#include "mixture.hpp"
#include "quadrature.hpp"
#include "voronoi.hpp"
