#pragma once

#include "constants.hpp"
#include "dielectric.hpp"
#include "lifshitz.hpp"
#include "material.hpp"
#include "matsubara.hpp"
#include "optical_data.hpp"
#include "quadrature.hpp"
#include "thermodynamics.hpp"
