#pragma once

#include "aqm/config_space.hpp"
#include "aqm/dirac.hpp"
#include "aqm/dynamics.hpp"
#include "aqm/errors.hpp"
#include "aqm/fields.hpp"
#include "aqm/hj_system.hpp"
#include "aqm/lorentz_reps.hpp"
#include "aqm/metrics.hpp"
#include "aqm/numerics.hpp"
#include "aqm/weyl_geometry.hpp"
