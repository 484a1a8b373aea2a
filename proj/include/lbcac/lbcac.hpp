#pragma once

// Umbrella header for the load-balanced call admission control toolkit.

#include "lbcac/admission.hpp"
#include "lbcac/calibration.hpp"
#include "lbcac/commands.hpp"
#include "lbcac/error.hpp"
#include "lbcac/flowpaths.hpp"
#include "lbcac/io.hpp"
#include "lbcac/lp.hpp"
#include "lbcac/matrix.hpp"
#include "lbcac/model.hpp"
#include "lbcac/oracle.hpp"
#include "lbcac/rng.hpp"
#include "lbcac/simulator.hpp"
