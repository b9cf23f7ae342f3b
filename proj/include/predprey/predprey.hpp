#pragma once

#include "predprey/analysis.hpp"
#include "predprey/config.hpp"
#include "predprey/errors.hpp"
#include "predprey/field.hpp"
#include "predprey/grid.hpp"
#include "predprey/noise.hpp"
#include "predprey/ode_reference.hpp"
#include "predprey/reaction.hpp"
#include "predprey/runner.hpp"
#include "predprey/solver.hpp"
#include "predprey/spectral.hpp"
#include "predprey/validation.hpp"
