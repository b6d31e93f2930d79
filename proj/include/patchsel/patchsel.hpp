#pragma once

// Stochastic patch-selection dynamics: invasion calculus, SDE simulation,
// and evolutionarily stable strategy solving for populations distributing
// themselves over patchy, randomly fluctuating environments.

#include "patchsel/analytic.hpp"
#include "patchsel/errors.hpp"
#include "patchsel/ess.hpp"
#include "patchsel/io.hpp"
#include "patchsel/landscape.hpp"
#include "patchsel/rng.hpp"
#include "patchsel/simulate.hpp"
#include "patchsel/stats.hpp"
