// Umbrella header for the non-binary polar coding toolkit.

#pragma once

#include "polarkit/channel.hpp"
#include "polarkit/json_io.hpp"
#include "polarkit/kernel.hpp"
#include "polarkit/polar.hpp"
#include "polarkit/rng.hpp"
#include "polarkit/search.hpp"
#include "polarkit/signal_set.hpp"
#include "polarkit/sim.hpp"
#include "polarkit/spectrum.hpp"
