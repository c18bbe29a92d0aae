#pragma once

#include "pursuit/controls.hpp"
#include "pursuit/dynamics.hpp"
#include "pursuit/policies.hpp"
#include "pursuit/random.hpp"
#include "pursuit/reachability.hpp"
#include "pursuit/scenario.hpp"
#include "pursuit/state_space.hpp"
#include "pursuit/strategy.hpp"
#include "pursuit/time_grid.hpp"
