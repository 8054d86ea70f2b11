#pragma once

#include "tauberlab/game.hpp"
#include "tauberlab/games.hpp"
#include "tauberlab/lasso.hpp"
#include "tauberlab/payoffs.hpp"
#include "tauberlab/prng.hpp"
#include "tauberlab/report.hpp"
#include "tauberlab/simplex.hpp"
#include "tauberlab/solver.hpp"
#include "tauberlab/tauberian.hpp"
#include "tauberlab/value_map.hpp"
