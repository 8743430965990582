#pragma once

#include "dgo/bitcodec.hpp"
#include "dgo/neighborhood.hpp"
#include "dgo/objective.hpp"
#include "dgo/parallel.hpp"
#include "dgo/engine.hpp"
#include "dgo/multistart.hpp"
#include "dgo/objectives.hpp"
#include "dgo/bench.hpp"
#include "dgo/report.hpp"
#include "dgo/commands.hpp"
