#pragma once

#include "walk2sat/dimacs.hpp"
#include "walk2sat/formula.hpp"
#include "walk2sat/harness.hpp"
#include "walk2sat/index_set.hpp"
#include "walk2sat/instrumentation.hpp"
#include "walk2sat/rng.hpp"
#include "walk2sat/two_sat.hpp"
#include "walk2sat/ucp.hpp"
#include "walk2sat/variable_graph.hpp"
#include "walk2sat/walksat.hpp"
