#pragma once

#include "netcent/error.hpp"
#include "netcent/graph.hpp"
#include "netcent/linalg.hpp"
#include "netcent/format.hpp"
#include "netcent/centrality.hpp"
#include "netcent/generators.hpp"
#include "netcent/stats.hpp"
#include "netcent/harness.hpp"
