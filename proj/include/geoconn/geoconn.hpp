#pragma once

// Everything: geometry, graph, oracle, reporters, classes, engine,
// separator and the workload harness.
#include "geoconn/classes.hpp"
#include "geoconn/engine.hpp"
#include "geoconn/harness.hpp"
#include "geoconn/oracle.hpp"
#include "geoconn/reporters.hpp"
#include "geoconn/separator.hpp"
#include "geoconn/workload.hpp"
