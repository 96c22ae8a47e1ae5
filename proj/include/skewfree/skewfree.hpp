#pragma once

// Umbrella header: exact arithmetic in truncated skew Laurent series over
// rational function towers, expression trees with involutions, the
// derivation/twist hypothesis checkers, the scenario catalog, and the
// freeness certifier with its report types.

#include "skewfree/certifier.hpp"
#include "skewfree/report_json.hpp"
#include "skewfree/runner.hpp"
#include "skewfree/scenario.hpp"
