#pragma once

#include "heavytail/asymptotics.hpp"
#include "heavytail/base_process.hpp"
#include "heavytail/digest.hpp"
#include "heavytail/marked.hpp"
#include "heavytail/montecarlo.hpp"
#include "heavytail/parallel.hpp"
#include "heavytail/pareto.hpp"
#include "heavytail/quadrature.hpp"
#include "heavytail/risk_path.hpp"
#include "heavytail/rng.hpp"
#include "heavytail/stats.hpp"
#include "heavytail/version.hpp"
