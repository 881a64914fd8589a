#pragma once

#include "coexist/channel.hpp"
#include "coexist/config.hpp"
#include "coexist/errors.hpp"
#include "coexist/experiment.hpp"
#include "coexist/geometry.hpp"
#include "coexist/interference.hpp"
#include "coexist/jet.hpp"
#include "coexist/metrics.hpp"
#include "coexist/montecarlo.hpp"
#include "coexist/quadrature.hpp"
#include "coexist/scenario_io.hpp"
#include "coexist/units.hpp"
