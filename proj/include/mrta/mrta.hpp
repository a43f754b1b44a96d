#pragma once

#include "mrta/allocator.hpp"
#include "mrta/domain.hpp"
#include "mrta/error.hpp"
#include "mrta/generator.hpp"
#include "mrta/ilp.hpp"
#include "mrta/incentive.hpp"
#include "mrta/matching.hpp"
#include "mrta/random.hpp"
#include "mrta/report.hpp"
#include "mrta/scenario_io.hpp"
#include "mrta/sim.hpp"
