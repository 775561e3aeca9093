#pragma once

#include "far/bandwidth.hpp"
#include "far/error.hpp"
#include "far/model.hpp"
#include "far/oracle.hpp"
#include "far/orchestrator.hpp"
#include "far/placement_portb.hpp"
#include "far/sca_porta.hpp"
#include "far/scenario_io.hpp"
#include "far/simplex.hpp"
#include "far/sweep.hpp"
