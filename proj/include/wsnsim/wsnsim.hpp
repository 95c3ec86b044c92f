#pragma once

#include "wsnsim/batch.hpp"
#include "wsnsim/config.hpp"
#include "wsnsim/energy.hpp"
#include "wsnsim/engine.hpp"
#include "wsnsim/metrics.hpp"
#include "wsnsim/network.hpp"
#include "wsnsim/rng.hpp"
#include "wsnsim/strategies.hpp"
#include "wsnsim/topology.hpp"
