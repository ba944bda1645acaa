#pragma once

#include "ucenters/centers.hpp"
#include "ucenters/core.hpp"
#include "ucenters/instances.hpp"
#include "ucenters/io.hpp"
#include "ucenters/pinwheel.hpp"
#include "ucenters/schedulers.hpp"
#include "ucenters/simulator.hpp"
