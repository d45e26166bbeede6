#pragma once

// Umbrella header for the railpon simulator library.

#include "railpon/dba.hpp"
#include "railpon/engine.hpp"
#include "railpon/events.hpp"
#include "railpon/mac_table.hpp"
#include "railpon/metrics.hpp"
#include "railpon/planner.hpp"
#include "railpon/pon.hpp"
#include "railpon/radio.hpp"
#include "railpon/report_io.hpp"
#include "railpon/rng.hpp"
#include "railpon/scenario.hpp"
#include "railpon/time.hpp"
#include "railpon/traffic.hpp"
#include "railpon/units.hpp"
