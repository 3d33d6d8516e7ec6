#pragma once

/// Umbrella header: the full hybrid optical/radio downlink outage toolkit.

#include "hyfso/errors.hpp"
#include "hyfso/fso.hpp"
#include "hyfso/linkgeo.hpp"
#include "hyfso/mc.hpp"
#include "hyfso/outage.hpp"
#include "hyfso/rf.hpp"
#include "hyfso/rng.hpp"
#include "hyfso/scenario.hpp"
#include "hyfso/specfun.hpp"
#include "hyfso/sweep.hpp"
