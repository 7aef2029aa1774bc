#pragma once

#include "slitwave/core.hpp"
#include "slitwave/error.hpp"
#include "slitwave/intensity.hpp"
#include "slitwave/oracle.hpp"
#include "slitwave/propagation.hpp"
#include "slitwave/report.hpp"
#include "slitwave/run_config.hpp"
#include "slitwave/slit_modes.hpp"
