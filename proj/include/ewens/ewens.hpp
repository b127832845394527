#pragma once

#include "ewens/bounds.hpp"
#include "ewens/distribution.hpp"
#include "ewens/errors.hpp"
#include "ewens/gaussian.hpp"
#include "ewens/moments.hpp"
#include "ewens/params.hpp"
#include "ewens/regimes.hpp"
#include "ewens/stirling.hpp"
#include "ewens/version.hpp"
