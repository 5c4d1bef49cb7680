#pragma once

#include "cyberalloc/analysis.hpp"
#include "cyberalloc/errors.hpp"
#include "cyberalloc/format.hpp"
#include "cyberalloc/objectives.hpp"
#include "cyberalloc/optimizer.hpp"
#include "cyberalloc/preferences.hpp"
#include "cyberalloc/report.hpp"
#include "cyberalloc/risk_curve.hpp"
