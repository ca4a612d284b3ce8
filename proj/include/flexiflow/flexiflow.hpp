#pragma once

#include "flexiflow/carbon.hpp"
#include "flexiflow/dse.hpp"
#include "flexiflow/error.hpp"
#include "flexiflow/instr_class.hpp"
#include "flexiflow/io.hpp"
#include "flexiflow/iss.hpp"
#include "flexiflow/ppa.hpp"
#include "flexiflow/report.hpp"
#include "flexiflow/scale.hpp"
#include "flexiflow/timing.hpp"
#include "flexiflow/units.hpp"
#include "flexiflow/workload.hpp"
