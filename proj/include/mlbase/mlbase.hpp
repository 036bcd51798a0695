#pragma once

// Umbrella header: the whole library except the JSON helpers
// (mlbase/json_io.hpp), which pull in the external nlohmann dependency.

#include "mlbase/arff.hpp"
#include "mlbase/baseline.hpp"
#include "mlbase/dataset.hpp"
#include "mlbase/error.hpp"
#include "mlbase/harness.hpp"
#include "mlbase/label_set.hpp"
#include "mlbase/metrics.hpp"
#include "mlbase/registry.hpp"
#include "mlbase/stats.hpp"
#include "mlbase/text.hpp"
