#pragma once

#include "omlad/adwin.hpp"
#include "omlad/baseline.hpp"
#include "omlad/benchmark.hpp"
#include "omlad/config_io.hpp"
#include "omlad/core.hpp"
#include "omlad/dataio.hpp"
#include "omlad/detector.hpp"
#include "omlad/differencer.hpp"
#include "omlad/error.hpp"
#include "omlad/metrics.hpp"
#include "omlad/online_stats.hpp"
#include "omlad/ring_buffer.hpp"
#include "omlad/rng.hpp"
#include "omlad/scoring.hpp"
#include "omlad/snarimax.hpp"
#include "omlad/thresholds.hpp"
