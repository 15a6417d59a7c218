#pragma once

// Umbrella header for the partial-transport Lp library.

#include "ptlp/baselines.hpp"
#include "ptlp/dataset.hpp"
#include "ptlp/harness.hpp"
#include "ptlp/io.hpp"
#include "ptlp/metrics.hpp"
#include "ptlp/signal.hpp"
#include "ptlp/sliced.hpp"
#include "ptlp/transport.hpp"
