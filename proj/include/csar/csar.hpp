#pragma once

#include "csar/bench.hpp"
#include "csar/corpus.hpp"
#include "csar/evaluation.hpp"
#include "csar/induction.hpp"
#include "csar/manifest.hpp"
#include "csar/metrics.hpp"
#include "csar/procgen.hpp"
#include "csar/rng.hpp"
#include "csar/weighting.hpp"
