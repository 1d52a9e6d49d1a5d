#pragma once

#include "netrobust/error.hpp"
#include "netrobust/rng.hpp"
#include "netrobust/graph.hpp"
#include "netrobust/parse.hpp"
#include "netrobust/centrality.hpp"
#include "netrobust/spectral.hpp"
#include "netrobust/community.hpp"
#include "netrobust/robustness.hpp"
#include "netrobust/io.hpp"
