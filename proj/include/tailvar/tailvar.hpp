#pragma once

// Umbrella header: the variational upper-tail toolkit for subgraph counts in
// sparse random graphs.

#include "tailvar/common.hpp"
#include "tailvar/constructions.hpp"
#include "tailvar/contraction.hpp"
#include "tailvar/entropy.hpp"
#include "tailvar/graph.hpp"
#include "tailvar/graphon.hpp"
#include "tailvar/montecarlo.hpp"
#include "tailvar/pattern.hpp"
#include "tailvar/regularity.hpp"
#include "tailvar/rng.hpp"
#include "tailvar/serialize.hpp"
#include "tailvar/solver.hpp"
#include "tailvar/theory.hpp"
