#pragma once

// Umbrella header for the whole library.

#include "graph_poincare/decomp.hpp"
#include "graph_poincare/generators.hpp"
#include "graph_poincare/graph.hpp"
#include "graph_poincare/hardy.hpp"
#include "graph_poincare/io.hpp"
#include "graph_poincare/poincare.hpp"
#include "graph_poincare/report.hpp"
#include "graph_poincare/rng.hpp"
#include "graph_poincare/tree.hpp"
