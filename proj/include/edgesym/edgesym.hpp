#pragma once

#include "edgesym/circle.hpp"
#include "edgesym/combinatorial_map.hpp"
#include "edgesym/error.hpp"
#include "edgesym/io.hpp"
#include "edgesym/isometry.hpp"
#include "edgesym/plane_graph.hpp"
#include "edgesym/polytope.hpp"
#include "edgesym/symmetry.hpp"
#include "edgesym/tolerance.hpp"
#include "edgesym/verify.hpp"
