#pragma once

#include "tangle_forge/canonical_tree.hpp"
#include "tangle_forge/error.hpp"
#include "tangle_forge/graph_separations.hpp"
#include "tangle_forge/io.hpp"
#include "tangle_forge/isomorphism.hpp"
#include "tangle_forge/orientations.hpp"
#include "tangle_forge/separation_system.hpp"
