#pragma once

// Everything: states, trees, classification, tree size, approximations,
// mixed states and the JSON forms used by the command-line tool.

#include "approx.hpp"
#include "braket.hpp"
#include "irreducible.hpp"
#include "json_io.hpp"
#include "mixed.hpp"
#include "shapes.hpp"
#include "slocc.hpp"
#include "states.hpp"
#include "treesize.hpp"
