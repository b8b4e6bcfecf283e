// qgbf.hpp
// Umbrella header.

#pragma once

#include "qgbf/grid.hpp"
#include "qgbf/circuit.hpp"
#include "qgbf/resources.hpp"
#include "qgbf/state_prep.hpp"
#include "qgbf/statevector.hpp"
#include "qgbf/classical.hpp"
#include "qgbf/diffusion.hpp"
#include "qgbf/filter.hpp"
#include "qgbf/io.hpp"
#include "qgbf/harness.hpp"
