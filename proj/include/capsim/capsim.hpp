#pragma once

// Umbrella header for the capsim library: consensus-based simultaneous
// capture of an intruder by a sensing- and communication-limited defender
// team, with spectral capture certificates and desk-scale experiments.

#include "capsim/capture_map.hpp"
#include "capsim/certificates.hpp"
#include "capsim/csv.hpp"
#include "capsim/dynamics.hpp"
#include "capsim/eigen.hpp"
#include "capsim/errors.hpp"
#include "capsim/geometry.hpp"
#include "capsim/graph.hpp"
#include "capsim/matrix.hpp"
#include "capsim/run_result.hpp"
#include "capsim/scenario.hpp"
#include "capsim/scenario_io.hpp"
#include "capsim/spectral_bound.hpp"
#include "capsim/svg.hpp"
#include "capsim/version.hpp"
