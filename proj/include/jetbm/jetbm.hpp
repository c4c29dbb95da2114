#pragma once

// Umbrella header.

#include "core.hpp"
#include "dual.hpp"
#include "expr.hpp"
#include "geometry.hpp"
#include "connection.hpp"
#include "curvature.hpp"
#include "fd.hpp"
#include "oracle.hpp"
#include "geodesic.hpp"
#include "sampling.hpp"
#include "verify.hpp"
#include "report.hpp"
