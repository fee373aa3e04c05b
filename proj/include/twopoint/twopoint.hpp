#pragma once

#include "twopoint/core.hpp"
#include "twopoint/polynomial.hpp"
#include "twopoint/jet.hpp"
#include "twopoint/rational_map.hpp"
#include "twopoint/disk_geometry.hpp"
#include "twopoint/curve_families.hpp"
#include "twopoint/covering.hpp"
#include "twopoint/walk_on_spheres.hpp"
#include "twopoint/inequalities.hpp"
#include "twopoint/fd_solver.hpp"
#include "twopoint/capacity_lab.hpp"
#include "twopoint/serialization.hpp"
#include "twopoint/report.hpp"
#include "twopoint/svg.hpp"
