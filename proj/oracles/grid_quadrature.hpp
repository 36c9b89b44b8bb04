#pragma once

#include <cstdint>

#include "mulab/exp_integrals.hpp"
#include "mulab/polytope.hpp"

namespace mulab::oracle {

struct GridBundle {
  double I0 = 0.0;
  double I1 = 0.0;
  double B0 = 0.0;
};

/// Brute-force quadrature of the bundle integrals on a uniform grid.
///
/// Dimension 2: `cells` per axis over the bounding box. Cells inside P on which a single piece
/// is active use 2x2 Gauss points; the others are clipped against P and the pieces and
/// integrated with a degree-5 triangle rule. Dimension 1: `cells` subintervals in total, split
/// at kinks, 2-point Gauss. Boundary edges use `boundary_segments` 3-point Gauss panels each.
GridBundle grid_bundle(const LatticePolytope& P, const PLConvexFunction& q, double tau, std::int64_t cells,
                       std::int64_t boundary_segments);

}  // namespace mulab::oracle
