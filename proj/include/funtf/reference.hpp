#pragma once

#include "funtf/frames.hpp"
#include "funtf/linalg.hpp"

// Straight-line serial implementations of the frame kernels, written from the
// defining formulas with no shared code path into the production kernels.
// Tests compare the two; the benchmark times them against each other.

namespace funtf::ref {

double frame_potential(const UnitVectorSystem& sys);
SymMatrix frame_operator(const UnitVectorSystem& sys);
SymMatrix gram_matrix(const UnitVectorSystem& sys);
std::vector<Vec> fp_gradient(const UnitVectorSystem& sys);

}  // namespace funtf::ref
