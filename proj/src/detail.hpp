#pragma once

#include "spincal/dynamics.hpp"

namespace spincal::detail {

/// eom_rhs without the chamber-margin check; q need only be regular.
Tangent rhs_core(const SymmetricSpace& space, const CartanPoint& q, const CartanPoint& p,
                 const Mat& xi, Gauge gauge);

/// sorted eigenvalues of the Hermitian matrix -i xi (xi in g+)
Vec spin_spectrum(const Mat& xi);

}  // namespace spincal::detail
