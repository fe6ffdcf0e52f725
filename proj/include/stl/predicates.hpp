#pragma once

namespace stl {

/// Sign of the signed area of triangle (a, b, c): > 0 counterclockwise,
/// < 0 clockwise, 0 collinear. Filtered double evaluation with an exact
/// rational fallback near the decision boundary.
double orient2d(const double* a, const double* b, const double* c);

/// Sign of the incircle determinant: > 0 iff d lies strictly inside the
/// circumcircle of the counterclockwise triangle (a, b, c). Same filtering
/// scheme as orient2d.
double incircle(const double* a, const double* b, const double* c,
                const double* d);

}  // namespace stl
