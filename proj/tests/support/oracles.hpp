#pragma once

// Slow, independent reference implementations used to check the library.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "wassdict/diagram.hpp"
#include "wassdict/transport.hpp"

namespace wassdict::testing {

/// Minimum assignment cost by enumerating every permutation.
double brute_force_assignment(const SquareMatrix& costs);

/// Squared L2-Wasserstein cost between two single-type point sets by
/// enumerating every bijection of the augmented sets. Sizes up to about 4+4.
double brute_force_squared_wasserstein(std::span<const Point> a, std::span<const Point> b);

/// Projection onto the simplex by enumerating every support set and keeping
/// the feasible KKT point closest to v.
std::vector<double> simplex_projection_oracle(std::span<const double> v);

/// Central difference of f along coordinate i.
double central_difference(const std::function<double(std::span<const double>)>& f,
                          std::vector<double> x, std::size_t i, double h);

double relative_error(double value, double reference);

}  // namespace wassdict::testing

namespace wassdict::testing {

/// ||value - reference|| / ||reference||, with a floor on the denominator.
double relative_error(std::span<const double> value, std::span<const double> reference);

}  // namespace wassdict::testing
