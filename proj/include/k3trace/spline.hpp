#pragma once

#include <utility>
#include <vector>

#include "k3trace/rational.hpp"

namespace k3trace {

/// Natural cubic spline on a uniform subdivision of [a, b] whose analytic
/// moments int x^n s(x) dx match a prescribed sequence for n = 0..K.
///
/// The spline is parameterised by its knot values; the natural boundary
/// conditions and C^2 continuity are structural. Depending on how the
/// moment count compares with the knot count the system is solved as
///   K+1 <  P+1  minimum curvature subject to exact moment constraints
///   K+1 == P+1  square, unique solution
///   K+1 >  P+1  least squares on the moment equations
/// All three paths run in exact rational arithmetic; the residual is zero
/// except in the least-squares regime.
struct SplineDensity {
    Rational a, b;
    int pieces = 0;
    int K = 0;
    std::vector<Rational> values;  // knot values, exact
    std::vector<Rational> sigma;   // second derivatives at knots
    double max_moment_residual = 0;
    double min_value = 0;  // most negative sampled value (undershoot report)

    double eval(double x) const;
    /// Exact analytic moment of the spline.
    Rational moment(int n) const;
};

/// moments[n] = target n-th moment, n = 0..K with K in [20, 35]; moments[0]
/// is the continuous mass (1, or 1 - atom mass when fitting the continuous
/// part of a mixture). Throws std::domain_error when the input is a point
/// mass (zero variance) and std::invalid_argument on malformed input or a
/// singular system.
SplineDensity spline_from_moments(const std::vector<Rational>& moments,
                                  std::pair<Rational, Rational> support,
                                  int pieces = 30);

}  // namespace k3trace
