#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "k3trace/liegroups.hpp"

namespace k3trace {

/// Torus data of one continuous trace distribution: the trace reads
/// offset + sum_i 2 cos(theta_i) on a dim-dimensional torus, distributed
/// with density weight/norm against the flat measure.
struct TorusModel {
    int dim = 1;
    int offset = 0;
    double norm = 1;
    std::function<double(const double*)> weight;
    LaurentPoly wpoly{1};
    double lo = -2, hi = 2;
};

/// Product of connected blocks (the identity-component distribution).
TorusModel product_model(const std::vector<ConnectedBlock>& blocks);

/// Non-neutral coset O(2m)^-, m >= 2: m-1 angles, eigenvalue-density weight.
TorusModel coset_model(int m);

/// Trace range across the non-atom components of the spec.
std::pair<double, double> trace_support(const GroupSpec& spec);

/// Density of the trace at x by level-set integration: a branch sum in
/// dimension 1, quadrature along the level curve in dimension 2 and over
/// the slab in dimension 3. Absolute tolerance tol.
double levelset_density(const TorusModel& model, double x, double tol = 1e-6);

std::vector<double> levelset_density(const TorusModel& model,
                                     const std::vector<double>& xs, double tol = 1e-6);

/// CDF of the model's trace at each x, by analytic integration over the
/// last angle and periodic-trapezoid quadrature over the rest.
std::vector<double> sublevel_cdf(const TorusModel& model, const std::vector<double>& xs,
                                 int grid = 0);

/// A sampled component-mixture trace distribution.
struct DensityCurve {
    double lo = 0, hi = 0;
    std::vector<double> xs;
    std::vector<double> values;
    std::vector<std::pair<double, Rational>> atoms;  // (location, mass)
    double continuous_mass = 0;  // integral of the continuous part
};

/// Equal-weight mixture of the component densities on a uniform interior
/// grid; mirrored components contribute density(-x), atom components an
/// atom at zero. grid_points counts interior samples.
DensityCurve mixture_density(const GroupSpec& spec, int grid_points = 601,
                             double tol = 1e-6);

/// Mixture CDF tabulated on a dense grid, for distribution comparisons.
struct MixtureCdf {
    std::vector<double> xs;
    std::vector<double> cont;   // continuous part, right-continuous overall
    double atom_at_zero = 0;

    double eval(double x) const;       // F(x)
    double eval_left(double x) const;  // F(x-)
};

MixtureCdf mixture_cdf(const GroupSpec& spec, int grid_points = 2401);

}  // namespace k3trace
