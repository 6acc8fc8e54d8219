#pragma once

#include "bvlab/boundary.hpp"

namespace bvlab {

// Closed forms tying the 0/1-loss effect terms to the boundary-offset
// distribution: integrating the pointwise systematic disagreement over the
// decision region gives median^2 * s / 2, and the rest of the added error is
// the variance effect. The two sum to the added error (s/2)(mean^2 + var) by
// construction.

double systematic_effect_closed(double median, double s);

double variance_effect_closed(double mean, double variance, double median, double s);

// Numeric counterparts: direct quadrature of the pattern-level effect
// definitions over the decision region, with the classifier's decision taken
// from the offset CDF against 1/2 (ties to the Bayes class). These never
// evaluate the closed forms; they exist to check them.
double systematic_effect_numeric(const PosteriorScenario& scenario,
                                 const BoundaryDistribution& d);

double variance_effect_numeric(const PosteriorScenario& scenario,
                               const BoundaryDistribution& d);

struct EffectsReport {
    BoundaryMoments moments;
    double se_closed = 0.0;
    double ve_closed = 0.0;
    double se_numeric = 0.0;
    double ve_numeric = 0.0;
    double se_delta = 0.0;
    double ve_delta = 0.0;
    double added_error = 0.0;        // from the moments route
    double checksum_residual = 0.0;  // |se_closed + ve_closed - added_error|
};

EffectsReport decompose_boundary_effects(const PosteriorScenario& scenario,
                                         const BoundaryDistribution& d);

}  // namespace bvlab
