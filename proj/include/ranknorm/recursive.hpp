#pragma once

#include <vector>

#include "ranknorm/model.hpp"

namespace ranknorm {

// Grid parameters for the two-dimensional integration scheme: an outer
// Simpson grid over the common factor M and an inner trapezoid grid over x
// shared by all recursion levels at a fixed M node.
struct QuadratureSpec {
    int m_nodes = 101;        // outer grid nodes; must be odd for Simpson's rule
    int x_nodes = 4001;       // inner grid nodes
    double m_halfwidth = 8.0; // outer grid half-width in SDs of M
    double x_padding = 8.0;   // inner grid padding in conditional SDs

    // Throws std::invalid_argument if outside the sane-accuracy floor
    // (m_nodes >= 21 and odd, x_nodes >= 201, halfwidth/padding >= 6).
    void validate() const;
};

// Working state of one chained cumulative integral: the current b or h level
// tabulated on the inner grid, with rescaling constants factored out into
// log_scale so levels never underflow. After rescale(), max|values| is in
// [0.5, 2] (or the level is identically zero).
struct RecursionState {
    std::vector<double> values;
    double log_scale = 0.0;

    void rescale();
};

// log of B = P(X_1 <= X_2 <= ... <= X_n) for the canonical ascending cone.
// Throws DegenerateModelError if rho == 1.
//
// Both entry points are pure. Each outer node's contribution is computed in
// isolation and combined by an ordered reduction over the node index, so the
// result cannot depend on any execution schedule; callers parallelize across
// whole calls (see experiments).
double log_ranking_probability(const UniformCorrelationModel& model, const QuadratureSpec& spec);

// Conditional mean, second moment, variance and SD of every component given
// the ranking, in the original index order, plus log B. Variances in
// [-1e-8, 0) are clamped to zero; anything more negative throws
// NumericalFailureError (grid too coarse).
ConditionalMoments conditional_moments(const UniformCorrelationModel& model,
                                       const Ranking& ranking, const QuadratureSpec& spec);

// Batch driver over a family of models (one per dimension n), each under its
// own identity ranking. Errors are propagated tagged with the model's n.
std::vector<ConditionalMoments> conditional_moments_all_n(
    const std::vector<UniformCorrelationModel>& models, const QuadratureSpec& spec);

namespace detail {

// Engine for the canonical cone (identity ranking), with the rescaling
// schedule switchable so tests can verify the A/B ratio is invariant to it.
ConditionalMoments conditional_moments_canonical(const UniformCorrelationModel& model,
                                                 const QuadratureSpec& spec, bool rescale);

}  // namespace detail

}  // namespace ranknorm
