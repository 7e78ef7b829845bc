// semantics.hpp — Boolean satisfaction and quantitative robustness over
// sampled traces.
//
// Robustness is built from the metric's AND operator alone: negation is -rho,
// disjunction and eventually follow from De Morgan, always is the conjunction
// over every in-window sample, and until combines the two per the Boolean
// until clause.  Conjunctions are always evaluated over the full n-ary child
// list in one and_n call; the aggregator is not associative.

#ifndef STLROB_SEMANTICS_HPP
#define STLROB_SEMANTICS_HPP

#include <vector>

#include "stlrob/formula.hpp"
#include "stlrob/metrics.hpp"
#include "stlrob/trace.hpp"

namespace stlrob {

struct RobustnessResult {
    double value = 0.0;
    /// Robustness of every subformula, preorder, evaluated at the same time
    /// t as the root; node_values[0] == value.
    std::vector<double> node_values;
};

/// Recursive Boolean semantics over the discretized windows.  The trace must
/// cover [t, t + horizon(f)]; t must lie on the sampling grid.
bool eval_boolean(const Formula& f, const Trace& trace, double t);

RobustnessResult robustness(const Metric& metric, const Formula& f, const Trace& trace,
                            double t);

double robustness_value(const Metric& metric, const Formula& f, const Trace& trace, double t);

/// Robustness stand-in for the true literal: the largest finite value, kept
/// finite so weighted averages stay well defined.
double true_robustness();

}  // namespace stlrob

#endif  // STLROB_SEMANTICS_HPP
