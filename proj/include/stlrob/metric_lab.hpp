// metric_lab.hpp — numerical verification of the conjunction-operator
// properties (soundness, idempotence/commutativity, weak smoothness, shadow
// lifting, min/max boundedness, scale invariance) plus boundary-derivative
// and limit-behaviour probes, for any Metric, via sampling and finite
// differences.

#ifndef STLROB_METRIC_LAB_HPP
#define STLROB_METRIC_LAB_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stlrob/formula.hpp"
#include "stlrob/metrics.hpp"
#include "stlrob/rng.hpp"
#include "stlrob/trace.hpp"

namespace stlrob {

struct PropertyReport {
    std::string property;
    std::string metric;
    int samples = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;       // pass == (max_violation <= tolerance)
    std::string witness;     // worst-case point, for deterministic replay
};

struct LabOptions {
    int samples = 1000;
    std::uint64_t seed = 0x5eedba5eULL;
};

/// Central difference (f(rho_i + h) - f(rho_i - h)) / 2h.  Throws EvalError
/// when the metric evaluates to a non-finite value.
double numeric_partial(const Metric& metric, std::span<const double> point, std::size_t i,
                       double h);

// Each checker samples deterministically from the supplied stream and
// reports the worst violation found together with a witness.
PropertyReport check_soundness(const Metric& metric, int n_formulas, RandomStream& rng);
PropertyReport check_idempotence_commutativity(const Metric& metric, int n_samples,
                                               RandomStream& rng);
PropertyReport check_weak_smoothness(const Metric& metric, int n_samples, RandomStream& rng);
PropertyReport check_shadow_lifting(const Metric& metric, int n_samples, RandomStream& rng);
PropertyReport check_minmax_bounds(const Metric& metric, int n_samples, RandomStream& rng);
PropertyReport check_scale_invariance(const Metric& metric, int n_samples, RandomStream& rng);

/// At points with rho_i = 0 and every other operand above 0.2, the partial
/// derivative w.r.t. rho_i of a sound, weakly smooth, min/max-bounded
/// operator must equal 1.
PropertyReport check_boundary_derivative(const Metric& metric, int n_samples, RandomStream& rng);

/// Convergence of the conjunction to a fixed operand as the others grow
/// without bound; the non-monotone lift is reported in the witness.
PropertyReport check_limit_behavior(const Metric& metric);

/// |and_n({rho1, big, ..., big}) - rho1| with extra_terms copies of big.
double limit_deviation(const Metric& metric, double rho1, double big, std::size_t extra_terms);

/// max over a grid of rho in [lo, hi] of and_n({rho1, rho}) minus rho1.
double max_conjunction_lift(const Metric& metric, double rho1, double lo, double hi,
                            int gridpoints);

/// First-order inconsistency at the origin: |quot(eps,eps) - quot(eps,0) -
/// quot(0,eps)|.  A sound, idempotent operator cannot be smooth there, so
/// this gap stays near 1 for every admissible metric.
double full_smoothness_gap_at_origin(const Metric& metric, double eps = 1e-6);

/// The six property checks in table order, with per-property sub-streams
/// derived from options.seed.
std::vector<PropertyReport> run_all_checks(const Metric& metric, const LabOptions& opts = {});

/// Pivot table (one row per metric, one column per property) followed by
/// per-check details.
std::string format_report_table(std::span<const PropertyReport> reports);
void write_reports_csv(std::span<const PropertyReport> reports, const std::string& path);

// ── Random instances ────────────────────────────────────────────────────────

struct GeneratorOptions {
    int max_depth = 4;
    double max_horizon = 6.0;
    std::vector<std::string> channels = {"x1", "x2"};
};

/// Random formula over the named channels whose horizon is at most
/// max_horizon; all temporal windows are at least 0.1 s wide.
Formula random_formula(RandomStream& rng, const GeneratorOptions& opts = {});

/// Smooth random trace: per channel a small sum of sinusoids.
Trace random_trace(RandomStream& rng, double duration = 8.0, double dt = 0.05,
                   const std::vector<std::string>& channels = {"x1", "x2"});

}  // namespace stlrob

#endif  // STLROB_METRIC_LAB_HPP
