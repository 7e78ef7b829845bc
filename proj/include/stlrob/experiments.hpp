// experiments.hpp — two-goal case study: metric × guidance sweeps over seeded
// policy-search runs, success-rate tables, convergence curves, and the
// closed-form optimal plan used as a cost oracle.

#ifndef STLROB_EXPERIMENTS_HPP
#define STLROB_EXPERIMENTS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stlrob/dynamics.hpp"
#include "stlrob/formula.hpp"
#include "stlrob/pi2.hpp"

namespace stlrob {

// Case-study constants: unit-bounded single integrator from (2, 2), two
// radius-0.2 goals at (1.5, 2.5) and (2.5, 1.5), 10 s at 20 ms steps; the
// task is to reach each goal within every 4 s window starting in [0, 6].
RobotSpec case_study_robot();
std::array<GoalRegion, 2> case_study_goals();
Formula case_study_formula();

struct AnalyticOptimum {
    std::vector<std::pair<double, Vec2>> waypoints;  // (time, position), then hold
    double margin = 0.05;            // robustness margin the plan maintains
    double approach_distance = 0.0;  // start -> first goal contact point
    double inter_goal_distance = 0.0;
    double optimal_cost = 0.0;
    // The alternative schedule that leaves only 1 s for a crossing; its
    // required speed exceeds the input bound, so it is infeasible.
    double rejected_plan_speed = 0.0;
    bool rejected_plan_feasible = false;
    std::string description;
};

/// Constant-speed alternating plan g1@2s, g2@4s, g1@6s, g2@8s with a 0.05
/// robustness margin, and its exact input energy.
AnalyticOptimum analytic_optimum();

/// Piecewise-constant-velocity feedforward tracking the optimal plan.
Policy optimal_plan_policy();

enum class GuidanceLevel { None, Weak, Strong };
const char* guidance_name(GuidanceLevel g);
GuidanceLevel parse_guidance(const std::string& name);

/// Guidance funnels for the case study, loaded from <funnel_dir>/
/// gamma1_<level>.csv; the second goal's funnel is the mirror of the first.
std::vector<GuidedGoal> case_study_guidance(GuidanceLevel level, const std::string& funnel_dir);

struct ExperimentPlan {
    std::vector<std::string> metrics = {"trad", "ag", "new"};
    double nu = 3.0;
    std::vector<GuidanceLevel> guidance = {GuidanceLevel::None, GuidanceLevel::Weak,
                                           GuidanceLevel::Strong};
    std::vector<std::uint64_t> seeds;  // one run per seed per configuration
    PI2Config base;                    // shared settings (seed field is per-run)
    std::string funnel_dir = "data/funnels";

    void validate() const;
};

struct ConfigCurves {
    // Per-iteration quantiles over the successful runs; NaN when none.
    std::vector<double> rho_median, rho_p10, rho_p90;
    std::vector<double> cost_median, cost_p10, cost_p90;
};

struct ConfigSummary {
    std::string metric;
    GuidanceLevel guidance = GuidanceLevel::None;
    int runs = 0;
    int successes = 0;
    double success_rate = 0.0;
    // Quantiles over successful runs (NaN when there are none).
    double iters_to_sat_median = 0.0, iters_to_sat_p10 = 0.0, iters_to_sat_p90 = 0.0;
    double final_cost_median = 0.0, final_cost_p10 = 0.0, final_cost_p90 = 0.0;
    ConfigCurves curves;
    std::vector<LearningHistory> histories;  // per seed, in seed order
    std::vector<bool> run_success;           // per seed
};

struct ExperimentSummary {
    int iterations = 0;
    std::vector<ConfigSummary> configs;
};

/// Runs every (metric, guidance, seed) combination; a run is successful when
/// its final robustness reaches 0.05 and its final cost stays below 3.0 (the
/// feasible-minimum basin; the infeasible one costs well above that).
ExperimentSummary run_casestudy(const ExperimentPlan& plan);

/// curves_<metric>_<guidance>.csv per configuration:
/// iteration,rho_median,rho_p10,rho_p90,cost_median,cost_p10,cost_p90
void export_curves(const ExperimentSummary& summary, const std::string& out_dir);

/// summary.csv (success-rate matrix, metric rows x guidance columns) and
/// details.csv (per-configuration statistics).
void export_summary(const ExperimentSummary& summary, const std::string& out_dir);

std::string format_summary_table(const ExperimentSummary& summary);

}  // namespace stlrob

#endif  // STLROB_EXPERIMENTS_HPP
