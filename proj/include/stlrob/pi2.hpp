// pi2.hpp — episodic policy search with exponentiated-cost weighting,
// minimizing input energy plus a ramped hinge penalty on missing robustness.
//
// Rollouts within an iteration are independent and evaluate in parallel; the
// parameter update is an ordered reduction, so a run is reproducible
// byte-for-byte for a fixed seed regardless of thread count.

#ifndef STLROB_PI2_HPP
#define STLROB_PI2_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stlrob/dynamics.hpp"
#include "stlrob/formula.hpp"
#include "stlrob/metrics.hpp"
#include "stlrob/rng.hpp"

namespace stlrob {

/// Piecewise-constant per-step feedforward input.
struct PolicyParams {
    std::vector<Vec2> k;

    std::size_t steps() const { return k.size(); }
    static PolicyParams zeros(std::size_t steps) { return {std::vector<Vec2>(steps)}; }
    /// FNV-1a over the raw coefficients; used as the history snapshot id.
    std::uint64_t fingerprint() const;
    /// Feedforward lookup for the simulator.
    Policy as_policy(double dt) const;
};

struct PI2Config {
    int rollouts = 20;           // N, first rollout is always noiseless
    int iterations = 120;        // K (0 allowed: empty run, nothing learned)
    double sigma0 = 0.05;        // initial exploration std (m/s)
    double sigma_decay = 0.99;   // per-iteration multiplicative decay
    double sigma_min = 0.0;      // exploration floor the decay stops at
    double h = 10.0;             // softmax sharpness of the update
    double rho_target = 0.05;    // required robustness
    double w_max = 100.0;        // final penalty weight (ramped linearly)
    double control_dt = 0.2;     // feedforward segment length (s)
    std::uint64_t seed = 1;

    void validate() const;
    /// Parameter rows for a horizon of T seconds.
    std::size_t param_steps(double T) const;
};

struct IterationRecord {
    int iteration = 0;           // 1-based
    std::uint64_t theta_id = 0;  // fingerprint of the evaluated parameters
    double rho = 0.0;            // task robustness of the noiseless rollout
    double cost = 0.0;           // input energy C
    double J = 0.0;              // penalized cost
    bool success = false;        // rho >= rho_target
};

using LearningHistory = std::vector<IterationRecord>;

struct TrajectoryScore {
    double J = 0.0;
    double C = 0.0;
    double rho = 0.0;
};

/// J = C + w * max(0, rho_target - rho), with rho evaluated at t = 0.
TrajectoryScore trajectory_cost(const Trace& trace, const Metric& metric, const Formula& f,
                                double w, double rho_target);

/// theta plus i.i.d. zero-mean Gaussian entries of std sigma; the first
/// sample is always the noiseless theta.
std::vector<PolicyParams> sample_parameters(const PolicyParams& theta, double sigma, int n,
                                            RandomStream& rng);

/// Normalized exponentiated-cost averaging:
///   P_i ∝ exp(-h (J_i - J_min) / (J_max - J_min + 1e-12)),  theta <- sum P_i theta_i.
PolicyParams pi2_update(std::span<const PolicyParams> thetas, std::span<const double> costs,
                        double h);

/// Full learning loop; returns one record per iteration (the noiseless first
/// rollout doubles as the evaluation).  theta_out, when non-null, receives
/// the final parameters.
LearningHistory run_pi2(const PI2Config& config, const Scenario& scenario, const Metric& metric,
                        const Formula& formula, PolicyParams* theta_out = nullptr);

/// CSV "iteration,rho,cost,J,success".
void save_history_csv(const LearningHistory& history, const std::string& path);

}  // namespace stlrob

#endif  // STLROB_PI2_HPP
