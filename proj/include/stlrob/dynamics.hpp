// dynamics.hpp — planar single-integrator robot, circular goal regions,
// piecewise-linear guidance funnels, and the exploration-guiding feedback
// law.

#ifndef STLROB_DYNAMICS_HPP
#define STLROB_DYNAMICS_HPP

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stlrob/trace.hpp"

namespace stlrob {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double norm() const { return std::hypot(x, y); }
};

struct RobotSpec {
    Vec2 x0;
    double u_max = 1.0;
    double dt = 0.02;
    double T = 10.0;

    std::size_t steps() const { return static_cast<std::size_t>(std::llround(T / dt)); }
    void validate() const;
};

struct GoalRegion {
    Vec2 center;
    double radius = 0.2;

    /// Signed satisfaction margin of "inside the region": radius - |x - c|.
    double margin(Vec2 x) const { return radius - (x - center).norm(); }
};

struct FunnelKnot {
    double t = 0.0;
    double gamma = 0.0;
};

/// Piecewise-linear lower-bound curve gamma(t) on a predicate's robustness.
class Funnel {
public:
    explicit Funnel(std::vector<FunnelKnot> knots);
    static Funnel constant(double gamma, double t_end);
    /// CSV with header "t,gamma".
    static Funnel load(const std::string& path);
    void save(const std::string& path) const;

    /// Linear interpolation; throws EvalError outside the knot span.
    double operator()(double t) const;

    double start_time() const { return knots_.front().t; }
    double end_time() const { return knots_.back().t; }
    const std::vector<FunnelKnot>& knots() const { return knots_; }

private:
    std::vector<FunnelKnot> knots_;
};

/// Knotwise reflection 2*gamma(0) - gamma(t): the second goal's funnel peaks
/// where the first one dips.
Funnel mirror_funnel(const Funnel& f);

struct GuidedGoal {
    Funnel funnel;
    GoalRegion goal;
};

struct GuidanceParams {
    double kappa = 2.0;  // feedback gain on funnel violation
    double delta = 0.05; // activation margin above the funnel
};

/// Feedback toward each goal whose funnel is violated:
///   u = sat( sum_i kappa * max(0, gamma_i(t) + delta - margin_i(x)) * g_i )
/// with g_i the unit vector toward the goal center (zero at the center) and
/// sat the rescaling to |u| <= u_max.
Vec2 guidance_control(Vec2 x, double t, std::span<const GuidedGoal> guidance, double u_max,
                      const GuidanceParams& params = {});

using Policy = std::function<Vec2(Vec2, double)>;

/// Explicit Euler rollout of x' = sat(guidance + feedforward), recording
/// channels x1, x2, u1, u2 (u is the saturated total input applied over
/// [t_k, t_k+dt); the final row carries u = 0).  Throws EvalError when the
/// state stops being finite.
Trace simulate(const RobotSpec& spec, const Policy& feedforward,
               std::span<const GuidedGoal> guidance, const GuidanceParams& params = {});

/// Discretized input energy: sum |u_k|^2 dt over the u1/u2 channels.
double input_energy(const Trace& trace);

/// Scenario = robot + guidance, as consumed by the policy-search loop.
struct Scenario {
    RobotSpec robot;
    std::vector<GuidedGoal> guidance;
    GuidanceParams params;
};

}  // namespace stlrob

#endif  // STLROB_DYNAMICS_HPP
