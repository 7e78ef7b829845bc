#include "stlrob/pi2.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "stlrob/semantics.hpp"

namespace stlrob {

std::uint64_t PolicyParams::fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (const Vec2& v : k) {
        for (double d : {v.x, v.y}) {
            std::uint64_t bits;
            std::memcpy(&bits, &d, sizeof bits);
            for (int b = 0; b < 8; ++b) {
                h ^= (bits >> (8 * b)) & 0xffULL;
                h *= 1099511628211ULL;
            }
        }
    }
    return h;
}

Policy PolicyParams::as_policy(double dt) const {
    return [coeffs = k, dt](Vec2, double t) -> Vec2 {
        if (coeffs.empty()) return {};
        auto idx = static_cast<std::size_t>(std::max(0.0, t / dt + 1e-9));
        if (idx >= coeffs.size()) idx = coeffs.size() - 1;
        return coeffs[idx];
    };
}

void PI2Config::validate() const {
    if (rollouts < 2) throw std::invalid_argument("rollouts must be >= 2");
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
    if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
    if (!(sigma_decay > 0.0) || sigma_decay > 1.0)
        throw std::invalid_argument("sigma_decay must be in (0, 1]");
    if (sigma_min < 0.0) throw std::invalid_argument("sigma_min must be >= 0");
    if (!(h > 0.0)) throw std::invalid_argument("h must be > 0");
    if (!(control_dt > 0.0)) throw std::invalid_argument("control_dt must be > 0");
}

std::size_t PI2Config::param_steps(double T) const {
    double steps_f = T / control_dt;
    auto steps = static_cast<std::size_t>(std::llround(steps_f));
    if (steps == 0 || std::abs(steps_f - static_cast<double>(steps)) > 1e-9)
        throw std::invalid_argument("T must be an integer multiple of control_dt");
    return steps;
}

TrajectoryScore trajectory_cost(const Trace& trace, const Metric& metric, const Formula& f,
                                double w, double rho_target) {
    TrajectoryScore s;
    s.rho = robustness_value(metric, f, trace, 0.0);
    s.C = input_energy(trace);
    s.J = s.C + w * std::max(0.0, rho_target - s.rho);
    return s;
}

std::vector<PolicyParams> sample_parameters(const PolicyParams& theta, double sigma, int n,
                                            RandomStream& rng) {
    if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
    std::vector<PolicyParams> out;
    out.reserve(static_cast<std::size_t>(n));
    out.push_back(theta);
    for (int i = 1; i < n; ++i) {
        PolicyParams p = theta;
        for (Vec2& v : p.k) {
            v.x += sigma * rng.gaussian();
            v.y += sigma * rng.gaussian();
        }
        out.push_back(std::move(p));
    }
    return out;
}

PolicyParams pi2_update(std::span<const PolicyParams> thetas, std::span<const double> costs,
                        double h) {
    if (thetas.empty() || thetas.size() != costs.size())
        throw std::invalid_argument("pi2_update needs matching non-empty lists");
    double j_min = costs[0];
    double j_max = costs[0];
    for (double j : costs) {
        if (!std::isfinite(j)) throw std::invalid_argument("non-finite rollout cost");
        j_min = std::min(j_min, j);
        j_max = std::max(j_max, j);
    }
    const double span = j_max - j_min + 1e-12;
    std::vector<double> w(costs.size());
    double total = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        w[i] = std::exp(-h * (costs[i] - j_min) / span);
        total += w[i];
    }
    PolicyParams out = PolicyParams::zeros(thetas[0].steps());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        double p = w[i] / total;
        for (std::size_t s = 0; s < out.k.size(); ++s) out.k[s] += thetas[i].k[s] * p;
    }
    return out;
}

LearningHistory run_pi2(const PI2Config& config, const Scenario& scenario, const Metric& metric,
                        const Formula& formula, PolicyParams* theta_out) {
    config.validate();
    scenario.robot.validate();

    const int n = config.rollouts;
    PolicyParams theta = PolicyParams::zeros(config.param_steps(scenario.robot.T));
    RandomStream rng(config.seed);
    LearningHistory history;
    history.reserve(static_cast<std::size_t>(config.iterations));

    for (int iter = 1; iter <= config.iterations; ++iter) {
        const double sigma =
            std::max(config.sigma0 * std::pow(config.sigma_decay, iter), config.sigma_min);
        const double w = config.w_max * static_cast<double>(iter) /
                         static_cast<double>(config.iterations);
        std::vector<PolicyParams> samples = sample_parameters(theta, sigma, n, rng);

        std::vector<TrajectoryScore> scores(samples.size());
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < static_cast<long>(samples.size()); ++i) {
            try {
                const PolicyParams& p = samples[static_cast<std::size_t>(i)];
                Trace trace = simulate(scenario.robot, p.as_policy(config.control_dt),
                                       scenario.guidance, scenario.params);
                scores[static_cast<std::size_t>(i)] =
                    trajectory_cost(trace, metric, formula, w, config.rho_target);
            } catch (...) {
#pragma omp critical
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);

        IterationRecord rec;
        rec.iteration = iter;
        rec.theta_id = theta.fingerprint();
        rec.rho = scores[0].rho;
        rec.cost = scores[0].C;
        rec.J = scores[0].J;
        rec.success = scores[0].rho >= config.rho_target;
        history.push_back(rec);

        std::vector<double> costs(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) costs[i] = scores[i].J;
        theta = pi2_update(samples, costs, config.h);
    }

    if (theta_out) *theta_out = theta;
    return history;
}

void save_history_csv(const LearningHistory& history, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw TraceError("cannot open '" + path + "' for writing");
    f << "iteration,rho,cost,J,success\n";
    char buf[160];
    for (const IterationRecord& r : history) {
        std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g,%d\n", r.iteration, r.rho, r.cost, r.J,
                      r.success ? 1 : 0);
        f << buf;
    }
}

}  // namespace stlrob
