#include "stlrob/dynamics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace stlrob {

void RobotSpec::validate() const {
    if (!(u_max > 0.0)) throw std::invalid_argument("u_max must be > 0");
    if (!(dt > 0.0) || !(T > 0.0)) throw std::invalid_argument("dt and T must be > 0");
    double steps_f = T / dt;
    if (std::abs(steps_f - std::llround(steps_f)) > 1e-9)
        throw std::invalid_argument("T must be an integer multiple of dt");
}

Funnel::Funnel(std::vector<FunnelKnot> knots) : knots_(std::move(knots)) {
    if (knots_.size() < 2) throw std::invalid_argument("funnel needs at least two knots");
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (!(knots_[i].t > knots_[i - 1].t))
            throw std::invalid_argument("funnel knot times must be strictly increasing");
}

Funnel Funnel::constant(double gamma, double t_end) {
    return Funnel({{0.0, gamma}, {t_end, gamma}});
}

Funnel Funnel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TraceError("cannot open funnel file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,gamma", 0) != 0)
        throw TraceError("funnel file '" + path + "' must start with header 't,gamma'");
    std::vector<FunnelKnot> knots;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        double t = 0.0, g = 0.0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        auto r1 = std::from_chars(p, end, t);
        if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ',')
            throw TraceError("malformed funnel row '" + line + "'");
        auto r2 = std::from_chars(r1.ptr + 1, end, g);
        if (r2.ec != std::errc())
            throw TraceError("malformed funnel row '" + line + "'");
        knots.push_back({t, g});
    }
    return Funnel(std::move(knots));
}

void Funnel::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw TraceError("cannot open '" + path + "' for writing");
    f << "t,gamma\n";
    char buf[96];
    for (const FunnelKnot& k : knots_) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", k.t, k.gamma);
        f << buf;
    }
}

double Funnel::operator()(double t) const {
    if (t < knots_.front().t - 1e-9 || t > knots_.back().t + 1e-9)
        throw EvalError("funnel evaluated at t=" + std::to_string(t) + " outside [" +
                        std::to_string(knots_.front().t) + ", " +
                        std::to_string(knots_.back().t) + "]");
    if (t <= knots_.front().t) return knots_.front().gamma;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (t <= knots_[i].t) {
            const FunnelKnot& a = knots_[i - 1];
            const FunnelKnot& b = knots_[i];
            double w = (t - a.t) / (b.t - a.t);
            return a.gamma + w * (b.gamma - a.gamma);
        }
    }
    return knots_.back().gamma;
}

Funnel mirror_funnel(const Funnel& f) {
    double g0 = f.knots().front().gamma;
    std::vector<FunnelKnot> knots = f.knots();
    for (FunnelKnot& k : knots) k.gamma = 2.0 * g0 - k.gamma;
    return Funnel(std::move(knots));
}

namespace {

Vec2 saturate(Vec2 u, double u_max) {
    double n = u.norm();
    if (n > u_max) return u * (u_max / n);
    return u;
}

}  // namespace

Vec2 guidance_control(Vec2 x, double t, std::span<const GuidedGoal> guidance, double u_max,
                      const GuidanceParams& params) {
    Vec2 u{};
    for (const GuidedGoal& g : guidance) {
        double violation = g.funnel(t) + params.delta - g.goal.margin(x);
        if (violation <= 0.0) continue;
        Vec2 toward = g.goal.center - x;
        double dist = toward.norm();
        if (dist == 0.0) continue;  // at the center the ascent direction vanishes
        u += toward * (params.kappa * violation / dist);
    }
    return saturate(u, u_max);
}

Trace simulate(const RobotSpec& spec, const Policy& feedforward,
               std::span<const GuidedGoal> guidance, const GuidanceParams& params) {
    spec.validate();
    const std::size_t steps = spec.steps();
    std::vector<double> data;
    data.reserve((steps + 1) * 4);
    Vec2 x = spec.x0;
    for (std::size_t k = 0; k < steps; ++k) {
        double t = static_cast<double>(k) * spec.dt;
        Vec2 u = guidance_control(x, t, guidance, spec.u_max, params) + feedforward(x, t);
        u = saturate(u, spec.u_max);
        data.insert(data.end(), {x.x, x.y, u.x, u.y});
        x += u * spec.dt;
        if (!std::isfinite(x.x) || !std::isfinite(x.y))
            throw EvalError("simulation diverged at t=" + std::to_string(t));
    }
    data.insert(data.end(), {x.x, x.y, 0.0, 0.0});
    return Trace(0.0, spec.dt, {"x1", "x2", "u1", "u2"}, std::move(data));
}

double input_energy(const Trace& trace) {
    std::size_t u1 = trace.channel_index("u1");
    std::size_t u2 = trace.channel_index("u2");
    double acc = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        double a = trace.at(k, u1);
        double b = trace.at(k, u2);
        acc += (a * a + b * b) * trace.dt();
    }
    return acc;
}

}  // namespace stlrob
