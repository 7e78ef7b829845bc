#include "stlrob/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace stlrob {

namespace {

void require_nonempty(std::span<const double> rho) {
    if (rho.empty()) throw std::invalid_argument("conjunction of zero operands");
}

}  // namespace

double and_traditional(std::span<const double> rho) {
    require_nonempty(rho);
    double m = rho[0];
    for (double v : rho.subspan(1))
        if (v < m) m = v;
    return m;
}

double and_ag(std::span<const double> rho) {
    require_nonempty(rho);
    double rho_min = and_traditional(rho);
    const double m = static_cast<double>(rho.size());
    if (rho_min <= 0.0) {
        // Mean of the negative parts.  The satisfied operands contribute 0,
        // so the result is <= 0 and vanishes exactly when rho_min == 0.
        double acc = 0.0;
        for (double v : rho) acc += std::min(v, 0.0);
        return acc / m;
    }
    // Geometric mean of (1 + rho_i), computed in log space.
    double acc = 0.0;
    for (double v : rho) acc += std::log1p(v);
    double r = std::exp(acc / m);
    if (!std::isfinite(r)) r = std::numeric_limits<double>::max();
    return r - 1.0;
}

double and_new(std::span<const double> rho, double nu) {
    require_nonempty(rho);
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be > 0");
    double rho_min = and_traditional(rho);
    if (rho_min == 0.0) return 0.0;
    // rho_tilde_i = (rho_i - rho_min) / rho_min is <= 0 on the violation side
    // and >= 0 on the satisfaction side, so every exponent below is <= 0 and
    // the evaluation cannot overflow.
    double num = 0.0;
    double den = 0.0;
    if (rho_min < 0.0) {
        for (double v : rho) {
            double t = (v - rho_min) / rho_min;
            double w = std::exp(nu * t);
            num += rho_min * std::exp(t) * w;
            den += w;
        }
    } else {
        for (double v : rho) {
            double t = (v - rho_min) / rho_min;
            double w = std::exp(-nu * t);
            num += v * w;
            den += w;
        }
    }
    return num / den;
}

ExpWeightedMetric::ExpWeightedMetric(double nu) : nu_(nu) {
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be > 0");
}

std::string ExpWeightedMetric::name() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "new(nu=%g)", nu_);
    return buf;
}

std::unique_ptr<Metric> make_metric(std::string_view name, double nu) {
    if (name == "trad" || name == "traditional") return std::make_unique<TraditionalMetric>();
    if (name == "ag") return std::make_unique<AgMetric>();
    if (name == "new") return std::make_unique<ExpWeightedMetric>(nu);
    throw std::invalid_argument("unknown metric '" + std::string(name) +
                                "' (expected trad, ag, or new)");
}

}  // namespace stlrob
