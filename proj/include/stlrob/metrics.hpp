// metrics.hpp — conjunction aggregators from which all robustness operators
// derive.
//
// A Metric supplies the M-ary AND over child robustness values.  Negation is
// fixed at -rho, so disjunction, eventually, always, and until are obtained
// from AND through the usual De Morgan identities (see semantics.hpp).
// Implementations must be pure; and_n of a single operand returns it.

#ifndef STLROB_METRICS_HPP
#define STLROB_METRICS_HPP

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace stlrob {

class Metric {
public:
    virtual ~Metric() = default;
    /// M >= 1 operands; throws std::invalid_argument on an empty span.
    virtual double and_n(std::span<const double> rho) const = 0;
    virtual std::string name() const = 0;
};

/// min(rho_1, ..., rho_M).
double and_traditional(std::span<const double> rho);

/// Arithmetic-geometric blend: mean of the negative parts when some operand
/// is <= 0, geometric mean of (1 + rho_i) minus one when all are positive.
double and_ag(std::span<const double> rho);

/// Exponentially weighted average that tends to min as nu grows.  Sign always
/// matches the sign of the minimum; exactly 0 when the minimum is 0.
double and_new(std::span<const double> rho, double nu);

class TraditionalMetric final : public Metric {
public:
    double and_n(std::span<const double> rho) const override { return and_traditional(rho); }
    std::string name() const override { return "traditional"; }
};

class AgMetric final : public Metric {
public:
    double and_n(std::span<const double> rho) const override { return and_ag(rho); }
    std::string name() const override { return "ag"; }
};

class ExpWeightedMetric final : public Metric {
public:
    explicit ExpWeightedMetric(double nu = 3.0);
    double and_n(std::span<const double> rho) const override { return and_new(rho, nu_); }
    std::string name() const override;
    double nu() const noexcept { return nu_; }

private:
    double nu_;
};

/// Factory for CLI-style names: "trad"/"traditional", "ag", "new".
/// Throws std::invalid_argument on anything else.
std::unique_ptr<Metric> make_metric(std::string_view name, double nu = 3.0);

}  // namespace stlrob

#endif  // STLROB_METRICS_HPP
