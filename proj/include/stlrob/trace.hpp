// trace.hpp — uniformly sampled multi-channel signal with CSV I/O and
// time-window index arithmetic.

#ifndef STLROB_TRACE_HPP
#define STLROB_TRACE_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stlrob/formula.hpp"

namespace stlrob {

/// Malformed trace file or inconsistent construction data.
class TraceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation-time failure: unknown channel, empty window, insufficient
/// trace length, off-grid evaluation time, non-finite result.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Trace {
public:
    /// samples is row-major, size() == channels.size() * rows.
    Trace(double t0, double dt, std::vector<std::string> channels,
          std::vector<double> samples);

    /// CSV with header "time,<ch1>,<ch2>,..."; one row per sample.  A
    /// single-row file yields dt = 1 (the step is not recoverable).
    static Trace load(const std::string& path);
    void save(const std::string& path) const;

    std::size_t size() const noexcept { return rows_; }
    std::size_t channel_count() const noexcept { return channels_.size(); }
    double t0() const noexcept { return t0_; }
    double dt() const noexcept { return dt_; }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }
    double end_time() const noexcept { return time(rows_ - 1); }

    const std::vector<std::string>& channels() const noexcept { return channels_; }
    /// Throws EvalError when the channel does not exist.
    std::size_t channel_index(std::string_view name) const;

    double at(std::size_t row, std::size_t col) const { return data_[row * channels_.size() + col]; }
    std::span<const double> row(std::size_t k) const {
        return {data_.data() + k * channels_.size(), channels_.size()};
    }

private:
    double t0_;
    double dt_;
    std::size_t rows_;
    std::vector<std::string> channels_;
    std::vector<double> data_;  // row-major rows_ x channels
};

/// Inclusive sample-index range.
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t count() const noexcept { return last - first + 1; }
};

/// Indices k with t0 + k*dt in [t+a - eps, t+b + eps], eps = dt * 1e-6.
/// Throws EvalError when no sample falls inside the window.
IndexRange window_indices(const Trace& trace, double t, double a, double b);

/// Pointwise h(x(t_k)) for every sample k.  Throws EvalError on unknown
/// channels.
std::vector<double> predicate_signal(const Trace& trace, const PredicateExpr& p);

/// Single-sample evaluation of a predicate expression at row k.
double eval_predicate(const Trace& trace, const PredicateExpr& p, std::size_t k);

}  // namespace stlrob

#endif  // STLROB_TRACE_HPP
