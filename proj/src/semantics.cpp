#include "stlrob/semantics.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

namespace stlrob {

namespace {

// Sample-index offsets of the window [t_k + a, t_k + b] relative to k, for
// on-grid t_k.  Matches window_indices up to its eps = dt * 1e-6 guard.
struct RelWindow {
    long lo;
    long hi;
};

RelWindow relative_window(double dt, double a, double b) {
    const double eps = dt * 1e-6;
    RelWindow w;
    w.lo = static_cast<long>(std::ceil((a - eps) / dt));
    w.hi = static_cast<long>(std::floor((b + eps) / dt));
    if (w.lo < 0) w.lo = 0;  // a >= 0: the window never reaches behind t_k
    if (w.lo > w.hi)
        throw EvalError("empty window: interval [" + std::to_string(a) + ", " +
                        std::to_string(b) + "] contains no sample offset at dt = " +
                        std::to_string(dt));
    return w;
}

long grid_index(const Trace& trace, double t) {
    double r = (t - trace.t0()) / trace.dt();
    long k = std::lround(r);
    if (std::abs(r - static_cast<double>(k)) > 1e-6)
        throw EvalError("evaluation time " + std::to_string(t) + " is not on the sampling grid");
    if (k < 0 || k >= static_cast<long>(trace.size()))
        throw EvalError("evaluation time " + std::to_string(t) + " is outside the trace");
    return k;
}

// Flattened formula with per-node required index ranges.  Series are stored
// over [lo, hi] with series[k - lo] holding the value at sample k.
struct NodeInfo {
    const Formula* f = nullptr;
    std::vector<int> kids;
    long lo = 0;
    long hi = -1;
};

std::size_t flatten(const Formula& f, std::vector<NodeInfo>& nodes) {
    std::size_t id = nodes.size();
    nodes.push_back(NodeInfo{&f, {}, 0, -1});
    for (const Formula& c : f.children()) {
        std::size_t kid = flatten(c, nodes);
        nodes[id].kids.push_back(static_cast<int>(kid));
    }
    return id;
}

// Propagates the sample ranges each node must be evaluated on, top down.
// Every node's range is additionally widened to include k_t so that the
// per-subformula annotations at the evaluation time are available.
void propagate_ranges(std::vector<NodeInfo>& nodes, std::size_t id, long lo, long hi, long k_t,
                      double dt) {
    NodeInfo& n = nodes[id];
    lo = std::min(lo, k_t);
    hi = std::max(hi, k_t);
    n.lo = lo;
    n.hi = hi;
    switch (n.f->kind()) {
        case Formula::Kind::True:
        case Formula::Kind::Predicate:
            return;
        case Formula::Kind::Not:
        case Formula::Kind::And:
        case Formula::Kind::Or:
            for (int kid : n.kids)
                propagate_ranges(nodes, static_cast<std::size_t>(kid), lo, hi, k_t, dt);
            return;
        case Formula::Kind::Eventually:
        case Formula::Kind::Always: {
            RelWindow w = relative_window(dt, n.f->lower(), n.f->upper());
            propagate_ranges(nodes, static_cast<std::size_t>(n.kids[0]), lo + w.lo, hi + w.hi,
                             k_t, dt);
            return;
        }
        case Formula::Kind::Until: {
            RelWindow w = relative_window(dt, n.f->lower(), n.f->upper());
            propagate_ranges(nodes, static_cast<std::size_t>(n.kids[0]), lo, hi + w.hi, k_t, dt);
            propagate_ranges(nodes, static_cast<std::size_t>(n.kids[1]), lo + w.lo, hi + w.hi,
                             k_t, dt);
            return;
        }
    }
}

// ── Quantitative evaluator ──────────────────────────────────────────────────

class RobustnessEval {
public:
    RobustnessEval(const Metric& metric, const Trace& trace) : metric_(metric), trace_(trace) {}

    RobustnessResult run(const Formula& f, double t) {
        long k_t = grid_index(trace_, t);
        std::size_t root = flatten(f, nodes_);
        propagate_ranges(nodes_, root, k_t, k_t, k_t, trace_.dt());
        series_.resize(nodes_.size());
        eval(root);
        RobustnessResult res;
        res.node_values.reserve(nodes_.size());
        for (std::size_t id = 0; id < nodes_.size(); ++id)
            res.node_values.push_back(at(id, k_t));
        res.value = res.node_values.front();
        return res;
    }

private:
    double at(std::size_t id, long k) const {
        return series_[id][static_cast<std::size_t>(k - nodes_[id].lo)];
    }
    std::span<const double> slice(std::size_t id, long from, long count) const {
        return std::span<const double>(series_[id])
            .subspan(static_cast<std::size_t>(from - nodes_[id].lo),
                     static_cast<std::size_t>(count));
    }

    void eval(std::size_t id) {
        const NodeInfo& n = nodes_[id];
        for (int kid : n.kids) eval(static_cast<std::size_t>(kid));

        const long lo = n.lo;
        const long hi = n.hi;
        const long count = hi - lo + 1;
        std::vector<double>& out = series_[id];
        out.resize(static_cast<std::size_t>(count));

        switch (n.f->kind()) {
            case Formula::Kind::True: {
                std::fill(out.begin(), out.end(), true_robustness());
                return;
            }
            case Formula::Kind::Predicate: {
                if (hi >= static_cast<long>(trace_.size()))
                    throw EvalError("insufficient trace length: formula needs samples up to t = " +
                                    std::to_string(trace_.t0() + static_cast<double>(hi) * trace_.dt()) +
                                    " but the trace ends at t = " + std::to_string(trace_.end_time()));
                std::vector<double> sig = predicate_signal(trace_, n.f->pred());
                for (long k = lo; k <= hi; ++k)
                    out[static_cast<std::size_t>(k - lo)] = sig[static_cast<std::size_t>(k)];
                return;
            }
            case Formula::Kind::Not: {
                for (long k = lo; k <= hi; ++k)
                    out[static_cast<std::size_t>(k - lo)] = -at(static_cast<std::size_t>(n.kids[0]), k);
                return;
            }
            case Formula::Kind::And:
            case Formula::Kind::Or: {
                const bool conj = n.f->kind() == Formula::Kind::And;
                const std::size_t arity = n.kids.size();
#pragma omp parallel if (count > 255)
                {
                    std::vector<double> buf(arity);
#pragma omp for schedule(static)
                    for (long k = lo; k <= hi; ++k) {
                        for (std::size_t c = 0; c < arity; ++c) {
                            double v = at(static_cast<std::size_t>(n.kids[c]), k);
                            buf[c] = conj ? v : -v;
                        }
                        double v = metric_.and_n(buf);
                        out[static_cast<std::size_t>(k - lo)] = conj ? v : -v;
                    }
                }
                return;
            }
            case Formula::Kind::Eventually:
            case Formula::Kind::Always: {
                const bool always = n.f->kind() == Formula::Kind::Always;
                RelWindow w = relative_window(trace_.dt(), n.f->lower(), n.f->upper());
                const long width = w.hi - w.lo + 1;
                const std::size_t child = static_cast<std::size_t>(n.kids[0]);
                std::vector<double> neg;
                if (!always) {
                    neg.resize(series_[child].size());
                    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -series_[child][i];
                }
#pragma omp parallel for schedule(static) if (count > 63)
                for (long k = lo; k <= hi; ++k) {
                    if (always) {
                        out[static_cast<std::size_t>(k - lo)] =
                            metric_.and_n(slice(child, k + w.lo, width));
                    } else {
                        auto s = std::span<const double>(neg).subspan(
                            static_cast<std::size_t>(k + w.lo - nodes_[child].lo),
                            static_cast<std::size_t>(width));
                        out[static_cast<std::size_t>(k - lo)] = -metric_.and_n(s);
                    }
                }
                return;
            }
            case Formula::Kind::Until: {
                RelWindow w = relative_window(trace_.dt(), n.f->lower(), n.f->upper());
                const std::size_t lhs = static_cast<std::size_t>(n.kids[0]);
                const std::size_t rhs = static_cast<std::size_t>(n.kids[1]);
#pragma omp parallel if (count > 15)
                {
                    std::vector<double> buf;
                    buf.reserve(static_cast<std::size_t>(w.hi - w.lo + 1));
                    double pair[2];
#pragma omp for schedule(static)
                    for (long k = lo; k <= hi; ++k) {
                        buf.clear();
                        for (long k1 = k + w.lo; k1 <= k + w.hi; ++k1) {
                            pair[0] = at(rhs, k1);
                            pair[1] = metric_.and_n(slice(lhs, k, k1 - k + 1));
                            buf.push_back(-metric_.and_n(std::span<const double>(pair, 2)));
                        }
                        out[static_cast<std::size_t>(k - lo)] = -metric_.and_n(buf);
                    }
                }
                return;
            }
        }
    }

    const Metric& metric_;
    const Trace& trace_;
    std::vector<NodeInfo> nodes_;
    std::vector<std::vector<double>> series_;
};

// ── Boolean evaluator ───────────────────────────────────────────────────────

class BooleanEval {
public:
    explicit BooleanEval(const Trace& trace) : trace_(trace) {}

    bool run(const Formula& f, double t) {
        long k_t = grid_index(trace_, t);
        std::size_t root = flatten(f, nodes_);
        propagate_ranges(nodes_, root, k_t, k_t, k_t, trace_.dt());
        series_.resize(nodes_.size());
        eval(root);
        return at(root, k_t);
    }

private:
    bool at(std::size_t id, long k) const {
        return series_[id][static_cast<std::size_t>(k - nodes_[id].lo)] != 0;
    }

    void eval(std::size_t id) {
        const NodeInfo& n = nodes_[id];
        for (int kid : n.kids) eval(static_cast<std::size_t>(kid));

        const long lo = n.lo;
        const long hi = n.hi;
        std::vector<char>& out = series_[id];
        out.resize(static_cast<std::size_t>(hi - lo + 1));

        switch (n.f->kind()) {
            case Formula::Kind::True:
                std::fill(out.begin(), out.end(), 1);
                return;
            case Formula::Kind::Predicate: {
                if (hi >= static_cast<long>(trace_.size()))
                    throw EvalError("insufficient trace length for Boolean evaluation");
                std::vector<double> sig = predicate_signal(trace_, n.f->pred());
                for (long k = lo; k <= hi; ++k)
                    out[static_cast<std::size_t>(k - lo)] = sig[static_cast<std::size_t>(k)] >= 0.0;
                return;
            }
            case Formula::Kind::Not:
                for (long k = lo; k <= hi; ++k)
                    out[static_cast<std::size_t>(k - lo)] = !at(static_cast<std::size_t>(n.kids[0]), k);
                return;
            case Formula::Kind::And:
            case Formula::Kind::Or: {
                const bool conj = n.f->kind() == Formula::Kind::And;
                for (long k = lo; k <= hi; ++k) {
                    bool acc = conj;
                    for (int kid : n.kids) {
                        bool v = at(static_cast<std::size_t>(kid), k);
                        acc = conj ? (acc && v) : (acc || v);
                    }
                    out[static_cast<std::size_t>(k - lo)] = acc;
                }
                return;
            }
            case Formula::Kind::Eventually:
            case Formula::Kind::Always: {
                const bool always = n.f->kind() == Formula::Kind::Always;
                RelWindow w = relative_window(trace_.dt(), n.f->lower(), n.f->upper());
                for (long k = lo; k <= hi; ++k) {
                    bool acc = always;
                    for (long k1 = k + w.lo; k1 <= k + w.hi; ++k1) {
                        bool v = at(static_cast<std::size_t>(n.kids[0]), k1);
                        acc = always ? (acc && v) : (acc || v);
                        if (acc != always) break;
                    }
                    out[static_cast<std::size_t>(k - lo)] = acc;
                }
                return;
            }
            case Formula::Kind::Until: {
                RelWindow w = relative_window(trace_.dt(), n.f->lower(), n.f->upper());
                const std::size_t lhs = static_cast<std::size_t>(n.kids[0]);
                const std::size_t rhs = static_cast<std::size_t>(n.kids[1]);
                for (long k = lo; k <= hi; ++k) {
                    bool found = false;
                    bool lhs_ok = true;
                    long j = k;
                    for (long k1 = k + w.lo; k1 <= k + w.hi && !found; ++k1) {
                        while (j <= k1) {
                            lhs_ok = lhs_ok && at(lhs, j);
                            ++j;
                        }
                        found = lhs_ok && at(rhs, k1);
                    }
                    out[static_cast<std::size_t>(k - lo)] = found;
                }
                return;
            }
        }
    }

    const Trace& trace_;
    std::vector<NodeInfo> nodes_;
    std::vector<std::vector<char>> series_;
};

}  // namespace

double true_robustness() { return std::numeric_limits<double>::max(); }

bool eval_boolean(const Formula& f, const Trace& trace, double t) {
    return BooleanEval(trace).run(f, t);
}

RobustnessResult robustness(const Metric& metric, const Formula& f, const Trace& trace,
                            double t) {
    return RobustnessEval(metric, trace).run(f, t);
}

double robustness_value(const Metric& metric, const Formula& f, const Trace& trace, double t) {
    return RobustnessEval(metric, trace).run(f, t).value;
}

}  // namespace stlrob
