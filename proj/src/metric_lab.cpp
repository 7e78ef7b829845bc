#include "stlrob/metric_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "stlrob/semantics.hpp"

namespace stlrob {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string point_string(std::span<const double> p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ' ';
        s += fmt(p[i]);
    }
    return s + ")";
}

// Accumulates the worst violation and its witness.
struct Worst {
    double violation = 0.0;
    std::string witness = "none";

    void offer(double v, const std::string& w) {
        if (v > violation) {
            violation = v;
            witness = w;
        }
    }
};

PropertyReport make_report(std::string property, const Metric& metric, int samples,
                           const Worst& worst, double tolerance) {
    PropertyReport r;
    r.property = std::move(property);
    r.metric = metric.name();
    r.samples = samples;
    r.max_violation = worst.violation;
    r.tolerance = tolerance;
    r.pass = worst.violation <= tolerance;
    r.witness = worst.witness;
    return r;
}

double eval_perturbed(const Metric& m, std::span<const double> point, std::size_t i,
                      double delta) {
    std::vector<double> p(point.begin(), point.end());
    p[i] += delta;
    return m.and_n(p);
}

// One-sided difference quotients around point[i].
struct SidedQuotients {
    double forward;
    double backward;
};

SidedQuotients sided_quotients(const Metric& m, std::span<const double> point, std::size_t i,
                               double h) {
    double base = m.and_n(point);
    double up = eval_perturbed(m, point, i, h);
    double down = eval_perturbed(m, point, i, -h);
    return {(up - base) / h, (base - down) / h};
}

}  // namespace

double numeric_partial(const Metric& metric, std::span<const double> point, std::size_t i,
                       double h) {
    if (!(h > 0.0)) throw std::invalid_argument("numeric_partial needs h > 0");
    double up = eval_perturbed(metric, point, i, h);
    double down = eval_perturbed(metric, point, i, -h);
    double est = (up - down) / (2.0 * h);
    if (!std::isfinite(est)) throw EvalError("non-finite finite-difference estimate");
    return est;
}

PropertyReport check_idempotence_commutativity(const Metric& metric, int n_samples,
                                               RandomStream& rng) {
    Worst worst;
    for (int s = 0; s < n_samples; ++s) {
        int m = rng.uniform_int(1, 6);
        double rho = rng.uniform(-5.0, 5.0);
        std::vector<double> equal(static_cast<std::size_t>(m), rho);
        double vi = std::abs(metric.and_n(equal) - rho);
        worst.offer(vi, "idempotence rho=" + fmt(rho) + " M=" + std::to_string(m));

        std::vector<double> point(static_cast<std::size_t>(m));
        for (double& v : point) v = rng.uniform(-5.0, 5.0);
        std::vector<double> perm = point;
        rng.shuffle(perm);
        double vc = std::abs(metric.and_n(point) - metric.and_n(perm));
        worst.offer(vc, "commutativity " + point_string(point));
    }
    return make_report("idempotence-commutativity", metric, n_samples, worst, 1e-9);
}

PropertyReport check_minmax_bounds(const Metric& metric, int n_samples, RandomStream& rng) {
    Worst worst;
    for (int s = 0; s < n_samples; ++s) {
        int m = rng.uniform_int(1, 6);
        std::vector<double> point(static_cast<std::size_t>(m));
        for (double& v : point) v = rng.uniform(-5.0, 5.0);
        auto [lo, hi] = std::minmax_element(point.begin(), point.end());
        double v = metric.and_n(point);
        double viol = std::max({*lo - v, v - *hi, 0.0});
        worst.offer(viol, point_string(point) + " -> " + fmt(v));
    }
    return make_report("minmax-bounds", metric, n_samples, worst, 1e-12);
}

PropertyReport check_scale_invariance(const Metric& metric, int n_samples, RandomStream& rng) {
    static constexpr double kAlphas[] = {1e-3, 0.1, 1.0, 10.0, 1e3};
    Worst worst;
    for (int s = 0; s < n_samples; ++s) {
        int m = rng.uniform_int(1, 6);
        std::vector<double> point(static_cast<std::size_t>(m));
        for (double& v : point) v = rng.uniform(-5.0, 5.0);
        double base = metric.and_n(point);
        std::vector<double> scaled(point.size());
        for (double alpha : kAlphas) {
            for (std::size_t i = 0; i < point.size(); ++i) scaled[i] = alpha * point[i];
            double got = metric.and_n(scaled);
            double want = alpha * base;
            double rel = std::abs(got - want) / (std::abs(want) + 0.01);
            worst.offer(rel, "alpha=" + fmt(alpha) + " " + point_string(point) + " -> " +
                                 fmt(got) + " vs " + fmt(want));
        }
    }
    return make_report("scale-invariance", metric, n_samples, worst, 1e-9);
}

PropertyReport check_shadow_lifting(const Metric& metric, int n_samples, RandomStream& rng) {
    Worst worst;
    for (int s = 0; s < n_samples; ++s) {
        int m = rng.uniform_int(2, 6);
        double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        double rho = sign * rng.uniform(0.1, 5.0);
        double h = 1e-5 * std::max(1.0, std::abs(rho));
        std::vector<double> point(static_cast<std::size_t>(m), rho);
        for (std::size_t i = 0; i < point.size(); ++i) {
            auto q = sided_quotients(metric, point, i, h);
            // Raising any single operand from an all-equal point must raise
            // the conjunction.
            if (q.forward <= 1e-6)
                worst.offer(2.0, "no lift: rho=" + fmt(rho) + " M=" + std::to_string(m) +
                                     " d+=" + fmt(q.forward));
            // Where the two sides agree the derivative must be 1/M.
            if (std::abs(q.forward - q.backward) <= 1e-3) {
                double central = 0.5 * (q.forward + q.backward);
                double dev = std::abs(central - 1.0 / static_cast<double>(m));
                worst.offer(dev / 5e-4, "equal-point partial: rho=" + fmt(rho) + " M=" +
                                            std::to_string(m) + " d=" + fmt(central));
            }
        }
    }
    return make_report("shadow-lifting", metric, n_samples, worst, 1.0);
}

namespace {

// Kink measure at point[i]: smallest one-sided quotient disagreement across
// the step sweep.  Curvature shrinks with h, a genuine kink does not.
double kink_measure(const Metric& m, std::span<const double> point, std::size_t i) {
    double measure = std::numeric_limits<double>::infinity();
    for (double h : {1e-4, 1e-5}) {
        auto q = sided_quotients(m, point, i, h);
        measure = std::min(measure, std::abs(q.forward - q.backward));
    }
    return measure;
}

}  // namespace

PropertyReport check_weak_smoothness(const Metric& metric, int n_samples, RandomStream& rng) {
    Worst worst;
    for (int s = 0; s < n_samples; ++s) {
        int m = rng.uniform_int(2, 6);

        // Family A: random point with a unique minimum (gap >= 0.15), all
        // coordinates and the minimum bounded away from 0.
        std::vector<double> a(static_cast<std::size_t>(m));
        double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        a[0] = sign * rng.uniform(0.1, 4.0);
        for (std::size_t i = 1; i < a.size(); ++i) {
            a[i] = a[0] + rng.uniform(0.15, 2.5);
            if (std::abs(a[i]) < 0.01) a[i] += 0.05;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            worst.offer(kink_measure(metric, a, i) / 1e-3,
                        "gradient jump at unique-min point " + point_string(a) + " coord " +
                            std::to_string(i));

        // Family B: sign boundary with a unique zero minimum.
        std::vector<double> b(static_cast<std::size_t>(m));
        for (double& v : b) v = rng.uniform(0.3, 3.0);
        std::size_t i0 = static_cast<std::size_t>(rng.uniform_int(0, m - 1));
        b[i0] = 0.0;
        worst.offer(kink_measure(metric, b, i0) / 1e-3,
                    "gradient jump at sign switch " + point_string(b) + " coord " +
                        std::to_string(i0));

        // Family C: all operands equal (the tie the shadow-lifting property
        // cares about).
        double rho = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.1, 5.0);
        std::vector<double> c(static_cast<std::size_t>(m), rho);
        worst.offer(kink_measure(metric, c, 0) / 1e-3,
                    "gradient jump at all-equal point rho=" + fmt(rho) + " M=" +
                        std::to_string(m));

        // Continuity probe at the family-A point.
        std::vector<double> dir(static_cast<std::size_t>(m));
        double norm = 0.0;
        for (double& v : dir) {
            v = rng.gaussian();
            norm += v * v;
        }
        norm = std::sqrt(norm);
        std::vector<double> shifted = a;
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += 1e-8 * dir[i] / norm;
        double jump = std::abs(metric.and_n(shifted) - metric.and_n(a));
        worst.offer(jump / 1e-5, "discontinuity near " + point_string(a));
    }
    return make_report("weak-smoothness", metric, n_samples, worst, 1.0);
}

PropertyReport check_boundary_derivative(const Metric& metric, int n_samples,
                                         RandomStream& rng) {
    Worst worst;
    for (int s = 0; s < n_samples; ++s) {
        int m = rng.uniform_int(2, 6);
        std::vector<double> point(static_cast<std::size_t>(m));
        for (double& v : point) v = rng.uniform(0.25, 3.0);
        std::size_t i0 = static_cast<std::size_t>(rng.uniform_int(0, m - 1));
        point[i0] = 0.0;
        double d = numeric_partial(metric, point, i0, 1e-5);
        worst.offer(std::abs(d - 1.0),
                    point_string(point) + " coord " + std::to_string(i0) + " d=" + fmt(d));
    }
    return make_report("boundary-partial", metric, n_samples, worst, 1e-3);
}

double limit_deviation(const Metric& metric, double rho1, double big, std::size_t extra_terms) {
    std::vector<double> point(1 + extra_terms, big);
    point[0] = rho1;
    return std::abs(metric.and_n(point) - rho1);
}

double max_conjunction_lift(const Metric& metric, double rho1, double lo, double hi,
                            int gridpoints) {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < gridpoints; ++i) {
        double rho = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(gridpoints - 1);
        double v[2] = {rho1, rho};
        best = std::max(best, metric.and_n(v));
    }
    return best - rho1;
}

PropertyReport check_limit_behavior(const Metric& metric) {
    Worst worst;
    int samples = 0;
    for (double rho1 : {-1.0, 0.5}) {
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 2; k <= 6; ++k) {
            double dev = limit_deviation(metric, rho1, std::pow(10.0, k), 1);
            ++samples;
            if (dev > prev + 1e-12)
                worst.offer(2.0, "deviation grew from " + fmt(prev) + " to " + fmt(dev) +
                                     " at rho1=" + fmt(rho1) + " k=" + std::to_string(k));
            prev = dev;
            if (k == 6)
                worst.offer(dev / 1e-3, "residual " + fmt(dev) + " at rho1=" + fmt(rho1) +
                                            " against 1e6");
        }
    }
    double lift = max_conjunction_lift(metric, -1.0, -1.0, 100.0, 4000);
    double back = limit_deviation(metric, -1.0, 100.0, 1);
    PropertyReport r = make_report("limit-behavior", metric, samples, worst, 1.0);
    r.witness += "; lift=" + fmt(lift) + " return-gap=" + fmt(back);
    return r;
}

double full_smoothness_gap_at_origin(const Metric& metric, double eps) {
    double z[2] = {0.0, 0.0};
    double base = metric.and_n(z);
    double d1 = (eval_perturbed(metric, z, 0, eps) - base) / eps;
    double d2 = (eval_perturbed(metric, z, 1, eps) - base) / eps;
    double both[2] = {eps, eps};
    double s = (metric.and_n(both) - base) / eps;
    return std::abs(s - d1 - d2);
}

// ── Random instances ────────────────────────────────────────────────────────

Trace random_trace(RandomStream& rng, double duration, double dt,
                   const std::vector<std::string>& channels) {
    std::size_t n = static_cast<std::size_t>(std::llround(duration / dt)) + 1;
    struct Wave {
        double amp, omega, phase;
    };
    std::vector<double> offsets;
    std::vector<std::array<Wave, 3>> waves;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        offsets.push_back(rng.uniform(-0.5, 0.5));
        std::array<Wave, 3> w;
        for (Wave& wav : w)
            wav = {rng.uniform(0.1, 0.8), rng.uniform(0.3, 2.5), rng.uniform(0.0, 6.283185307)};
        waves.push_back(w);
    }
    std::vector<double> data;
    data.reserve(n * channels.size());
    for (std::size_t k = 0; k < n; ++k) {
        double t = static_cast<double>(k) * dt;
        for (std::size_t c = 0; c < channels.size(); ++c) {
            double v = offsets[c];
            for (const Wave& w : waves[c]) v += w.amp * std::sin(w.omega * t + w.phase);
            data.push_back(v);
        }
    }
    return Trace(0.0, dt, channels, std::move(data));
}

namespace {

PredicateExpr random_predicate(RandomStream& rng, const GeneratorOptions& opts) {
    const std::string& ch = opts.channels[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(opts.channels.size()) - 1))];
    switch (rng.uniform_int(0, 3)) {
        case 0:
            return PredicateExpr::add(PredicateExpr::channel(ch),
                                      PredicateExpr::constant(rng.uniform(-1.5, 1.5)));
        case 1:
            return PredicateExpr::subtract(PredicateExpr::constant(rng.uniform(-1.5, 1.5)),
                                           PredicateExpr::channel(ch));
        case 2: {
            std::vector<PredicateExpr> parts;
            for (const std::string& name : opts.channels)
                parts.push_back(PredicateExpr::subtract(PredicateExpr::channel(name),
                                                        PredicateExpr::constant(
                                                            rng.uniform(-1.5, 1.5))));
            return PredicateExpr::subtract(PredicateExpr::constant(rng.uniform(0.3, 2.0)),
                                           PredicateExpr::norm(std::move(parts)));
        }
        default: {
            double s = rng.uniform(0.3, 1.5) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
            return PredicateExpr::add(PredicateExpr::scale(s, PredicateExpr::channel(ch)),
                                      PredicateExpr::constant(rng.uniform(-1.0, 1.0)));
        }
    }
}

Formula gen_formula(RandomStream& rng, const GeneratorOptions& opts, int depth, double budget) {
    if (depth <= 0 || budget < 0.15 || rng.uniform() < 0.28)
        return Formula::predicate(random_predicate(rng, opts));

    int pick = rng.uniform_int(0, 99);
    if (pick < 18) return Formula::negation(gen_formula(rng, opts, depth - 1, budget));
    if (pick < 62) {
        int m = rng.uniform_int(2, 3);
        std::vector<Formula> kids;
        kids.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) kids.push_back(gen_formula(rng, opts, depth - 1, budget));
        return pick < 40 ? Formula::conjunction(std::move(kids))
                         : Formula::disjunction(std::move(kids));
    }
    double a = rng.uniform(0.0, std::min(0.8, budget - 0.1));
    double width = rng.uniform(0.1, std::min(1.2, budget - a));
    double b = a + width;
    double child_budget = budget - b;
    if (pick < 76) return Formula::always(a, b, gen_formula(rng, opts, depth - 1, child_budget));
    if (pick < 90)
        return Formula::eventually(a, b, gen_formula(rng, opts, depth - 1, child_budget));
    Formula lhs = gen_formula(rng, opts, depth - 1, child_budget);
    Formula rhs = gen_formula(rng, opts, depth - 1, child_budget);
    return Formula::until(a, b, std::move(lhs), std::move(rhs));
}

}  // namespace

Formula random_formula(RandomStream& rng, const GeneratorOptions& opts) {
    return gen_formula(rng, opts, opts.max_depth, opts.max_horizon).normalized();
}

PropertyReport check_soundness(const Metric& metric, int n_formulas, RandomStream& rng) {
    // Pre-derive one seed per instance so evaluation parallelizes without
    // perturbing the stream.
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_formulas));
    for (auto& s : seeds) s = rng.next_u64();

    std::vector<double> violation(seeds.size(), 0.0);
    std::vector<std::string> note(seeds.size());

#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < static_cast<long>(seeds.size()); ++i) {
        RandomStream local(seeds[static_cast<std::size_t>(i)]);
        GeneratorOptions gopts;
        Trace trace = random_trace(local, 8.0, 0.05, gopts.channels);
        Formula f = random_formula(local, gopts);
        bool sat = eval_boolean(f, trace, 0.0);
        double rho = robustness_value(metric, f, trace, 0.0);
        bool mismatch = std::abs(rho) > 1e-9 && (rho >= 0.0) != sat;
        if (mismatch) {
            violation[static_cast<std::size_t>(i)] = std::abs(rho);
            note[static_cast<std::size_t>(i)] =
                "formula " + format_formula(f) + " rho=" + fmt(rho) + " boolean=" +
                (sat ? "true" : "false");
        }
    }

    Worst worst;
    for (std::size_t i = 0; i < seeds.size(); ++i)
        if (violation[i] > 0.0) worst.offer(violation[i], note[i]);
    return make_report("soundness", metric, n_formulas, worst, 0.0);
}

std::vector<PropertyReport> run_all_checks(const Metric& metric, const LabOptions& opts) {
    std::vector<PropertyReport> out;
    RandomStream r1(mix_seed(opts.seed, 1));
    out.push_back(check_soundness(metric, opts.samples, r1));
    RandomStream r2(mix_seed(opts.seed, 2));
    out.push_back(check_idempotence_commutativity(metric, opts.samples, r2));
    RandomStream r3(mix_seed(opts.seed, 3));
    out.push_back(check_weak_smoothness(metric, opts.samples, r3));
    RandomStream r4(mix_seed(opts.seed, 4));
    out.push_back(check_shadow_lifting(metric, opts.samples, r4));
    RandomStream r5(mix_seed(opts.seed, 5));
    out.push_back(check_minmax_bounds(metric, opts.samples, r5));
    RandomStream r6(mix_seed(opts.seed, 6));
    out.push_back(check_scale_invariance(metric, opts.samples, r6));
    return out;
}

std::string format_report_table(std::span<const PropertyReport> reports) {
    // Pivot: preserve first-seen metric and property order.
    std::vector<std::string> metrics;
    std::vector<std::string> props;
    for (const PropertyReport& r : reports) {
        if (std::find(metrics.begin(), metrics.end(), r.metric) == metrics.end())
            metrics.push_back(r.metric);
        if (std::find(props.begin(), props.end(), r.property) == props.end())
            props.push_back(r.property);
    }
    std::size_t name_w = 12;
    for (const auto& m : metrics) name_w = std::max(name_w, m.size() + 2);

    std::string out(name_w, ' ');
    for (const auto& p : props) {
        out += p;
        out += "  ";
    }
    out += '\n';
    for (const auto& m : metrics) {
        out += m;
        out.append(name_w - m.size(), ' ');
        for (const auto& p : props) {
            const PropertyReport* found = nullptr;
            for (const PropertyReport& r : reports)
                if (r.metric == m && r.property == p) found = &r;
            std::string cell = found ? (found->pass ? "yes" : "NO") : "-";
            out += cell;
            out.append(p.size() + 2 > cell.size() ? p.size() + 2 - cell.size() : 1, ' ');
        }
        out += '\n';
    }
    out += '\n';
    for (const PropertyReport& r : reports) {
        out += (r.pass ? "[pass] " : "[FAIL] ");
        out += r.metric + " / " + r.property + ": max violation " + fmt(r.max_violation) +
               " (tol " + fmt(r.tolerance) + ", " + std::to_string(r.samples) +
               " samples); worst: " + r.witness + "\n";
    }
    return out;
}

void write_reports_csv(std::span<const PropertyReport> reports, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw TraceError("cannot open '" + path + "' for writing");
    f << "property,metric,samples,max_violation,tolerance,pass,witness\n";
    for (const PropertyReport& r : reports) {
        std::string witness = r.witness;
        for (char& c : witness)
            if (c == ',' || c == '\n') c = ';';
        f << r.property << ',' << r.metric << ',' << r.samples << ',' << fmt(r.max_violation)
          << ',' << fmt(r.tolerance) << ',' << (r.pass ? 1 : 0) << ',' << witness << '\n';
    }
}

}  // namespace stlrob
