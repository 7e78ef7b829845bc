#include "stlrob/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "stlrob/metric_lab.hpp"
#include "stlrob/semantics.hpp"

namespace stlrob {

namespace {

constexpr double kSuccessCostCeiling = 3.0;  // separates the two cost basins

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    double pos = q * static_cast<double>(v.size() - 1);
    std::size_t i = static_cast<std::size_t>(pos);
    if (i + 1 >= v.size()) return v.back();
    double w = pos - static_cast<double>(i);
    return v[i] + w * (v[i + 1] - v[i]);
}

}  // namespace

RobotSpec case_study_robot() {
    RobotSpec s;
    s.x0 = {2.0, 2.0};
    s.u_max = 1.0;
    s.dt = 0.02;
    s.T = 10.0;
    return s;
}

std::array<GoalRegion, 2> case_study_goals() {
    return {GoalRegion{{1.5, 2.5}, 0.2}, GoalRegion{{2.5, 1.5}, 0.2}};
}

Formula case_study_formula() {
    return parse_formula(
        "G[0,6](F[0,4](0.2 - norm(x1 - 1.5, x2 - 2.5)) & F[0,4](0.2 - norm(x1 - 2.5, x2 - 1.5)))");
}

AnalyticOptimum analytic_optimum() {
    const RobotSpec robot = case_study_robot();
    const auto goals = case_study_goals();
    const double margin = 0.05;
    const double contact = goals[0].radius - margin;  // depth of the visit point

    Vec2 c1 = goals[0].center;
    Vec2 c2 = goals[1].center;
    Vec2 axis = c2 - c1;
    double cc = axis.norm();
    Vec2 unit = axis * (1.0 / cc);
    // Visit points on the c1-c2 line, `contact` inside each region.  The
    // start sits on that line midway, so the approach is collinear.
    Vec2 a = c1 + unit * contact;
    Vec2 b = c2 - unit * contact;

    AnalyticOptimum opt;
    opt.margin = margin;
    opt.approach_distance = (a - robot.x0).norm();
    opt.inter_goal_distance = cc - 2.0 * contact;
    // Constant-speed segments of 2 s each; energy d^2/dt per segment.
    opt.optimal_cost = opt.approach_distance * opt.approach_distance / 2.0 +
                       3.0 * opt.inter_goal_distance * opt.inter_goal_distance / 2.0;
    opt.rejected_plan_speed = opt.inter_goal_distance / 1.0;
    opt.rejected_plan_feasible = opt.rejected_plan_speed <= robot.u_max;
    opt.waypoints = {{0.0, robot.x0}, {2.0, a}, {4.0, b}, {6.0, a}, {8.0, b}, {10.0, b}};
    opt.description =
        "alternate goals every 2 s (g1@2, g2@4, g1@6, g2@8) at constant speed, then hold; "
        "the 3 s/1 s schedule needs " +
        fmt9(opt.rejected_plan_speed) + " m/s and is infeasible";
    return opt;
}

Policy optimal_plan_policy() {
    AnalyticOptimum opt = analytic_optimum();
    return [wp = opt.waypoints](Vec2, double t) -> Vec2 {
        for (std::size_t i = 1; i < wp.size(); ++i) {
            if (t < wp[i].first) {
                Vec2 seg = wp[i].second - wp[i - 1].second;
                return seg * (1.0 / (wp[i].first - wp[i - 1].first));
            }
        }
        return {};
    };
}

const char* guidance_name(GuidanceLevel g) {
    switch (g) {
        case GuidanceLevel::None: return "none";
        case GuidanceLevel::Weak: return "weak";
        case GuidanceLevel::Strong: return "strong";
    }
    return "?";
}

GuidanceLevel parse_guidance(const std::string& name) {
    if (name == "none") return GuidanceLevel::None;
    if (name == "weak") return GuidanceLevel::Weak;
    if (name == "strong") return GuidanceLevel::Strong;
    throw std::invalid_argument("unknown guidance level '" + name +
                                "' (expected none, weak, or strong)");
}

std::vector<GuidedGoal> case_study_guidance(GuidanceLevel level, const std::string& funnel_dir) {
    std::string path = funnel_dir + "/gamma1_" + guidance_name(level) + ".csv";
    Funnel gamma1 = Funnel::load(path);
    Funnel gamma2 = mirror_funnel(gamma1);
    auto goals = case_study_goals();
    std::vector<GuidedGoal> out;
    out.push_back({std::move(gamma1), goals[0]});
    out.push_back({std::move(gamma2), goals[1]});
    return out;
}

void ExperimentPlan::validate() const {
    if (metrics.empty() || guidance.empty() || seeds.empty())
        throw std::invalid_argument("experiment plan needs metrics, guidance levels, and seeds");
    for (const std::string& m : metrics) make_metric(m, nu);  // name check
}

ExperimentSummary run_casestudy(const ExperimentPlan& plan) {
    plan.validate();
    const Formula formula = case_study_formula();
    const RobotSpec robot = case_study_robot();

    struct Config {
        std::string metric;
        GuidanceLevel level;
        Scenario scenario;
    };
    std::vector<Config> configs;
    for (const std::string& m : plan.metrics)
        for (GuidanceLevel g : plan.guidance) {
            Scenario sc;
            sc.robot = robot;
            sc.guidance = case_study_guidance(g, plan.funnel_dir);
            configs.push_back({m, g, std::move(sc)});
        }

    const std::size_t n_seeds = plan.seeds.size();
    std::vector<LearningHistory> results(configs.size() * n_seeds);

#pragma omp parallel for schedule(dynamic) collapse(2)
    for (long c = 0; c < static_cast<long>(configs.size()); ++c) {
        for (long s = 0; s < static_cast<long>(n_seeds); ++s) {
            const Config& cfg = configs[static_cast<std::size_t>(c)];
            PI2Config run_cfg = plan.base;
            run_cfg.seed = plan.seeds[static_cast<std::size_t>(s)];
            auto metric = make_metric(cfg.metric, plan.nu);
            results[static_cast<std::size_t>(c) * n_seeds + static_cast<std::size_t>(s)] =
                run_pi2(run_cfg, cfg.scenario, *metric, formula);
        }
    }

    ExperimentSummary summary;
    summary.iterations = plan.base.iterations;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        ConfigSummary cs;
        cs.metric = configs[c].metric;
        cs.guidance = configs[c].level;
        cs.runs = static_cast<int>(n_seeds);
        std::vector<double> final_costs;
        std::vector<double> iters_to_sat;
        for (std::size_t s = 0; s < n_seeds; ++s) {
            const LearningHistory& h = results[c * n_seeds + s];
            bool ok = !h.empty() && h.back().rho >= plan.base.rho_target &&
                      h.back().cost < kSuccessCostCeiling;
            cs.run_success.push_back(ok);
            if (ok) {
                ++cs.successes;
                final_costs.push_back(h.back().cost);
                for (const IterationRecord& r : h)
                    if (r.success) {
                        iters_to_sat.push_back(static_cast<double>(r.iteration));
                        break;
                    }
            }
            cs.histories.push_back(h);
        }
        cs.success_rate = n_seeds ? static_cast<double>(cs.successes) /
                                        static_cast<double>(n_seeds)
                                  : 0.0;
        cs.final_cost_median = quantile(final_costs, 0.5);
        cs.final_cost_p10 = quantile(final_costs, 0.1);
        cs.final_cost_p90 = quantile(final_costs, 0.9);
        cs.iters_to_sat_median = quantile(iters_to_sat, 0.5);
        cs.iters_to_sat_p10 = quantile(iters_to_sat, 0.1);
        cs.iters_to_sat_p90 = quantile(iters_to_sat, 0.9);

        for (int it = 0; it < summary.iterations; ++it) {
            std::vector<double> rhos;
            std::vector<double> costs;
            for (std::size_t s = 0; s < n_seeds; ++s) {
                if (!cs.run_success[s]) continue;
                const LearningHistory& h = cs.histories[s];
                rhos.push_back(h[static_cast<std::size_t>(it)].rho);
                costs.push_back(h[static_cast<std::size_t>(it)].cost);
            }
            cs.curves.rho_median.push_back(quantile(rhos, 0.5));
            cs.curves.rho_p10.push_back(quantile(rhos, 0.1));
            cs.curves.rho_p90.push_back(quantile(rhos, 0.9));
            cs.curves.cost_median.push_back(quantile(costs, 0.5));
            cs.curves.cost_p10.push_back(quantile(costs, 0.1));
            cs.curves.cost_p90.push_back(quantile(costs, 0.9));
        }
        summary.configs.push_back(std::move(cs));
    }
    return summary;
}

void export_curves(const ExperimentSummary& summary, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const ConfigSummary& cs : summary.configs) {
        std::string path =
            out_dir + "/curves_" + cs.metric + "_" + guidance_name(cs.guidance) + ".csv";
        std::ofstream f(path, std::ios::binary);
        if (!f) throw TraceError("cannot open '" + path + "' for writing");
        f << "iteration,rho_median,rho_p10,rho_p90,cost_median,cost_p10,cost_p90\n";
        for (int it = 0; it < summary.iterations; ++it) {
            auto i = static_cast<std::size_t>(it);
            f << (it + 1) << ',' << fmt9(cs.curves.rho_median[i]) << ','
              << fmt9(cs.curves.rho_p10[i]) << ',' << fmt9(cs.curves.rho_p90[i]) << ','
              << fmt9(cs.curves.cost_median[i]) << ',' << fmt9(cs.curves.cost_p10[i]) << ','
              << fmt9(cs.curves.cost_p90[i]) << '\n';
        }
    }
}

void export_summary(const ExperimentSummary& summary, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);

    // Success-rate matrix, metric rows by guidance columns.
    std::vector<std::string> metrics;
    std::vector<GuidanceLevel> levels;
    for (const ConfigSummary& cs : summary.configs) {
        if (std::find(metrics.begin(), metrics.end(), cs.metric) == metrics.end())
            metrics.push_back(cs.metric);
        if (std::find(levels.begin(), levels.end(), cs.guidance) == levels.end())
            levels.push_back(cs.guidance);
    }
    {
        std::ofstream f(out_dir + "/summary.csv", std::ios::binary);
        if (!f) throw TraceError("cannot write summary.csv");
        f << "metric";
        for (GuidanceLevel g : levels) f << ',' << guidance_name(g);
        f << '\n';
        for (const std::string& m : metrics) {
            f << m;
            for (GuidanceLevel g : levels) {
                const ConfigSummary* found = nullptr;
                for (const ConfigSummary& cs : summary.configs)
                    if (cs.metric == m && cs.guidance == g) found = &cs;
                f << ',' << (found ? fmt9(found->success_rate) : "");
            }
            f << '\n';
        }
    }
    {
        std::ofstream f(out_dir + "/details.csv", std::ios::binary);
        if (!f) throw TraceError("cannot write details.csv");
        f << "metric,guidance,runs,successes,success_rate,iters_to_sat_median,iters_to_sat_p10,"
             "iters_to_sat_p90,final_cost_median,final_cost_p10,final_cost_p90\n";
        for (const ConfigSummary& cs : summary.configs) {
            f << cs.metric << ',' << guidance_name(cs.guidance) << ',' << cs.runs << ','
              << cs.successes << ',' << fmt9(cs.success_rate) << ','
              << fmt9(cs.iters_to_sat_median) << ',' << fmt9(cs.iters_to_sat_p10) << ','
              << fmt9(cs.iters_to_sat_p90) << ',' << fmt9(cs.final_cost_median) << ','
              << fmt9(cs.final_cost_p10) << ',' << fmt9(cs.final_cost_p90) << '\n';
        }
    }
}

std::string format_summary_table(const ExperimentSummary& summary) {
    std::string out = "metric        guidance  success  med.final.C  med.iters-to-sat\n";
    char buf[160];
    for (const ConfigSummary& cs : summary.configs) {
        std::snprintf(buf, sizeof buf, "%-13s %-9s %3d/%-3d  %-11.4g  %.4g\n", cs.metric.c_str(),
                      guidance_name(cs.guidance), cs.successes, cs.runs, cs.final_cost_median,
                      cs.iters_to_sat_median);
        out += buf;
    }
    return out;
}

}  // namespace stlrob
