#include "lahreg/reg/report.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lahreg::reg {
namespace {

std::pair<double, double> mean_std(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size());
    return {mean, std::sqrt(var)};
}

}  // namespace

EvalReport summarize(std::vector<PairEvaluation> pairs, const MetricThresholds& thresholds) {
    thresholds.validate();
    if (pairs.empty()) throw std::invalid_argument("summarize: no pairs");

    EvalReport report;
    report.pairs = std::move(pairs);
    report.thresholds = thresholds;

    std::vector<double> irs, rres, rtes;
    std::int64_t registered = 0;
    for (const PairEvaluation& p : report.pairs) {
        irs.push_back(p.inlier_ratio);
        if (!p.success) continue;
        rres.push_back(p.rre_deg);
        rtes.push_back(p.rte_m);
        registered +=
            p.rre_deg <= thresholds.rr_rre_max && p.rte_m <= thresholds.rr_rte_max;
    }
    report.fmr = fmr(irs, thresholds.tau2);
    report.rr = static_cast<double>(registered) / static_cast<double>(report.pairs.size());
    std::tie(report.rre_mean, report.rre_std) = mean_std(rres);
    std::tie(report.rte_mean, report.rte_std) = mean_std(rtes);
    return report;
}

std::string to_json(const EvalReport& report) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const PairEvaluation& p : report.pairs) {
        pairs.push_back({{"inlier_ratio", p.inlier_ratio},
                         {"rre_deg", p.rre_deg},
                         {"rte_m", p.rte_m},
                         {"success", p.success}});
    }
    const nlohmann::json j = {
        {"thresholds",
         {{"tau1", report.thresholds.tau1},
          {"tau2", report.thresholds.tau2},
          {"rr_rre_max", report.thresholds.rr_rre_max},
          {"rr_rte_max", report.thresholds.rr_rte_max}}},
        {"pairs", pairs},
        {"fmr", report.fmr},
        {"rr", report.rr},
        {"rre_mean", report.rre_mean},
        {"rre_std", report.rre_std},
        {"rte_mean", report.rte_mean},
        {"rte_std", report.rte_std},
    };
    return j.dump(2);
}

std::string to_csv(const EvalReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "pair,inlier_ratio,rre_deg,rte_m,success\n";
    for (std::size_t i = 0; i < report.pairs.size(); ++i) {
        const PairEvaluation& p = report.pairs[i];
        out << i << ',' << p.inlier_ratio << ',' << p.rre_deg << ',' << p.rte_m << ','
            << (p.success ? 1 : 0) << '\n';
    }
    out << "aggregate,fmr=" << report.fmr << ",rr=" << report.rr
        << ",rre_mean=" << report.rre_mean << ",rte_mean=" << report.rte_mean << '\n';
    return out.str();
}

}  // namespace lahreg::reg
