#pragma once

#include <string>
#include <vector>

#include "lahreg/reg/metrics.hpp"

namespace lahreg::reg {

// One evaluated pair. The error fields are meaningful only when the
// registration succeeded (success = false pairs keep zeros there).
struct PairEvaluation {
    double inlier_ratio = 0.0;
    double rre_deg = 0.0;
    double rte_m = 0.0;
    bool success = false;
};

struct EvalReport {
    std::vector<PairEvaluation> pairs;
    MetricThresholds thresholds;
    double fmr = 0.0;
    double rr = 0.0;
    double rre_mean = 0.0, rre_std = 0.0;  // over successfully registered pairs
    double rte_mean = 0.0, rte_std = 0.0;
};

// Aggregates per-pair results: FMR over all pairs, recall counting a pair as
// registered when it succeeded within the rr_* bounds, and population
// mean/std of RRE and RTE over the successful pairs (zeros when none).
EvalReport summarize(std::vector<PairEvaluation> pairs, const MetricThresholds& thresholds);

std::string to_json(const EvalReport& report);

// One row per pair plus an aggregate footer row.
std::string to_csv(const EvalReport& report);

}  // namespace lahreg::reg
