#ifndef NEURO_STATS_HPP
#define NEURO_STATS_HPP

#include <string>
#include <vector>

#include "neuro/errors.hpp"
#include "neuro/log.hpp"

namespace neuro {

// Median of a sample; an even count averages the two central values.
double median(std::vector<double> values);

// Per-generation median across a run set's runs for one log field.
std::vector<double> median_curve(const RunSet& runset, LogField field);

enum class MWMethod { Exact, NormalApprox };

struct MannWhitneyResult {
    double u_a = 0.0;
    double u_b = 0.0;
    double p_two_sided = 1.0;
    MWMethod method = MWMethod::Exact;
};

// Rank-sum U with midranks for ties. The two-sided p comes from exact
// enumeration of all C(n1+n2, n1) labelings up to combined n = 20 and from
// a tie-corrected, continuity-corrected normal approximation beyond.
MannWhitneyResult mann_whitney_u(const std::vector<double>& sample_a,
                                 const std::vector<double>& sample_b);

// The two p-value routes, exposed so they can be checked against each
// other and against independent oracles.
double mann_whitney_exact_p(const std::vector<double>& sample_a,
                            const std::vector<double>& sample_b);
double mann_whitney_normal_p(const std::vector<double>& sample_a,
                             const std::vector<double>& sample_b);

struct SignificanceReport {
    std::string comparison;  // e.g. "msm_vs_baseline"
    std::string field;       // "top_score" or "mean_score"
    int at_generation = 0;
    int n_a = 0, n_b = 0;
    double u_a = 0.0, u_b = 0.0;
    double p = 1.0;
    double median_a = 0.0, median_b = 0.0;
    double alpha = 0.01;
    bool significant = false;
    MWMethod method = MWMethod::Exact;

    std::string to_text() const;
};

// Extract each run's field value at `at_generation` from both run sets and
// test the two samples; verdict at the given alpha.
SignificanceReport compare_algorithms(const RunSet& a, const RunSet& b,
                                      LogField field, int at_generation,
                                      double alpha = 0.01);

} // namespace neuro

#endif
