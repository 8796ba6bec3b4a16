#include "neuro/stats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace neuro {

double median(std::vector<double> values) {
    if (values.empty()) throw InputError("median of an empty sample");
    std::sort(values.begin(), values.end());
    size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<double> median_curve(const RunSet& runset, LogField field) {
    if (runset.runs.empty()) throw InputError("median curve of an empty run set");
    const size_t horizon = runset.runs[0].size();
    for (const auto& run : runset.runs)
        if (run.size() != horizon)
            throw InputError("runs have different generation horizons");

    std::vector<double> curve(horizon);
    std::vector<double> column(runset.runs.size());
    for (size_t g = 0; g < horizon; ++g) {
        for (size_t r = 0; r < runset.runs.size(); ++r)
            column[r] = log_field(runset.runs[r][g], field);
        curve[g] = median(column);
    }
    return curve;
}

namespace {

// Midranks of the pooled sample, in pooled-sort order, together with the
// tie-group sizes needed for the variance correction.
struct PooledRanks {
    std::vector<double> ranks;   // rank of the k-th smallest pooled value
    std::vector<int> tie_sizes;  // one entry per tie group
};

PooledRanks midranks(std::vector<double> pooled) {
    std::sort(pooled.begin(), pooled.end());
    PooledRanks out;
    out.ranks.resize(pooled.size());
    size_t i = 0;
    while (i < pooled.size()) {
        size_t j = i;
        while (j + 1 < pooled.size() && pooled[j + 1] == pooled[i]) ++j;
        double rank = 0.5 * static_cast<double>(i + 1 + j + 1);
        for (size_t k = i; k <= j; ++k) out.ranks[k] = rank;
        out.tie_sizes.push_back(static_cast<int>(j - i + 1));
        i = j + 1;
    }
    return out;
}

// U statistic of sample a via the rank-sum identity.
double u_statistic(const std::vector<double>& sample_a,
                   const std::vector<double>& sample_b) {
    std::vector<double> pooled = sample_a;
    pooled.insert(pooled.end(), sample_b.begin(), sample_b.end());
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    PooledRanks pr = midranks(pooled);

    double rank_sum_a = 0.0;
    for (double v : sample_a) {
        size_t k = std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin();
        rank_sum_a += pr.ranks[k];
    }
    double n1 = static_cast<double>(sample_a.size());
    return rank_sum_a - n1 * (n1 + 1.0) / 2.0;
}

void check_samples(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty())
        throw InputError("Mann-Whitney needs two non-empty samples");
}

double normal_sf(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

} // namespace

double mann_whitney_exact_p(const std::vector<double>& sample_a,
                            const std::vector<double>& sample_b) {
    check_samples(sample_a, sample_b);
    const int n1 = static_cast<int>(sample_a.size());
    const int n2 = static_cast<int>(sample_b.size());
    const int n = n1 + n2;

    std::vector<double> pooled = sample_a;
    pooled.insert(pooled.end(), sample_b.begin(), sample_b.end());
    std::sort(pooled.begin(), pooled.end());
    PooledRanks pr = midranks(pooled);

    const double mean_u = 0.5 * n1 * n2;
    const double observed = std::fabs(u_statistic(sample_a, sample_b) - mean_u);

    // Walk every n1-subset of the pooled ranks. Rank sums are multiples of
    // one half, so double comparisons below are exact.
    std::vector<uint8_t> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + n1, 1);
    uint64_t extreme = 0, total = 0;
    const double offset = static_cast<double>(n1) * (n1 + 1.0) / 2.0;
    do {
        double rank_sum = 0.0;
        for (int k = 0; k < n; ++k)
            if (pick[k]) rank_sum += pr.ranks[k];
        if (std::fabs(rank_sum - offset - mean_u) >= observed) ++extreme;
        ++total;
    } while (std::prev_permutation(pick.begin(), pick.end()));

    return static_cast<double>(extreme) / static_cast<double>(total);
}

double mann_whitney_normal_p(const std::vector<double>& sample_a,
                             const std::vector<double>& sample_b) {
    check_samples(sample_a, sample_b);
    const double n1 = static_cast<double>(sample_a.size());
    const double n2 = static_cast<double>(sample_b.size());
    const double n = n1 + n2;

    std::vector<double> pooled = sample_a;
    pooled.insert(pooled.end(), sample_b.begin(), sample_b.end());
    PooledRanks pr = midranks(std::move(pooled));

    double tie_term = 0.0;
    for (int t : pr.tie_sizes)
        tie_term += static_cast<double>(t) * t * t - t;
    const double variance =
        n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (variance <= 0.0) return 1.0; // every pooled value tied

    const double u_a = u_statistic(sample_a, sample_b);
    double numer = std::fabs(u_a - 0.5 * n1 * n2) - 0.5; // continuity correction
    if (numer < 0.0) numer = 0.0;
    double p = 2.0 * normal_sf(numer / std::sqrt(variance));
    return p > 1.0 ? 1.0 : p;
}

MannWhitneyResult mann_whitney_u(const std::vector<double>& sample_a,
                                 const std::vector<double>& sample_b) {
    check_samples(sample_a, sample_b);
    MannWhitneyResult r;
    r.u_a = u_statistic(sample_a, sample_b);
    r.u_b = static_cast<double>(sample_a.size()) * sample_b.size() - r.u_a;
    if (sample_a.size() + sample_b.size() <= 20) {
        r.method = MWMethod::Exact;
        r.p_two_sided = mann_whitney_exact_p(sample_a, sample_b);
    } else {
        r.method = MWMethod::NormalApprox;
        r.p_two_sided = mann_whitney_normal_p(sample_a, sample_b);
    }
    return r;
}

std::string SignificanceReport::to_text() const {
    std::ostringstream os;
    os << comparison << " on " << field << " at generation " << at_generation
       << ": U_a=" << u_a << " U_b=" << u_b << " p=" << p
       << " (method=" << (method == MWMethod::Exact ? "exact" : "normal-approx")
       << ", n=" << n_a << "/" << n_b << ")\n"
       << "  medians: " << median_a << " vs " << median_b << "; "
       << (significant ? "significant" : "not significant") << " at alpha=" << alpha;
    return os.str();
}

SignificanceReport compare_algorithms(const RunSet& a, const RunSet& b,
                                      LogField field, int at_generation,
                                      double alpha) {
    auto extract = [&](const RunSet& set) {
        std::vector<double> values;
        for (const auto& run : set.runs) {
            if (at_generation < 0 || at_generation >= static_cast<int>(run.size()))
                throw InputError("generation " + std::to_string(at_generation) +
                                 " outside the run horizon");
            values.push_back(log_field(run[at_generation], field));
        }
        return values;
    };
    std::vector<double> va = extract(a);
    std::vector<double> vb = extract(b);

    MannWhitneyResult mw = mann_whitney_u(va, vb);
    SignificanceReport report;
    report.comparison = a.algorithm + "_vs_" + b.algorithm;
    report.field = field == LogField::TopScore ? "top_score" : "mean_score";
    report.at_generation = at_generation;
    report.n_a = static_cast<int>(va.size());
    report.n_b = static_cast<int>(vb.size());
    report.u_a = mw.u_a;
    report.u_b = mw.u_b;
    report.p = mw.p_two_sided;
    report.median_a = median(va);
    report.median_b = median(vb);
    report.alpha = alpha;
    report.significant = mw.p_two_sided < alpha;
    report.method = mw.method;
    return report;
}

} // namespace neuro
