#pragma once

#include <span>
#include <string>
#include <vector>

#include "casched/model.hpp"

namespace casched {

// Pr(I_k = x) for k in 1..n, x in -n..n. Cells outside |x| <= k or with the
// wrong parity are zero.
class DistributionMatrix {
public:
    explicit DistributionMatrix(int n);

    int areas() const { return n_; }

    double at(int k, int x) const { return cells_[index(k, x)]; }
    double& at(int k, int x) { return cells_[index(k, x)]; }

    // E(I_k) = sum_x x * Pr(I_k = x)
    double expectation(int k) const;

private:
    std::size_t index(int k, int x) const;

    int n_;
    std::vector<double> cells_;
};

// Row 1 is (p, q) at x = +-1; row k+1 is built from row k with acceptance
// probability 1 / 0 / p_v depending on where the state sits relative to the
// scheduled area's threshold. Full propagation only.
DistributionMatrix distribution_dp(const Society& society, const Schedule& schedule);

// (E(I_n) + n) / 2.
double evaluate_dp(const Society& society, const Schedule& schedule);

// Exhaustive expectation over preference vectors; valid on any topology.
// Areas with p in {0, 1} have a forced preference and are not enumerated, so
// the cap applies to the number of genuinely random areas.
struct BruteForceReport {
    double expected_adopters = 0.0;
    std::vector<double> accept_prob;  // Pr(X_v = 1) by area id
};

BruteForceReport bruteforce_scan(const Society& society, const Schedule& schedule,
                                 int free_cap = 20);
BruteForceReport bruteforce_scan_serial(const Society& society, const Schedule& schedule,
                                        int free_cap = 20);
double evaluate_bruteforce(const Society& society, const Schedule& schedule, int free_cap = 20);

// Tail masses Pr(I_k >= x) and Pr(I_k <= -x) for every k in 1..n, x in 1..k.
struct TailEntry {
    int k = 0;
    int x = 0;
    double upper = 0.0;  // Pr(I_k >= x)
    double lower = 0.0;  // Pr(I_k <= -x)
};

std::vector<TailEntry> tail_ratio_report(const DistributionMatrix& matrix);

// CSV with header "k,x,prob", probabilities printed with 12 significant digits.
std::string distribution_csv(const DistributionMatrix& matrix);

namespace detail {

// Acceptance probability of an area (p, c) deciding while the deployment
// number is k: threshold rule first, initial preference otherwise.
inline double acceptance_probability(double p, int c, long long k) {
    if (k >= c) return 1.0;
    if (k <= -c) return 0.0;
    return p;
}

// Allocation-light DP evaluator for hot loops that synthesize (p, c) streams
// directly instead of building Society objects. `order` may be empty, which
// means the identity schedule.
double evaluate_dp_raw(std::span<const double> ps, std::span<const int> cs,
                       std::span<const int> order);

}  // namespace detail

}  // namespace casched
