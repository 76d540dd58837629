#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "casched/model.hpp"

namespace casched {

// Finite-support distribution over threshold values.
struct ThresholdDistribution {
    std::vector<std::pair<int, double>> support;  // (c, weight)
};

void validate_distribution(const ThresholdDistribution& dist);

// Value and argmax tables of the adaptive dynamic program, indexed by
// (remaining per-type counts, deployment number k). Built top-down, so the
// tables hold exactly the states reachable from the initial one.
class AdaptivePolicy {
public:
    const std::vector<TypeProfile>& profiles() const { return profiles_; }
    int total_areas() const { return n_; }

    // Expected future adopters from a state; the state must be reachable.
    double value(std::span<const int> remaining, int k) const;

    // Type to schedule next (0-based), or -1 when nothing remains.
    int choice(std::span<const int> remaining, int k) const;

    double start_value() const;

    // One row per visited state: n_1,...,n_t,k,choice,value. choice is the
    // 1-based type label, 0 for terminal states.
    std::string policy_csv() const;

private:
    friend AdaptivePolicy optimal_adaptive(const std::vector<TypeProfile>&, int);

    std::size_t state_index(std::span<const int> remaining, int k) const;
    double solve(std::vector<int>& remaining, int k);

    std::vector<TypeProfile> profiles_;
    std::vector<int> initial_;
    int n_ = 0;
    std::vector<std::size_t> strides_;
    std::vector<double> value_;
    std::vector<std::int8_t> choice_;  // -2 = unvisited, -1 = terminal
};

// Memoized top-down solve with full policy extraction. Serial reference
// implementation; table size is capped, use optimal_adaptive_value for large
// populations.
AdaptivePolicy optimal_adaptive(const std::vector<TypeProfile>& profiles, int max_types = 4);

// Layered bottom-up evaluation of the same recurrence (OpenMP over the
// states of a layer). O(n^t) memory instead of the full table.
double optimal_adaptive_value(const std::vector<TypeProfile>& profiles, int max_types = 4);

// Un-memoized expectimax over full decision trees; oracle for the DP.
double adaptive_bruteforce(const std::vector<TypeProfile>& profiles, int max_areas = 9);

// Non-increasing initial acceptance probability, ties by ascending id.
Schedule sorted_strategy(const Society& society);

// Repeatedly schedules the not-yet-scheduled area with the highest initial
// acceptance probability, ties by ascending id.
Schedule greedy_strategy(const Society& society);

struct SequenceSearch {
    std::vector<int> sequence;  // 0-based type indices
    double value = 0.0;
};

// Max over all distinct type sequences, evaluated exactly; ties resolved to
// the lexicographically smallest sequence.
SequenceSearch exhaustive_nonadaptive(const std::vector<TypeProfile>& profiles,
                                      std::uint64_t max_sequences = 1000000);
SequenceSearch exhaustive_nonadaptive_serial(const std::vector<TypeProfile>& profiles,
                                             std::uint64_t max_sequences = 1000000);

// Same search restricted to sequences with at most `sigma` type switches.
// Two-type populations only.
SequenceSearch best_sigma_switch(const std::vector<TypeProfile>& profiles, int sigma,
                                 std::uint64_t max_sequences = 1000000);

// Expected adopters of the type sequence (counts must match the profiles).
double evaluate_type_sequence(const std::vector<TypeProfile>& profiles,
                              const std::vector<int>& sequence);

// Expected adopters under the schedule when every threshold is drawn i.i.d.
// from `dist`; exact enumeration over all |support|^n assignments.
double evaluate_random_thresholds(const std::vector<double>& ps,
                                  const ThresholdDistribution& dist, const Schedule& schedule,
                                  std::uint64_t max_assignments = 1000000);

}  // namespace casched
