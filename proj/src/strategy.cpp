#include "casched/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "casched/exact.hpp"

namespace casched {

namespace {

using detail::acceptance_probability;

constexpr std::int8_t kUnvisited = -2;
constexpr std::size_t kPolicyStateCap = 20'000'000;
constexpr std::size_t kLayerCellCap = 20'000'000;

struct AdaptiveSetup {
    int types = 0;
    int total = 0;
    std::vector<int> counts;
};

AdaptiveSetup adaptive_setup(const std::vector<TypeProfile>& profiles, int max_types) {
    validate_profiles(profiles);
    AdaptiveSetup s;
    s.types = static_cast<int>(profiles.size());
    if (s.types > max_types)
        throw CapError("adaptive optimizer supports at most " + std::to_string(max_types) +
                       " types, got " + std::to_string(s.types));
    for (const TypeProfile& t : profiles) {
        s.counts.push_back(t.count);
        s.total += t.count;
    }
    if (s.total < 1) throw ValidationError("empty population: total type count is zero");
    return s;
}

}  // namespace

void validate_distribution(const ThresholdDistribution& dist) {
    if (dist.support.empty()) throw ValidationError("empty threshold distribution");
    double sum = 0.0;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        const auto& [c, w] = dist.support[i];
        const std::string at = "support[" + std::to_string(i) + "]";
        if (c < 1) throw ValidationError("threshold out of range at " + at);
        if (!(w >= 0.0)) throw ValidationError("negative weight at " + at);
        for (std::size_t j = 0; j < i; ++j)
            if (dist.support[j].first == c) throw ValidationError("duplicate threshold at " + at);
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw ValidationError("threshold weights sum to " + std::to_string(sum) + ", expected 1");
}

std::size_t AdaptivePolicy::state_index(std::span<const int> remaining, int k) const {
    std::size_t counts_index = 0;
    for (std::size_t i = 0; i < strides_.size(); ++i)
        counts_index += static_cast<std::size_t>(remaining[i]) * strides_[i];
    return counts_index * (2 * n_ + 1) + static_cast<std::size_t>(k + n_);
}

double AdaptivePolicy::solve(std::vector<int>& remaining, int k) {
    const std::size_t idx = state_index(remaining, k);
    if (choice_[idx] != kUnvisited) return value_[idx];

    int best_arg = -1;
    double best = 0.0;
    for (int i = 0; i < static_cast<int>(profiles_.size()); ++i) {
        if (remaining[i] == 0) continue;
        const TypeProfile& tp = profiles_[i];
        const double a = acceptance_probability(tp.p, tp.c, k);
        remaining[i] -= 1;
        double v = 0.0;
        if (a > 0.0) v += a * (1.0 + solve(remaining, k + 1));
        if (a < 1.0) v += (1.0 - a) * solve(remaining, k - 1);
        remaining[i] += 1;
        if (best_arg < 0 || v > best) {
            best = v;
            best_arg = i;
        }
    }
    value_[idx] = best_arg < 0 ? 0.0 : best;
    choice_[idx] = static_cast<std::int8_t>(best_arg);
    return value_[idx];
}

double AdaptivePolicy::value(std::span<const int> remaining, int k) const {
    if (remaining.size() != profiles_.size()) throw ValidationError("wrong number of type counts");
    if (k < -n_ || k > n_) throw ValidationError("deployment number out of range");
    const std::size_t idx = state_index(remaining, k);
    if (choice_[idx] == kUnvisited) throw ValidationError("state not reachable from the start state");
    return value_[idx];
}

int AdaptivePolicy::choice(std::span<const int> remaining, int k) const {
    if (remaining.size() != profiles_.size()) throw ValidationError("wrong number of type counts");
    if (k < -n_ || k > n_) throw ValidationError("deployment number out of range");
    const std::size_t idx = state_index(remaining, k);
    if (choice_[idx] == kUnvisited) throw ValidationError("state not reachable from the start state");
    return choice_[idx];
}

double AdaptivePolicy::start_value() const { return value(initial_, 0); }

std::string AdaptivePolicy::policy_csv() const {
    const int t = static_cast<int>(profiles_.size());
    std::string csv;
    for (int i = 1; i <= t; ++i) csv += "n_" + std::to_string(i) + ",";
    csv += "k,choice,value\n";

    std::vector<int> counts(t, 0);
    const int width = 2 * n_ + 1;
    char buf[64];
    // counts_index ascending, then k ascending: a stable, documented order.
    for (std::size_t ci = 0; ci * width < value_.size(); ++ci) {
        std::size_t rest = ci;
        for (int i = 0; i < t; ++i) {
            counts[i] = static_cast<int>(rest / strides_[i]);
            rest %= strides_[i];
        }
        for (int slot = 0; slot < width; ++slot) {
            const std::size_t idx = ci * width + slot;
            if (choice_[idx] == kUnvisited) continue;
            for (int i = 0; i < t; ++i) csv += std::to_string(counts[i]) + ",";
            csv += std::to_string(slot - n_);
            csv += ",";
            csv += std::to_string(choice_[idx] < 0 ? 0 : choice_[idx] + 1);
            std::snprintf(buf, sizeof(buf), ",%.12g\n", value_[idx]);
            csv += buf;
        }
    }
    return csv;
}

AdaptivePolicy optimal_adaptive(const std::vector<TypeProfile>& profiles, int max_types) {
    const AdaptiveSetup setup = adaptive_setup(profiles, max_types);

    AdaptivePolicy policy;
    policy.profiles_ = profiles;
    policy.initial_ = setup.counts;
    policy.n_ = setup.total;
    policy.strides_.assign(profiles.size(), 1);
    std::size_t count_space = 1;
    for (int i = setup.types - 1; i >= 0; --i) {
        policy.strides_[i] = count_space;
        count_space *= static_cast<std::size_t>(setup.counts[i]) + 1;
    }
    const std::size_t states = count_space * (2 * static_cast<std::size_t>(setup.total) + 1);
    if (states > kPolicyStateCap)
        throw CapError("adaptive policy table too large (" + std::to_string(states) +
                       " states); use optimal_adaptive_value");
    policy.value_.assign(states, 0.0);
    policy.choice_.assign(states, kUnvisited);

    std::vector<int> remaining = setup.counts;
    policy.solve(remaining, 0);
    return policy;
}

double optimal_adaptive_value(const std::vector<TypeProfile>& profiles, int max_types) {
    const AdaptiveSetup setup = adaptive_setup(profiles, max_types);
    const int t = setup.types;
    const int n = setup.total;
    const int width = 2 * n + 1;

    // Layers are indexed by the counts of the first t-1 types; the last
    // type's count is implied by the layer's total.
    std::vector<std::size_t> pstride(std::max(t - 1, 0), 1);
    std::size_t prefix_space = 1;
    for (int i = t - 2; i >= 0; --i) {
        pstride[i] = prefix_space;
        prefix_space *= static_cast<std::size_t>(setup.counts[i]) + 1;
    }
    const std::size_t cells = prefix_space * static_cast<std::size_t>(width);
    if (cells > kLayerCellCap)
        throw CapError("adaptive layer too large (" + std::to_string(cells) + " cells)");

    std::vector<double> prev(cells, 0.0), cur(cells, 0.0);
    std::vector<double> ps(t);
    std::vector<int> cs(t);
    for (int i = 0; i < t; ++i) {
        ps[i] = profiles[i].p;
        cs[i] = profiles[i].c;
    }

    for (int m = 1; m <= n; ++m) {
        const std::int64_t total_cells = static_cast<std::int64_t>(cells);
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < total_cells; ++j) {
            const std::size_t pc = static_cast<std::size_t>(j) / width;
            const int k = static_cast<int>(static_cast<std::size_t>(j) % width) - n;
            if (k < -(n - m) || k > n - m) continue;

            int sum_prefix = 0;
            std::size_t rest = pc;
            int counts[4] = {0, 0, 0, 0};
            for (int i = 0; i < t - 1; ++i) {
                counts[i] = static_cast<int>(rest / pstride[i]);
                rest %= pstride[i];
                sum_prefix += counts[i];
            }
            const int last = m - sum_prefix;
            if (last < 0 || last > setup.counts[t - 1]) continue;
            counts[t - 1] = last;

            double best = 0.0;
            bool any = false;
            for (int i = 0; i < t; ++i) {
                if (counts[i] == 0) continue;
                const double a = acceptance_probability(ps[i], cs[i], k);
                const std::size_t child = i < t - 1 ? pc - pstride[i] : pc;
                const double up = prev[child * width + (k + 1 + n)];
                const double down = prev[child * width + (k - 1 + n)];
                const double v = a * (1.0 + up) + (1.0 - a) * down;
                if (!any || v > best) {
                    best = v;
                    any = true;
                }
            }
            cur[static_cast<std::size_t>(j)] = best;
        }
        std::swap(prev, cur);
    }

    std::size_t pc0 = 0;
    for (int i = 0; i < t - 1; ++i) pc0 += static_cast<std::size_t>(setup.counts[i]) * pstride[i];
    return prev[pc0 * width + n];
}

double adaptive_bruteforce(const std::vector<TypeProfile>& profiles, int max_areas) {
    validate_profiles(profiles);
    std::vector<int> counts;
    int total = 0;
    for (const TypeProfile& t : profiles) {
        counts.push_back(t.count);
        total += t.count;
    }
    if (total < 1) throw ValidationError("empty population: total type count is zero");
    if (total > max_areas)
        throw CapError("adaptive brute force cap exceeded: " + std::to_string(total) + " areas, cap " +
                       std::to_string(max_areas));

    // Plain expectimax over the full decision tree, no memoization.
    struct Rec {
        const std::vector<TypeProfile>& profiles;
        std::vector<int>& counts;
        double go(int k) {
            int live = 0;
            double best = 0.0;
            for (int i = 0; i < static_cast<int>(profiles.size()); ++i) {
                if (counts[i] == 0) continue;
                const double a = acceptance_probability(profiles[i].p, profiles[i].c, k);
                counts[i] -= 1;
                double v = 0.0;
                if (a > 0.0) v += a * (1.0 + go(k + 1));
                if (a < 1.0) v += (1.0 - a) * go(k - 1);
                counts[i] += 1;
                if (live == 0 || v > best) best = v;
                ++live;
            }
            return live == 0 ? 0.0 : best;
        }
    } rec{profiles, counts};
    return rec.go(0);
}

Schedule sorted_strategy(const Society& society) {
    Schedule s = identity_schedule(society.size());
    std::sort(s.order.begin(), s.order.end(), [&](int a, int b) {
        if (society.areas[a].p != society.areas[b].p) return society.areas[a].p > society.areas[b].p;
        return a < b;
    });
    return s;
}

Schedule greedy_strategy(const Society& society) {
    const int n = society.size();
    Schedule s;
    std::vector<bool> used(n, false);
    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            if (pick < 0 || society.areas[v].p > society.areas[pick].p) pick = v;
        }
        used[pick] = true;
        s.order.push_back(pick);
    }
    return s;
}

namespace {

struct SequenceList {
    std::vector<std::int8_t> flat;  // count sequences of `length` entries each
    int length = 0;
    std::size_t count = 0;
};

void gen_sequences(std::vector<int>& counts, int last, long long switches_left,
                   std::vector<std::int8_t>& prefix, SequenceList& out, std::uint64_t cap) {
    if (prefix.size() == static_cast<std::size_t>(out.length)) {
        if (out.count == cap)
            throw CapError("type sequence enumeration exceeds cap " + std::to_string(cap));
        out.flat.insert(out.flat.end(), prefix.begin(), prefix.end());
        ++out.count;
        return;
    }
    for (int i = 0; i < static_cast<int>(counts.size()); ++i) {
        if (counts[i] == 0) continue;
        const int cost = (last >= 0 && i != last) ? 1 : 0;
        if (cost > switches_left) continue;
        counts[i] -= 1;
        prefix.push_back(static_cast<std::int8_t>(i));
        gen_sequences(counts, i, switches_left - cost, prefix, out, cap);
        prefix.pop_back();
        counts[i] += 1;
    }
}

SequenceSearch search_sequences(const std::vector<TypeProfile>& profiles, long long max_switches,
                                std::uint64_t cap, bool parallel) {
    validate_profiles(profiles);
    std::vector<int> counts;
    int total = 0;
    for (const TypeProfile& t : profiles) {
        counts.push_back(t.count);
        total += t.count;
    }
    if (total < 1) throw ValidationError("empty population: total type count is zero");

    SequenceList list;
    list.length = total;
    std::vector<std::int8_t> prefix;
    prefix.reserve(total);
    gen_sequences(counts, -1, max_switches, prefix, list, cap);
    if (list.count == 0)
        throw CapError("no type sequence with at most " + std::to_string(max_switches) +
                       " switches exists for these counts");

    const std::int64_t m = static_cast<std::int64_t>(list.count);
    std::vector<double> values(list.count);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t s = 0; s < m; ++s) {
        std::vector<double> ps(total);
        std::vector<int> cs(total);
        const std::int8_t* seq = &list.flat[static_cast<std::size_t>(s) * total];
        for (int j = 0; j < total; ++j) {
            ps[j] = profiles[seq[j]].p;
            cs[j] = profiles[seq[j]].c;
        }
        values[static_cast<std::size_t>(s)] = detail::evaluate_dp_raw(ps, cs, {});
    }

    // Sequences were generated in lexicographic order; strict > keeps the
    // lexicographically smallest sequence among exact ties.
    std::size_t best = 0;
    for (std::size_t s = 1; s < list.count; ++s)
        if (values[s] > values[best]) best = s;

    SequenceSearch result;
    result.value = values[best];
    result.sequence.assign(list.flat.begin() + static_cast<std::ptrdiff_t>(best) * total,
                           list.flat.begin() + static_cast<std::ptrdiff_t>(best + 1) * total);
    return result;
}

}  // namespace

SequenceSearch exhaustive_nonadaptive(const std::vector<TypeProfile>& profiles,
                                      std::uint64_t max_sequences) {
    return search_sequences(profiles, std::numeric_limits<long long>::max(), max_sequences, true);
}

SequenceSearch exhaustive_nonadaptive_serial(const std::vector<TypeProfile>& profiles,
                                             std::uint64_t max_sequences) {
    return search_sequences(profiles, std::numeric_limits<long long>::max(), max_sequences, false);
}

SequenceSearch best_sigma_switch(const std::vector<TypeProfile>& profiles, int sigma,
                                 std::uint64_t max_sequences) {
    if (profiles.size() > 2)
        throw ValidationError("sigma-switch search is defined for two-type populations");
    if (sigma < 0) throw ValidationError("sigma must be nonnegative");
    return search_sequences(profiles, sigma, max_sequences, true);
}

double evaluate_type_sequence(const std::vector<TypeProfile>& profiles,
                              const std::vector<int>& sequence) {
    validate_profiles(profiles);
    std::vector<int> counts(profiles.size(), 0);
    for (int tix : sequence) {
        if (tix < 0 || tix >= static_cast<int>(profiles.size()))
            throw ValidationError("type index out of range in sequence");
        counts[tix] += 1;
    }
    for (std::size_t i = 0; i < profiles.size(); ++i)
        if (counts[i] != profiles[i].count)
            throw ValidationError("sequence does not match the type counts");

    const int total = static_cast<int>(sequence.size());
    if (total < 1) throw ValidationError("empty sequence");
    std::vector<double> ps(total);
    std::vector<int> cs(total);
    for (int j = 0; j < total; ++j) {
        ps[j] = profiles[sequence[j]].p;
        cs[j] = profiles[sequence[j]].c;
    }
    return detail::evaluate_dp_raw(ps, cs, {});
}

double evaluate_random_thresholds(const std::vector<double>& ps, const ThresholdDistribution& dist,
                                  const Schedule& schedule, std::uint64_t max_assignments) {
    validate_distribution(dist);
    const int n = static_cast<int>(ps.size());
    if (n < 1) throw ValidationError("empty probability list");
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (!(ps[i] >= 0.0 && ps[i] <= 1.0))
            throw ValidationError("p out of range at ps[" + std::to_string(i) + "]");
    if (static_cast<int>(schedule.order.size()) != n)
        throw ValidationError("schedule length does not match probability list");
    std::vector<bool> seen(n, false);
    for (int v : schedule.order) {
        if (v < 0 || v >= n || seen[v]) throw ValidationError("schedule is not a permutation");
        seen[v] = true;
    }

    const std::uint64_t radix = dist.support.size();
    std::uint64_t assignments = 1;
    for (int i = 0; i < n; ++i) {
        if (assignments > max_assignments / radix + 1)
            throw CapError("threshold assignment enumeration exceeds cap " +
                           std::to_string(max_assignments));
        assignments *= radix;
    }
    if (assignments > max_assignments)
        throw CapError("threshold assignment enumeration exceeds cap " +
                       std::to_string(max_assignments));

    constexpr std::uint64_t kBlock = 1024;
    const std::uint64_t nblocks = (assignments + kBlock - 1) / kBlock;
    std::vector<double> block_sum(nblocks, 0.0);

#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        std::vector<int> cs(n);
        double sum = 0.0;
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlock;
        const std::uint64_t end = std::min(assignments, begin + kBlock);
        for (std::uint64_t a = begin; a < end; ++a) {
            std::uint64_t rest = a;
            double w = 1.0;
            for (int i = 0; i < n; ++i) {
                const auto& [c, wt] = dist.support[rest % radix];
                rest /= radix;
                cs[i] = c;
                w *= wt;
            }
            if (w == 0.0) continue;
            sum += w * detail::evaluate_dp_raw(ps, cs, schedule.order);
        }
        block_sum[static_cast<std::size_t>(b)] = sum;
    }

    double total = 0.0;
    for (double s : block_sum) total += s;
    return total;
}

}  // namespace casched
