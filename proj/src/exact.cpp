#include "casched/exact.hpp"

#include <algorithm>
#include <cstdio>

#include "casched/cascade.hpp"

namespace casched {

namespace {

using detail::acceptance_probability;

void require_complete(const Society& society, const char* what) {
    if (!society.complete)
        throw CapError(std::string(what) +
                       " requires full propagation (complete topology); "
                       "use brute force or Monte Carlo instead");
}

}  // namespace

DistributionMatrix::DistributionMatrix(int n) : n_(n) {
    if (n < 1) throw ValidationError("distribution matrix needs at least one area");
    cells_.assign(static_cast<std::size_t>(n) * (2 * n + 1), 0.0);
}

std::size_t DistributionMatrix::index(int k, int x) const {
    return static_cast<std::size_t>(k - 1) * (2 * n_ + 1) + static_cast<std::size_t>(x + n_);
}

double DistributionMatrix::expectation(int k) const {
    double e = 0.0;
    for (int x = -n_; x <= n_; ++x) e += x * at(k, x);
    return e;
}

DistributionMatrix distribution_dp(const Society& society, const Schedule& schedule) {
    require_complete(society, "distribution_dp");
    validate_schedule(society, schedule);
    const int n = society.size();
    DistributionMatrix m(n);

    const Area& first = society.areas[schedule.order[0]];
    m.at(1, 1) = first.p;
    m.at(1, -1) = first.q();

    for (int k = 2; k <= n; ++k) {
        const Area& v = society.areas[schedule.order[k - 1]];
        for (int x = -k; x <= k; ++x) {
            double up = 0.0, down = 0.0;
            if (x - 1 >= -(k - 1)) up = acceptance_probability(v.p, v.c, x - 1) * m.at(k - 1, x - 1);
            if (x + 1 <= k - 1) down = (1.0 - acceptance_probability(v.p, v.c, x + 1)) * m.at(k - 1, x + 1);
            m.at(k, x) = up + down;
        }
    }
    return m;
}

double evaluate_dp(const Society& society, const Schedule& schedule) {
    require_complete(society, "evaluate_dp");
    validate_schedule(society, schedule);
    const int n = society.size();
    std::vector<double> ps(n);
    std::vector<int> cs(n);
    for (int v = 0; v < n; ++v) {
        ps[v] = society.areas[v].p;
        cs[v] = society.areas[v].c;
    }
    return detail::evaluate_dp_raw(ps, cs, schedule.order);
}

namespace detail {

double evaluate_dp_raw(std::span<const double> ps, std::span<const int> cs,
                       std::span<const int> order) {
    const int n = static_cast<int>(ps.size());
    const int width = 2 * n + 1;
    std::vector<double> cur(width, 0.0), next(width, 0.0);

    const int first = order.empty() ? 0 : order[0];
    cur[1 + n] = ps[first];
    cur[-1 + n] = 1.0 - ps[first];

    for (int k = 2; k <= n; ++k) {
        const int v = order.empty() ? k - 1 : order[k - 1];
        const double p = ps[v];
        const int c = cs[v];
        for (int x = -k; x <= k; ++x) {
            double up = 0.0, down = 0.0;
            if (x - 1 >= -(k - 1)) up = acceptance_probability(p, c, x - 1) * cur[x - 1 + n];
            if (x + 1 <= k - 1) down = (1.0 - acceptance_probability(p, c, x + 1)) * cur[x + 1 + n];
            next[x + n] = up + down;
        }
        std::swap(cur, next);
    }

    double e = 0.0;
    for (int x = -n; x <= n; ++x) e += x * cur[x + n];
    return (e + n) / 2.0;
}

}  // namespace detail

namespace {

struct ScanSetup {
    std::vector<int> free_ids;  // areas with 0 < p < 1, in id order
    PreferenceVector base;      // fixed preferences for the others
};

ScanSetup make_setup(const Society& society, int free_cap) {
    ScanSetup setup;
    setup.base.assign(society.size(), Pref::Reject);
    for (int v = 0; v < society.size(); ++v) {
        const double p = society.areas[v].p;
        if (p == 1.0)
            setup.base[v] = Pref::Accept;
        else if (p > 0.0)
            setup.free_ids.push_back(v);
    }
    if (static_cast<int>(setup.free_ids.size()) > free_cap)
        throw CapError("brute force cap exceeded: " + std::to_string(setup.free_ids.size()) +
                       " random areas, cap " + std::to_string(free_cap));
    return setup;
}

}  // namespace

BruteForceReport bruteforce_scan_serial(const Society& society, const Schedule& schedule,
                                        int free_cap) {
    validate_schedule(society, schedule);
    const ScanSetup setup = make_setup(society, free_cap);
    const int n = society.size();
    const int f = static_cast<int>(setup.free_ids.size());
    const std::uint64_t total = std::uint64_t{1} << f;

    BruteForceReport report;
    report.accept_prob.assign(n, 0.0);
    PreferenceVector prefs = setup.base;
    std::vector<std::int8_t> dec(n);

    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double w = 1.0;
        for (int j = 0; j < f; ++j) {
            const int v = setup.free_ids[j];
            const bool accept = (mask >> j) & 1;
            prefs[v] = accept ? Pref::Accept : Pref::Reject;
            w *= accept ? society.areas[v].p : society.areas[v].q();
        }
        const int adopters = detail::run_core(society, schedule, prefs, dec.data(), nullptr);
        report.expected_adopters += w * adopters;
        for (int v = 0; v < n; ++v)
            if (dec[v] == 1) report.accept_prob[v] += w;
    }
    return report;
}

BruteForceReport bruteforce_scan(const Society& society, const Schedule& schedule, int free_cap) {
    validate_schedule(society, schedule);
    const ScanSetup setup = make_setup(society, free_cap);
    const int n = society.size();
    const int f = static_cast<int>(setup.free_ids.size());
    const std::uint64_t total = std::uint64_t{1} << f;

    // Fixed-size blocks summed in block order: the reduction order does not
    // depend on the thread count.
    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t nblocks = (total + kBlock - 1) / kBlock;
    std::vector<double> block_value(nblocks, 0.0);
    std::vector<double> block_accept(nblocks * static_cast<std::uint64_t>(n), 0.0);

#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
        PreferenceVector prefs = setup.base;
        std::vector<std::int8_t> dec(n);
        double value = 0.0;
        double* accept = &block_accept[static_cast<std::uint64_t>(b) * n];
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * kBlock;
        const std::uint64_t end = std::min(total, begin + kBlock);
        for (std::uint64_t mask = begin; mask < end; ++mask) {
            double w = 1.0;
            for (int j = 0; j < f; ++j) {
                const int v = setup.free_ids[j];
                const bool acc = (mask >> j) & 1;
                prefs[v] = acc ? Pref::Accept : Pref::Reject;
                w *= acc ? society.areas[v].p : society.areas[v].q();
            }
            const int adopters = detail::run_core(society, schedule, prefs, dec.data(), nullptr);
            value += w * adopters;
            for (int v = 0; v < n; ++v)
                if (dec[v] == 1) accept[v] += w;
        }
        block_value[b] = value;
    }

    BruteForceReport report;
    report.accept_prob.assign(n, 0.0);
    for (std::uint64_t b = 0; b < nblocks; ++b) {
        report.expected_adopters += block_value[b];
        for (int v = 0; v < n; ++v) report.accept_prob[v] += block_accept[b * n + v];
    }
    return report;
}

double evaluate_bruteforce(const Society& society, const Schedule& schedule, int free_cap) {
    return bruteforce_scan(society, schedule, free_cap).expected_adopters;
}

std::vector<TailEntry> tail_ratio_report(const DistributionMatrix& matrix) {
    const int n = matrix.areas();
    std::vector<TailEntry> entries;
    entries.reserve(static_cast<std::size_t>(n) * (n + 1) / 2);
    std::vector<double> upper(n + 1), lower(n + 1);
    for (int k = 1; k <= n; ++k) {
        double run_up = 0.0, run_low = 0.0;
        for (int x = n; x >= 1; --x) {
            run_up += matrix.at(k, x);
            run_low += matrix.at(k, -x);
            upper[x] = run_up;
            lower[x] = run_low;
        }
        for (int x = 1; x <= k; ++x) entries.push_back({k, x, upper[x], lower[x]});
    }
    return entries;
}

std::string distribution_csv(const DistributionMatrix& matrix) {
    const int n = matrix.areas();
    std::string csv = "k,x,prob\n";
    char line[64];
    for (int k = 1; k <= n; ++k)
        for (int x = -n; x <= n; ++x) {
            std::snprintf(line, sizeof(line), "%d,%d,%.12g\n", k, x, matrix.at(k, x));
            csv += line;
        }
    return csv;
}

}  // namespace casched
