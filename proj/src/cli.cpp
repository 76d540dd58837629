#include "casched/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "casched/cascade.hpp"
#include "casched/exact.hpp"
#include "casched/gadget.hpp"
#include "casched/model.hpp"
#include "casched/rng.hpp"
#include "casched/strategy.hpp"

namespace casched {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

std::string fixed12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}

std::string int_list(const std::vector<int>& xs, int offset) {
    std::string s = "(";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(xs[i] + offset);
    }
    return s + ")";
}

// Area ids are printed 0-based; type labels 1-based.
std::string order_str(const std::vector<int>& order) { return int_list(order, 0); }
std::string seq_str(const std::vector<int>& seq) { return int_list(seq, 1); }

// Type index of each area produced by expand_types, in id order.
std::vector<int> area_types(const std::vector<TypeProfile>& profiles) {
    std::vector<int> types;
    for (std::size_t i = 0; i < profiles.size(); ++i)
        types.insert(types.end(), profiles[i].count, static_cast<int>(i));
    return types;
}

// PASS/FAIL bookkeeping for reproduce targets and gadget verification.
struct Report {
    std::ostream& out;
    bool ok = true;

    void check(bool pass, const std::string& what) {
        out << (pass ? "PASS " : "FAIL ") << what << "\n";
        ok = ok && pass;
    }
    int exit_code() const { return ok ? 0 : 1; }
};

std::vector<int> random_permutation(int n, SplitMix64& rng) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next() % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

// ---------------------------------------------------------------- reproduce

Society example1_society() {
    return make_society({Area{0, 0.2, 1}, Area{1, 0.5, 2}, Area{2, 0.8, 3}});
}

Society example2_society(double p1, double p2) {
    return make_society({Area{0, p1, 1}, Area{1, p2, 2}, Area{2, 0.0, 2}});
}

Society example3_society(double p, bool with_extra_edge) {
    std::vector<Area> areas;
    for (int v = 0; v < 4; ++v) areas.push_back(Area{v, p, 1});
    std::vector<std::pair<int, int>> edges = {{0, 3}, {1, 3}, {2, 3}};
    if (with_extra_edge) edges.push_back({0, 1});
    return make_society(std::move(areas), std::move(edges));
}

int reproduce_example1(std::ostream& out) {
    const Society society = example1_society();
    const double v1 = evaluate_dp(society, Schedule{{0, 1, 2}});
    const double v2 = evaluate_dp(society, Schedule{{2, 0, 1}});
    out << "pi=(0,1,2) value=" << fixed12(v1) << "\n";
    out << "pi=(2,0,1) value=" << fixed12(v2) << "\n";
    Report rep{out};
    rep.check(std::abs(v1 - 1.5) <= 1e-12, "example1 pi=(0,1,2) expected=" + fixed12(1.5));
    rep.check(std::abs(v2 - 2.4) <= 1e-12, "example1 pi=(2,0,1) expected=" + fixed12(2.4));
    return rep.exit_code();
}

int reproduce_example2(std::ostream& out) {
    const double p1 = 0.4, p2 = 0.3;
    const Society society = example2_society(p1, p2);
    const double va = evaluate_dp(society, Schedule{{0, 1, 2}});
    const double vb = evaluate_dp(society, Schedule{{1, 0, 2}});
    const double expected_a = p1 + p2 + p1 * p2;
    const double expected_b = 3 * p2;
    out << "pi=(0,1,2) value=" << fixed12(va) << "\n";
    out << "pi=(1,0,2) value=" << fixed12(vb) << "\n";
    Report rep{out};
    rep.check(std::abs(va - expected_a) <= 1e-12, "example2 pi=(0,1,2) expected=" + fixed12(expected_a));
    rep.check(std::abs(vb - expected_b) <= 1e-12, "example2 pi=(1,0,2) expected=" + fixed12(expected_b));
    rep.check(vb > va, "example2 pi=(1,0,2) wins");
    return rep.exit_code();
}

int reproduce_example3(std::ostream& out) {
    Report rep{out};
    const Schedule schedule{{0, 1, 2, 3}};
    for (double p : {0.3, 0.6, 0.9}) {
        const double vg = evaluate_bruteforce(example3_society(p, false), schedule);
        const double vgp = evaluate_bruteforce(example3_society(p, true), schedule);
        const double expected_g = 3 * p + 3 * p * p * (1 - p) + p * p * p;
        const double expected_gp = 4 * p;
        out << "p=" << fixed12(p) << " G=" << fixed12(vg) << " Gprime=" << fixed12(vgp) << "\n";
        rep.check(std::abs(vg - expected_g) <= 1e-12,
                  "example3 p=" + fixed12(p) + " G expected=" + fixed12(expected_g));
        rep.check(std::abs(vgp - expected_gp) <= 1e-12,
                  "example3 p=" + fixed12(p) + " Gprime expected=" + fixed12(expected_gp));
        const bool g_wins = vg > vgp;
        rep.check(g_wins == (p > 0.5), "example3 p=" + fixed12(p) + " sign(G-Gprime)");
    }
    const double vg5 = evaluate_bruteforce(example3_society(0.5, false), schedule);
    const double vgp5 = evaluate_bruteforce(example3_society(0.5, true), schedule);
    rep.check(std::abs(vg5 - vgp5) <= 1e-12, "example3 crossover G=Gprime at p=0.5");
    return rep.exit_code();
}

int reproduce_greedy(std::ostream& out) {
    const std::vector<TypeProfile> profiles = {{0.49, 11, 7}, {0.3, 1, 3}};
    const Society society = expand_types(profiles);
    const Schedule greedy = greedy_strategy(society);
    const double greedy_value = evaluate_dp(society, greedy);
    const std::vector<int> types = area_types(profiles);
    std::vector<int> greedy_seq;
    for (int v : greedy.order) greedy_seq.push_back(types[v]);

    const SequenceSearch ex = exhaustive_nonadaptive(profiles);
    out << "greedy sequence=" << seq_str(greedy_seq) << " value=" << fixed12(greedy_value) << "\n";
    out << "exhaustive sequence=" << seq_str(ex.sequence) << " value=" << fixed12(ex.value) << "\n";

    Report rep{out};
    rep.check(ex.value > greedy_value, "greedy exhaustive beats greedy");
    const std::vector<int> recorded = {1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
    rep.check(ex.sequence == recorded, "greedy best sequence expected=(2,2,2,1,1,1,1,1,1,1)");
    return rep.exit_code();
}

int reproduce_switch(std::ostream& out) {
    const std::vector<TypeProfile> profiles = {{0.8, 1, 4}, {0.8, 2, 4}};
    const std::vector<int> alternating = {0, 1, 0, 1, 0, 1, 0, 1};
    const double alt_value = evaluate_type_sequence(profiles, alternating);
    const SequenceSearch s1 = best_sigma_switch(profiles, 1);
    out << "alternating sequence=" << seq_str(alternating) << " value=" << fixed12(alt_value) << "\n";
    out << "sigma1 sequence=" << seq_str(s1.sequence) << " value=" << fixed12(s1.value) << "\n";
    Report rep{out};
    rep.check(alt_value > s1.value + 1e-6,
              "switch alternating beats every 1-switch sequence, gap=" + fixed12(alt_value - s1.value));
    return rep.exit_code();
}

int reproduce_theorem1(std::ostream& out) {
    SplitMix64 rng(424242);
    const int instances = 40;
    bool bound_ok = true, tail_ok = true;
    for (int i = 0; i < instances; ++i) {
        const int n = 2 + static_cast<int>(rng.next() % 13);
        const double p = rng.next_double();
        std::vector<Area> areas;
        for (int v = 0; v < n; ++v)
            areas.push_back(Area{v, p, 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n))});
        const Society society = make_society(std::move(areas));
        const Schedule schedule{random_permutation(n, rng)};
        const double value = evaluate_dp(society, schedule);
        if (p >= 0.5)
            bound_ok = bound_ok && value >= n * p - 1e-9;
        if (p <= 0.5)
            bound_ok = bound_ok && value <= n * p + 1e-9;
        if (p < 0.5) {
            const double ratio = p / (1 - p);
            for (const TailEntry& e : tail_ratio_report(distribution_dp(society, schedule)))
                tail_ok = tail_ok && e.upper <= ratio * e.lower + 1e-9;
        }
    }
    out << "theorem1 instances=" << instances << "\n";
    Report rep{out};
    rep.check(bound_ok, "theorem1 np-bound");
    rep.check(tail_ok, "theorem1 tail-ratio");
    return rep.exit_code();
}

int reproduce_theorem3(std::ostream& out) {
    SplitMix64 rng(77);
    const int instances = 8;
    bool ok = true;
    for (int i = 0; i < instances; ++i) {
        const int n = 3 + i % 3;
        std::vector<double> ps(n);
        for (double& p : ps) p = rng.next_double();
        ThresholdDistribution dist;
        const int support = 2 + static_cast<int>(rng.next() % 2);
        double total = 0.0;
        std::vector<double> raw(support);
        for (double& w : raw) {
            w = 0.1 + rng.next_double();
            total += w;
        }
        for (int j = 0; j < support; ++j) dist.support.push_back({1 + 2 * j, raw[j] / total});

        std::vector<Area> areas;
        for (int v = 0; v < n; ++v) areas.push_back(Area{v, ps[v], 1});
        const Schedule sorted = sorted_strategy(make_society(std::move(areas)));
        const double sorted_value = evaluate_random_thresholds(ps, dist, sorted);

        std::vector<int> perm(n);
        for (int v = 0; v < n; ++v) perm[v] = v;
        do {
            const double value = evaluate_random_thresholds(ps, dist, Schedule{perm});
            ok = ok && value <= sorted_value + 1e-9;
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    out << "theorem3 instances=" << instances << "\n";
    Report rep{out};
    rep.check(ok, "theorem3 sorted order beats every permutation");
    return rep.exit_code();
}

int run_reproduce(const std::string& name, std::ostream& out) {
    if (name == "example1") return reproduce_example1(out);
    if (name == "example2") return reproduce_example2(out);
    if (name == "example3") return reproduce_example3(out);
    if (name == "greedy") return reproduce_greedy(out);
    if (name == "switch") return reproduce_switch(out);
    if (name == "theorem1") return reproduce_theorem1(out);
    if (name == "theorem3") return reproduce_theorem3(out);
    throw ValidationError("unknown reproduce target: " + name);
}

// ------------------------------------------------------------- subcommands

int run_simulate(const std::string& society_path, const std::string& schedule_path,
                 std::uint64_t seed, std::ostream& out) {
    const Society society = parse_society(read_file(society_path));
    const Schedule schedule = parse_schedule(read_file(schedule_path));
    const CascadeRun run = run_random(society, schedule, seed);
    for (std::size_t t = 0; t < schedule.order.size(); ++t) {
        const int v = schedule.order[t];
        out << t + 1 << " " << v << " " << static_cast<int>(run.decisions[v]) << " "
            << run.trajectory[t] << "\n";
    }
    out << "adopters=" << run.adopters << "\n";
    return 0;
}

int run_evaluate(const std::string& society_path, const std::string& schedule_path,
                 const std::string& method, std::int64_t trials, std::uint64_t seed, int cap,
                 std::ostream& out) {
    const Society society = parse_society(read_file(society_path));
    const Schedule schedule = parse_schedule(read_file(schedule_path));
    if (method == "dp") {
        const double value = evaluate_dp(society, schedule);
        out << "value=" << fixed12(value) << "\n";
    } else if (method == "bruteforce") {
        const double value = evaluate_bruteforce(society, schedule, cap);
        out << "value=" << fixed12(value) << "\n";
    } else {
        const MonteCarloResult r = monte_carlo(society, schedule, trials, seed);
        out << "value=" << fixed12(r.mean) << " stderr=" << fixed12(r.std_error) << "\n";
    }
    return 0;
}

int run_distribution(const std::string& society_path, const std::string& schedule_path,
                     const std::string& out_path) {
    const Society society = parse_society(read_file(society_path));
    const Schedule schedule = parse_schedule(read_file(schedule_path));
    write_file(out_path, distribution_csv(distribution_dp(society, schedule)));
    return 0;
}

int run_optimize_adaptive(const std::string& types_path, const std::string& policy_out,
                          std::ostream& out) {
    const std::vector<TypeProfile> profiles = parse_types(read_file(types_path));
    const double value = optimal_adaptive_value(profiles);
    if (!policy_out.empty()) write_file(policy_out, optimal_adaptive(profiles).policy_csv());
    out << "value=" << fixed12(value) << "\n";
    return 0;
}

int run_optimize_nonadaptive(const std::string& types_path, const std::string& method, int sigma,
                             std::uint64_t cap, std::ostream& out) {
    const std::vector<TypeProfile> profiles = parse_types(read_file(types_path));
    std::vector<int> sequence;
    double value = 0.0;
    if (method == "sorted" || method == "greedy") {
        const Society society = expand_types(profiles);
        const Schedule schedule =
            method == "sorted" ? sorted_strategy(society) : greedy_strategy(society);
        value = evaluate_dp(society, schedule);
        const std::vector<int> types = area_types(profiles);
        for (int v : schedule.order) sequence.push_back(types[v]);
    } else if (method == "exhaustive") {
        SequenceSearch res = exhaustive_nonadaptive(profiles, cap);
        sequence = std::move(res.sequence);
        value = res.value;
    } else {
        SequenceSearch res = best_sigma_switch(profiles, sigma, cap);
        sequence = std::move(res.sequence);
        value = res.value;
    }
    out << "sequence=" << seq_str(sequence) << " value=" << fixed12(value) << "\n";
    return 0;
}

int run_gadget(const std::string& dag_path, bool verify, const std::string& prefix,
               std::ostream& out) {
    const ReliabilityInstance inst = parse_dag(read_file(dag_path));
    const GadgetInstance gadget = build_gadget(inst);
    const std::string society_path = prefix + "_society.json";
    const std::string schedule_path = prefix + "_schedule.json";
    write_file(society_path, serialize_society(gadget.society));
    write_file(schedule_path, serialize_schedule(gadget.schedule));
    out << "wrote " << society_path << "\n";
    out << "wrote " << schedule_path << "\n";
    if (!verify) return 0;

    Report rep{out};
    const BruteForceReport scan = bruteforce_scan(gadget.society, gadget.schedule);
    for (int v = 0; v < inst.m; ++v) {
        if (v == inst.s) continue;
        const double computed = scan.accept_prob[gadget.vertex_map[v].v_prime];
        const double expected = reliability_bruteforce(inst, true, v);
        rep.check(std::abs(computed - expected) <= 1e-9,
                  "vertex=" + std::to_string(v) + " gadget=" + fixed12(computed) +
                      " reliability=" + fixed12(expected));
    }
    try {
        const LambdaReport lr = lambda_decomposition(gadget);
        out << "lambda=" << fixed12(lr.lambda) << " alpha=" << fixed12(lr.alpha) << "\n";
        rep.check(true, "lambda decomposition identity");
    } catch (const std::logic_error& e) {
        rep.check(false, std::string("lambda decomposition identity: ") + e.what());
    }
    return rep.exit_code();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"scheduling idea cascades with opposing influences"};
    app.require_subcommand(1);

    std::string society_path, schedule_path, types_path, dag_path, out_path, policy_out;
    std::string method = "dp", name, prefix = "gadget";
    std::uint64_t seed = 0;
    std::int64_t trials = 100000;
    std::uint64_t seq_cap = 1000000;
    int cap = 20;
    int sigma = 1;
    bool verify = false;

    CLI::App* simulate = app.add_subcommand("simulate", "run one random cascade and print the trace");
    simulate->add_option("--society", society_path, "society file")->required();
    simulate->add_option("--schedule", schedule_path, "schedule file")->required();
    simulate->add_option("--seed", seed, "random seed");

    CLI::App* evaluate = app.add_subcommand("evaluate", "expected adopters for a schedule");
    evaluate->add_option("--society", society_path, "society file")->required();
    evaluate->add_option("--schedule", schedule_path, "schedule file")->required();
    evaluate->add_option("--method", method, "dp|bruteforce|montecarlo")
        ->check(CLI::IsMember({"dp", "bruteforce", "montecarlo"}))
        ->required();
    evaluate->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    evaluate->add_option("--seed", seed, "random seed");
    evaluate->add_option("--cap", cap, "brute force cap on random areas");

    CLI::App* distribution = app.add_subcommand("distribution", "deployment number distribution as CSV");
    distribution->add_option("--society", society_path, "society file")->required();
    distribution->add_option("--schedule", schedule_path, "schedule file")->required();
    distribution->add_option("--out", out_path, "output CSV path")->required();

    CLI::App* optimize = app.add_subcommand("optimize", "strategy optimization");
    optimize->require_subcommand(1);
    CLI::App* adaptive = optimize->add_subcommand("adaptive", "optimal adaptive policy value");
    adaptive->add_option("--types", types_path, "types file")->required();
    adaptive->add_option("--policy-out", policy_out, "policy table CSV path");
    CLI::App* nonadaptive = optimize->add_subcommand("nonadaptive", "non-adaptive schedules");
    nonadaptive->add_option("--types", types_path, "types file")->required();
    nonadaptive->add_option("--method", method, "sorted|greedy|exhaustive|switch")
        ->check(CLI::IsMember({"sorted", "greedy", "exhaustive", "switch"}))
        ->required();
    nonadaptive->add_option("--sigma", sigma, "switch budget for --method switch")
        ->check(CLI::NonNegativeNumber);
    nonadaptive->add_option("--cap", seq_cap, "cap on enumerated sequences");

    CLI::App* gadget = app.add_subcommand("gadget", "reliability-to-cascade reduction");
    gadget->add_option("--dag", dag_path, "DAG file")->required();
    gadget->add_flag("--verify", verify, "check the equivalence by enumeration");
    gadget->add_option("--out-prefix", prefix, "output file prefix");

    CLI::App* reproduce = app.add_subcommand("reproduce", "built-in demonstration instances");
    reproduce
        ->add_option("name", name,
                     "example1|example2|example3|greedy|switch|theorem1|theorem3")
        ->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) return run_simulate(society_path, schedule_path, seed, out);
        if (evaluate->parsed())
            return run_evaluate(society_path, schedule_path, method, trials, seed, cap, out);
        if (distribution->parsed()) return run_distribution(society_path, schedule_path, out_path);
        if (adaptive->parsed()) return run_optimize_adaptive(types_path, policy_out, out);
        if (nonadaptive->parsed())
            return run_optimize_nonadaptive(types_path, method, sigma, seq_cap, out);
        if (gadget->parsed()) return run_gadget(dag_path, verify, prefix, out);
        if (reproduce->parsed()) return run_reproduce(name, out);
    } catch (const CapError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace casched
