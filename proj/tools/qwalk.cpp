// qwalk: command-line driver for the walk, reflection, search and
// application experiments. Output is JSON (CSV for sweeps) and depends only
// on the arguments and the seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>

#include "qwalk/qwalk.hpp"

namespace {

using namespace qwalk;

enum Exit { kOk = 0, kUsage = 1, kInvariant = 2, kCapacity = 3 };

struct ChainOpts {
    std::string family = "complete";
    int n = 4;
    int r = 1;
    std::string file;
};

void add_chain_options(CLI::App* sub, ChainOpts& o) {
    sub->add_option("--chain", o.family, "complete | johnson | exchange | file")
        ->check(CLI::IsMember({"complete", "johnson", "exchange", "file"}));
    sub->add_option("--n", o.n, "Ground set size");
    sub->add_option("--r", o.r, "Subset or tuple size");
    sub->add_option("--file", o.file, "Chain document for --chain file");
}

std::string chain_name(const ChainOpts& o) {
    if (o.family == "complete") return "K" + std::to_string(o.n);
    if (o.family == "johnson") return "J(" + std::to_string(o.n) + "," + std::to_string(o.r) + ")";
    if (o.family == "exchange") return "X(" + std::to_string(o.n) + "," + std::to_string(o.r) + ")";
    return o.file;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

/// Builds the selected chain and hands it to f.
template <typename F>
auto with_chain(const ChainOpts& o, const Limits& limits, F&& f) {
    if (o.family == "complete") return f(build_complete_graph(o.n, limits));
    if (o.family == "johnson") return f(build_johnson(o.n, o.r, limits));
    if (o.family == "exchange") return f(build_exchange_walk(o.n, o.r, limits));
    if (o.file.empty()) throw InvalidArgument("--chain file needs --file");
    return f(chain_from_json(read_json_file(o.file)));
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw InvalidArgument("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double parse_size(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("not a number: " + s);
    }
    if (used != s.size() || !(v >= 1.0) || v != std::floor(v)) throw InvalidArgument("not a positive integer: " + s);
    return v;
}

/// Largest k <= wanted whose register fits the amplitude cap (at least 1).
int fit_banks(std::size_t states, int s, int wanted, const Limits& limits) {
    for (int k = wanted; k > 1; --k) {
        if (s * k < 40 && (std::size_t{1} << (s * k)) * states * states <= limits.max_register_amplitudes) return k;
    }
    return 1;
}

// ---------------------------------------------------------------- chain

int cmd_chain(const ChainOpts& co, const std::string& out_path, const Limits& limits) {
    Output out(out_path);
    with_chain(co, limits, [&](const auto& chain) {
        Json doc = chain_to_json(chain);
        const ChainAnalysis a = analyze(chain);
        doc["analysis"] = Json{{"pi", std::vector<double>(a.pi.data(), a.pi.data() + a.pi.size())},
                               {"delta", a.delta},
                               {"one_sided_gap", a.one_sided_gap},
                               {"reversible", a.reversible},
                               {"ergodic", a.ergodic}};
        out.stream() << to_json_text(doc) << '\n';
        return 0;
    });
    return kOk;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const ChainOpts& co, const std::string& out_path, const Limits& limits) {
    Output out(out_path);
    return with_chain(co, limits, [&](const auto& chain) {
        const ChainAnalysis a = analyze(chain);
        const SpectrumReport rep = walk_spectrum(chain, a, limits);
        Json doc{{"chain", chain_name(co)}, {"states", chain.size()}};
        doc.update(to_json(rep));
        std::vector<std::string> violations;
        if (rep.measured_phases) {
            if (!rep.direct_check_passed()) violations.push_back("eigenphase multiset");
            if (rep.reversible && rep.unit_eigenspace_dimension != 1) violations.push_back("unit eigenspace dimension");
            if (rep.reversible && rep.pi_fidelity < 1.0 - 1e-9) violations.push_back("pi fidelity");
        }
        if (rep.reversible && rep.gap_margin < -1e-12) violations.push_back("phase gap inequality");
        doc["violations"] = violations;
        out.stream() << to_json_text(doc) << '\n';
        return violations.empty() ? kOk : kInvariant;
    });
}

// ---------------------------------------------------------------- reflect

struct ReflectOpts {
    std::vector<int> s;
    std::vector<int> k{1};
    std::size_t random_vectors = 4;
    std::uint64_t seed = 1;
    std::string format = "csv";
};

int cmd_reflect(const ChainOpts& co, const ReflectOpts& ro, const std::string& out_path, const Limits& limits) {
    Output out(out_path);
    return with_chain(co, limits, [&](const auto& chain) {
        const ChainAnalysis a = analyze(chain);
        if (!a.reversible) throw InvalidArgument("reflection sweeps need a reversible chain");
        const auto dspec = discriminant_spectrum(discriminant(chain, a));
        const WalkOperator walk(chain, a);
        const EdgeState pi = pi_state(chain, a);
        std::vector<int> ss = ro.s;
        if (ss.empty()) ss.push_back(default_precision(dspec.phase_gap));

        bool ok = true;
        Json rows = Json::array();
        if (ro.format == "csv") out.stream() << "chain,s,k,calls,error\n";
        for (int s : ss) {
            for (int k : ro.k) {
                const ReflectionConfig cfg{s, k};
                const ReflectionReport rep =
                    reflection_error_suite(walk, pi, cfg, {ro.random_vectors, ro.seed, false}, limits);
                ok = ok && rep.fixed_point_error <= 1e-10 && rep.ancilla_restored &&
                     rep.controlled_walk_calls == controlled_walk_calls(cfg);
                if (ro.format == "csv") {
                    CsvRow row;
                    row << chain_name(co) << s << k << rep.controlled_walk_calls << rep.measured_error;
                    out.stream() << row.str() << '\n';
                } else {
                    Json j = to_json(rep);
                    j["chain"] = chain_name(co);
                    rows.push_back(std::move(j));
                }
            }
        }
        if (ro.format != "csv") out.stream() << to_json_text(Json{{"phase_gap", dspec.phase_gap}, {"reports", rows}}) << '\n';
        return ok ? kOk : kInvariant;
    });
}

// ---------------------------------------------------------------- search

struct SearchOpts {
    std::string algorithm = "quantum-exact";
    std::vector<int> mark;
    std::vector<int> contains;
    std::optional<double> epsilon;
    std::optional<int> iterations;
    std::optional<int> s;
    std::optional<int> k;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
};

template <typename Label>
std::function<bool(const Label&)> marked_predicate(const MarkovChain<Label>& chain, const SearchOpts& so) {
    std::vector<bool> mask(chain.size(), false);
    for (int m : so.mark) {
        if (m < 1 || static_cast<std::size_t>(m) > chain.size()) {
            throw InvalidArgument("--mark " + std::to_string(m) + " outside [1, " + std::to_string(chain.size()) + "]");
        }
        mask[static_cast<std::size_t>(m - 1)] = true;
    }
    if (!so.contains.empty()) {
        for (std::size_t i = 0; i < chain.size(); ++i) {
            const Label& l = chain.states()[i];
            bool all = true;
            for (int e : so.contains) {
                if constexpr (std::is_same_v<Label, std::vector<int>>) {
                    all = all && std::find(l.begin(), l.end(), e) != l.end();
                } else if constexpr (std::is_same_v<Label, Json>) {
                    all = all && l.is_array() && std::find(l.begin(), l.end(), Json(e)) != l.end();
                } else {
                    all = all && l == e;
                }
            }
            if (all) mask[i] = true;
        }
    }
    const MarkovChain<Label>* c = &chain;
    return [mask, c](const Label& l) { return mask[*c->index_of(l)]; };
}

int cmd_search(const ChainOpts& co, const SearchOpts& so, const std::string& out_path, const Limits& limits) {
    Output out(out_path);
    return with_chain(co, limits, [&](const auto& chain) {
        using Label = typename std::decay_t<decltype(chain)>::label_type;
        const ChainAnalysis a = analyze(chain);
        SearchProblem<Label> problem{chain, marked_predicate(chain, so), 1.0, {}, {}};
        const auto mask = problem.marked_mask();
        double mass = 0.0;
        for (std::size_t i = 0; i < mask.size(); ++i) mass += mask[i] ? a.pi(static_cast<Eigen::Index>(i)) : 0.0;
        problem.epsilon = so.epsilon.value_or(mass > 0.0 ? mass : 1.0 / static_cast<double>(chain.size()));

        Json doc{{"chain", chain_name(co)},
                 {"algorithm", so.algorithm},
                 {"seed", so.seed},
                 {"trials", so.trials},
                 {"epsilon", problem.epsilon},
                 {"marked_states", std::count(mask.begin(), mask.end(), true)},
                 {"delta", a.delta}};
        Json outcomes = Json::array();
        std::size_t successes = 0;
        double checks = 0.0;
        auto record = [&](std::size_t t, auto outcome) {
            successes += outcome.success ? 1 : 0;
            checks += static_cast<double>(outcome.counters.checks);
            Json j = to_json(outcome);
            j.erase("trace");
            j["trial"] = t;
            outcomes.push_back(std::move(j));
        };

        if (so.algorithm.rfind("classical-", 0) == 0) {
            for (std::size_t t = 0; t < so.trials; ++t) {
                const std::uint64_t seed = trial_seed(so.seed, t);
                if (so.algorithm == "classical-1") record(t, classical_search_1(problem, seed));
                else if (so.algorithm == "classical-2") record(t, classical_search_2(problem, a.delta, seed));
                else record(t, classical_search_3(problem, a.delta, seed));
            }
        } else {
            const WalkOperator walk(chain, a);
            QuantumSearchConfig cfg;
            cfg.iterations = so.iterations;
            if (so.algorithm == "quantum-pe") {
                const auto dspec = discriminant_spectrum(discriminant(chain, a));
                const int s = so.s.value_or(default_precision(dspec.phase_gap));
                const int k = so.k.value_or(fit_banks(chain.size(), s, default_banks(problem.epsilon), limits));
                cfg.reflection = ReflectionConfig{s, k};
                cfg.track_exact = true;
                doc["s"] = s;
                doc["k"] = k;
                doc["controlled_walk_calls_per_round"] = controlled_walk_calls(*cfg.reflection);
            }
            const QuantumRunReport run = run_quantum_search(problem, a, walk, cfg, limits);
            doc["iterations"] = run.iterations;
            doc["marked_mass"] = run.marked_mass;
            if (!run.deviation.empty()) doc["deviation"] = run.deviation;
            for (std::size_t t = 0; t < so.trials; ++t) record(t, sample_outcome(problem, run, trial_seed(so.seed, t)));
        }
        const double n = static_cast<double>(std::max<std::size_t>(so.trials, 1));
        doc["success_rate"] = static_cast<double>(successes) / n;
        doc["mean_checks"] = checks / n;
        doc["outcomes"] = std::move(outcomes);
        out.stream() << to_json_text(doc) << '\n';
        return kOk;
    });
}

// ---------------------------------------------------------------- apps

struct AppsOpts {
    std::string kind;
    std::vector<std::string> n{"1e6"};
    std::optional<int> r;
    int solutions = 1;
    bool simulate = false;
    std::string instance;
    std::optional<int> s;
    std::optional<int> k;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
};

/// Random table over [n]: distinct values with one planted collision, or
/// `solutions` ones among zeros for unordered search.
std::vector<long long> random_table(AppKind kind, int n, int solutions, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<long long> f(static_cast<std::size_t>(n));
    if (kind == AppKind::ElementDistinctness) {
        std::iota(f.begin(), f.end(), 1);
        std::shuffle(f.begin(), f.end(), rng);
        std::vector<std::size_t> idx(f.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        f[idx[1]] = f[idx[0]];
    } else {
        if (solutions < 0 || solutions > n) throw InvalidArgument("--solutions must lie in [0, n]");
        std::fill(f.begin(), f.begin() + solutions, 1);
        std::shuffle(f.begin(), f.end(), rng);
    }
    return f;
}

template <typename Label>
int simulate_app(const AppsOpts& ao, AppKind kind, std::shared_ptr<OracleInstance> f, SearchProblem<Label> problem,
                 const AppInstance& inst, Json doc, std::ostream& os, const Limits& limits) {
    const ChainAnalysis a = analyze(problem.chain);
    const WalkOperator walk(problem.chain, a);
    const auto dspec = discriminant_spectrum(discriminant(problem.chain, a));
    const int s = ao.s.value_or(default_precision(dspec.phase_gap));
    const int k = ao.k.value_or(fit_banks(problem.chain.size(), s, default_banks(problem.epsilon), limits));
    QuantumSearchConfig cfg;
    cfg.reflection = ReflectionConfig{s, k};

    f->reset_count();
    const QuantumRunReport run = run_quantum_search(problem, a, walk, cfg, limits);
    const std::size_t queries = f->query_count();
    const double predicted = run.counters.setup_units + run.counters.update_units + run.counters.check_units;

    std::size_t successes = 0;
    for (std::size_t t = 0; t < ao.trials; ++t) {
        successes += sample_outcome(problem, run, trial_seed(ao.seed, t)).success ? 1 : 0;
    }
    const Json truth = brute_force_oracle(inst, limits);
    const bool found_any = successes > 0;
    doc["s"] = s;
    doc["k"] = k;
    doc["epsilon"] = problem.epsilon;
    doc["iterations"] = run.iterations;
    doc["marked_mass"] = run.marked_mass.back();
    doc["trials"] = ao.trials;
    doc["success_rate"] = static_cast<double>(successes) / static_cast<double>(std::max<std::size_t>(ao.trials, 1));
    doc["queries"] = queries;
    doc["predicted_queries"] = predicted;
    doc["counters"] = to_json(run.counters);
    doc["queries_consistent"] = static_cast<double>(queries) == predicted;
    doc["brute_force"] = truth;
    doc["agrees_with_brute_force"] = found_any == truth["found"].get<bool>();
    os << to_json_text(doc) << '\n';
    (void)kind;
    return static_cast<double>(queries) == predicted ? kOk : kInvariant;
}

int cmd_apps(const AppsOpts& ao, const std::string& out_path, const Limits& limits) {
    const AppKind kind = parse_app_kind(ao.kind);
    Output out(out_path);
    if (!ao.simulate) {
        if (!ao.instance.empty()) {
            AppInstance inst = parse_instance(read_json_file(ao.instance));
            out.stream() << to_json_text(brute_force_oracle(inst, limits)) << '\n';
            return kOk;
        }
        out.stream() << (ao.r ? "kind,n,r,cost\n" : "kind,n,r_star,cost_star,exponent\n");
        for (const auto& text : ao.n) {
            const double n = parse_size(text);
            CsvRow row;
            row << std::string(to_string(kind)) << static_cast<long long>(n);
            if (ao.r) {
                row << *ao.r << cost_model(kind, n, *ao.r);
            } else {
                const OptimizeResult res = optimize_r(kind, n);
                row << static_cast<long long>(res.r_star) << res.cost_star << res.exponent;
            }
            out.stream() << row.str() << '\n';
        }
        return kOk;
    }

    if (kind != AppKind::ElementDistinctness && kind != AppKind::UnorderedSearch) {
        throw InvalidArgument("--simulate supports ed and unordered only");
    }
    AppInstance inst;
    if (!ao.instance.empty()) {
        inst = parse_instance(read_json_file(ao.instance));
        if (inst.kind != kind) throw InvalidArgument("instance kind differs from --kind");
    } else {
        if (ao.n.size() != 1) throw InvalidArgument("--simulate takes a single --n");
        inst.kind = kind;
        inst.n = static_cast<int>(parse_size(ao.n.front()));
        inst.table = random_table(kind, inst.n, ao.solutions, ao.seed);
    }
    auto f = std::make_shared<OracleInstance>(instance_vector(inst));
    Json doc{{"kind", std::string(to_string(kind))}, {"n", inst.n}, {"seed", ao.seed}, {"table", inst.table}};
    if (kind == AppKind::ElementDistinctness) {
        const int r = ao.r.value_or(std::max(1, std::min(inst.n / 2, static_cast<int>(std::lround(std::cbrt(
                                                                           static_cast<double>(inst.n) * inst.n))))));
        doc["r"] = r;
        return simulate_app(ao, kind, f, element_distinctness_problem(f, r, limits), inst, doc, out.stream(), limits);
    }
    return simulate_app(ao, kind, f, unordered_search_problem(f, limits), inst, doc, out.stream(), limits);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-walk search toolkit"};
    app.require_subcommand(1);
    Limits limits;
    std::string out_path;
    app.add_option("--out", out_path, "Write output to this file")->capture_default_str();
    app.add_option("--max-states", limits.max_states, "State-space cap")->capture_default_str();
    app.add_option("--max-amplitudes", limits.max_register_amplitudes, "Simulated register cap")->capture_default_str();

    ChainOpts chain_opts;
    auto* chain_cmd = app.add_subcommand("chain", "Build a chain and print it with its analysis");
    add_chain_options(chain_cmd, chain_opts);

    ChainOpts spec_chain;
    auto* spec_cmd = app.add_subcommand("spectrum", "Discriminant spectrum and direct eigenphase check");
    add_chain_options(spec_cmd, spec_chain);

    ChainOpts refl_chain;
    ReflectOpts refl_opts;
    auto* refl_cmd = app.add_subcommand("reflect", "Reflection error sweep over s and k");
    add_chain_options(refl_cmd, refl_chain);
    refl_cmd->add_option("--s", refl_opts.s, "Precision qubits per bank")->delimiter(',');
    refl_cmd->add_option("--k", refl_opts.k, "Number of banks")->delimiter(',');
    refl_cmd->add_option("--random", refl_opts.random_vectors, "Random test vectors");
    refl_cmd->add_option("--seed", refl_opts.seed, "Seed for random test vectors");
    refl_cmd->add_option("--format", refl_opts.format)->check(CLI::IsMember({"csv", "json"}));

    ChainOpts search_chain;
    SearchOpts search_opts;
    auto* search_cmd = app.add_subcommand("search", "Seeded search trials");
    add_chain_options(search_cmd, search_chain);
    search_cmd->add_option("--algorithm", search_opts.algorithm)
        ->check(CLI::IsMember({"classical-1", "classical-2", "classical-3", "quantum-exact", "quantum-pe"}));
    search_cmd->add_option("--mark", search_opts.mark, "Marked states by 1-based position")->delimiter(',');
    search_cmd->add_option("--contains", search_opts.contains, "Mark states containing all these elements")
        ->delimiter(',');
    search_cmd->add_option("--epsilon", search_opts.epsilon, "Lower bound on the marked mass");
    search_cmd->add_option("--iterations", search_opts.iterations, "Quantum rounds");
    search_cmd->add_option("--s", search_opts.s);
    search_cmd->add_option("--k", search_opts.k);
    search_cmd->add_option("--trials", search_opts.trials);
    search_cmd->add_option("--seed", search_opts.seed);

    AppsOpts apps_opts;
    auto* apps_cmd = app.add_subcommand("apps", "Cost-formula sweeps and simulated applications");
    apps_cmd->add_option("--kind", apps_opts.kind, "unordered | ed | mpv | assoc | triangle | gc")->required();
    apps_cmd->add_option("--n", apps_opts.n, "Problem size; accepts 1e6")->delimiter(',');
    apps_cmd->add_option("--r", apps_opts.r, "Fixed r (k solutions for unordered)");
    apps_cmd->add_option("--solutions", apps_opts.solutions, "Solutions planted for unordered --simulate");
    apps_cmd->add_flag("--simulate", apps_opts.simulate, "Run the quantum search on a random or given instance");
    apps_cmd->add_option("--instance", apps_opts.instance, "Instance file");
    apps_cmd->add_option("--s", apps_opts.s);
    apps_cmd->add_option("--k", apps_opts.k);
    apps_cmd->add_option("--trials", apps_opts.trials);
    apps_cmd->add_option("--seed", apps_opts.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*chain_cmd) return cmd_chain(chain_opts, out_path, limits);
        if (*spec_cmd) return cmd_spectrum(spec_chain, out_path, limits);
        if (*refl_cmd) return cmd_reflect(refl_chain, refl_opts, out_path, limits);
        if (*search_cmd) return cmd_search(search_chain, search_opts, out_path, limits);
        if (*apps_cmd) return cmd_apps(apps_opts, out_path, limits);
    } catch (const CapacityExceeded& e) {
        std::cerr << "capacity: " << e.what() << '\n';
        return kCapacity;
    } catch (const InvalidArgument& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return kUsage;
    } catch (const DegenerateChain& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return kUsage;
    } catch (const NotErgodic& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "invariant: " << e.what() << '\n';
        return kInvariant;
    }
    return kUsage;
}
