#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tollbooth/decomposition.hpp"
#include "tollbooth/engine.hpp"
#include "tollbooth/evaluator.hpp"
#include "tollbooth/generator.hpp"
#include "tollbooth/io.hpp"
#include "tollbooth/oracle.hpp"

using namespace toll;

namespace {

constexpr int kOk = 0, kDomainFailure = 1, kUsage = 2;

// Thrown for I/O and parse problems; main maps it to the usage exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string load_text(const std::string& path) {
    try {
        return read_file(path);
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

CactusInstance instance_from(const std::string& path) {
    const std::string text = load_text(path);
    try {
        return load_instance(text);
    } catch (const ParseError& e) {
        throw UsageError(std::string("parse error: ") + e.what());
    }
}

int cmd_check(const std::string& path) {
    RawInstance raw;
    try {
        raw = parse_instance(load_text(path));
    } catch (const ParseError& e) {
        throw UsageError(std::string("parse error: ") + e.what());
    }
    auto result = validate_cactus(raw.vertices, raw.edges);
    if (auto* err = std::get_if<CactusError>(&result)) {
        std::cout << "invalid: " << kind_name(err->kind);
        if (err->edge >= 0) std::cout << " (edge " << err->edge << ")";
        std::cout << ": " << err->message << "\n";
        return kDomainFailure;
    }
    for (std::size_t i = 0; i < raw.buyers.size(); ++i) {
        const Buyer& b = raw.buyers[i];
        if (b.s < 0 || b.t < 0 || b.s >= raw.vertices || b.t >= raw.vertices) {
            std::cout << "invalid: buyer " << i << " has an endpoint out of range\n";
            return kDomainFailure;
        }
    }
    std::cout << "ok: " << raw.vertices << " vertices, " << raw.edges.size() << " edges, " << raw.buyers.size()
              << " buyers\n";
    return kOk;
}

EngineOptions engine_options() {
    EngineOptions o;
    o.threads = threads_from_env();
    return o;
}

int cmd_solve(const std::string& path, const std::string& out) {
    const CactusInstance inst = instance_from(path);
    const Solution sol = solve(inst, engine_options());
    emit(out, write_solution(inst, sol));
    (out.empty() ? std::cerr : std::cout) << "revenue " << to_string(sol.revenue) << " level " << sol.winning_level
                                          << " " << subproblem_name(sol.subproblem) << "\n";
    return kOk;
}

int cmd_gen(const GeneratorParams& params, const std::string& out) {
    if (params.edges < 1 || params.buyers < 0 || params.max_budget < 1 || params.cycle_prob < 0 ||
        params.cycle_prob > 1)
        throw UsageError("invalid generator parameters");
    emit(out, write_instance(generate_instance(params)));
    return kOk;
}

struct Comparison {
    Rational alg, oracle;
    int levels = 1;
    bool holds = true;
};

// ALG * (2048 + 4) * L >= oracle.
Comparison compare_instance(const CactusInstance& inst, const std::string& grid, std::size_t max_work) {
    Comparison c;
    const Solution sol = solve(inst, engine_options());
    c.alg = sol.revenue;
    c.levels = sol.levels;
    const GridSpec spec = grid == "budgets" ? budget_grid(inst) : default_grid(inst);
    c.oracle = oracle_grid(inst, spec, {}, OracleLimits{max_work});
    c.holds = c.alg * 2052 * c.levels >= c.oracle;
    return c;
}

std::string ratio_text(const Comparison& c) {
    if (c.alg == 0) return c.oracle == 0 ? "-" : "inf";
    return to_string(Rational(c.oracle / c.alg));
}

int cmd_compare(const std::string& path, const std::string& grid, std::size_t max_work) {
    const CactusInstance inst = instance_from(path);
    const auto start = std::chrono::steady_clock::now();
    Comparison c;
    try {
        c = compare_instance(inst, grid, max_work);
    } catch (const TooLarge& e) {
        std::cerr << "TooLarge: " << e.what() << "\n";
        return kDomainFailure;
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    std::cout << "instance,alg,oracle,ratio,L,runtime_ms\n"
              << path << "," << to_string(c.alg) << "," << to_string(c.oracle) << "," << ratio_text(c) << ","
              << c.levels << "," << ms.count() << "\n";
    if (!c.holds) {
        std::cerr << "guarantee violated: alg * 2052 * L < oracle\n";
        return kDomainFailure;
    }
    return kOk;
}

// Both suites are fixed seeded corpora; output carries no timings so reruns are byte-identical.
int cmd_bench(const std::string& suite, const std::string& out) {
    std::ostringstream csv;
    bool healthy = true;
    if (suite == "small") {
        csv << "seed,edges,buyers,L,alg,oracle,ratio,holds\n";
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            GeneratorParams p{static_cast<int>(4 + seed % 7), 5, 8, 0.5, seed};
            const CactusInstance inst = generate_instance(p);
            Comparison c = compare_instance(inst, "default", OracleLimits{}.max_work);
            healthy = healthy && c.holds;
            csv << seed << "," << inst.graph.edge_count() << "," << inst.buyers.size() << "," << c.levels << ","
                << to_string(c.alg) << "," << to_string(c.oracle) << "," << ratio_text(c) << ","
                << (c.holds ? 1 : 0) << "\n";
        }
    } else if (suite == "decomp") {
        csv << "seed,edges,k,L,max_fragment_borders,max_children,violations\n";
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            GeneratorParams p{static_cast<int>(4 * seed), 0, 1, 0.5, seed};
            const CactusInstance inst = generate_instance(p);
            const BCTree t = build_bc_tree(inst.graph);
            const Decomposition d = build_decomposition(inst.graph, t);
            const DecompositionCheck check = check_decomposition(inst.graph, t, d);
            healthy = healthy && check.ok();
            csv << seed << "," << inst.graph.edge_count() << "," << d.k << "," << d.L() << ","
                << check.max_fragment_borders << "," << check.max_children << "," << check.violations.size()
                << "\n";
        }
    } else {
        throw UsageError("unknown suite " + suite);
    }
    emit(out, csv.str());
    return healthy ? kOk : kDomainFailure;
}

int cmd_inspect(const std::string& path, const std::string& out) {
    emit(out, inspect_json(instance_from(path)));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Envy-free tollbooth pricing on cactus graphs"};
    app.require_subcommand(1);

    std::string path, out, grid = "default", suite = "small";
    std::size_t max_space = OracleLimits{}.max_work;
    bool seedless = false;
    GeneratorParams gen;

    auto* check = app.add_subcommand("check", "Validate an instance file");
    check->add_option("path", path, "Instance JSON")->required();

    auto* solve_cmd = app.add_subcommand("solve", "Solve an instance and write the solution JSON");
    solve_cmd->add_option("path", path, "Instance JSON")->required();
    solve_cmd->add_option("--out", out, "Solution file (stdout when omitted)");
    solve_cmd->add_flag("--seedless", seedless, "Accepted for compatibility; the solver uses no randomness");

    auto* gen_cmd = app.add_subcommand("gen", "Generate a random instance");
    gen_cmd->add_option("--edges", gen.edges, "Number of edges")->default_val(10);
    gen_cmd->add_option("--buyers", gen.buyers, "Number of buyers")->default_val(5);
    gen_cmd->add_option("--max-budget", gen.max_budget, "Budgets are uniform in [1, max]")->default_val(8);
    gen_cmd->add_option("--cycle-prob", gen.cycle_prob, "Probability of attaching a cycle")->default_val(0.5);
    gen_cmd->add_option("--seed", gen.seed, "Seed")->default_val(1);
    gen_cmd->add_option("--out", out, "Instance file (stdout when omitted)");

    auto* compare = app.add_subcommand("compare", "Compare against the grid oracle (CSV row)");
    compare->add_option("path", path, "Instance JSON")->required();
    compare->add_option("--grid", grid, "default or budgets")->check(CLI::IsMember({"default", "budgets"}));
    compare->add_option("--max-space", max_space, "Oracle work limit before TooLarge");

    auto* bench = app.add_subcommand(
        "bench",
        "Run a fixed corpus. small: seed,edges,buyers,L,alg,oracle,ratio,holds. "
        "decomp: seed,edges,k,L,max_fragment_borders,max_children,violations");
    bench->add_option("--suite", suite, "small or decomp")->check(CLI::IsMember({"small", "decomp"}));
    bench->add_option("--out", out, "CSV file (stdout when omitted)");

    auto* inspect = app.add_subcommand("inspect", "Dump decomposition and skeletons as JSON");
    inspect->add_option("path", path, "Instance JSON")->required();
    inspect->add_option("--out", out, "JSON file (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*check) return cmd_check(path);
        if (*solve_cmd) return cmd_solve(path, out);
        if (*gen_cmd) return cmd_gen(gen, out);
        if (*compare) return cmd_compare(path, grid, max_space);
        if (*bench) return cmd_bench(suite, out);
        if (*inspect) return cmd_inspect(path, out);
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kDomainFailure;
    } catch (const std::runtime_error& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
