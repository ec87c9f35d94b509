// Command-line front end: fit, simulate, eval and bench.

#include <ccdr/bench.hpp>
#include <ccdr/errors.hpp>
#include <ccdr/io.hpp>
#include <ccdr/metrics.hpp>
#include <ccdr/simulate.hpp>
#include <ccdr/solver.hpp>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#ifndef CCDR_VERSION
#define CCDR_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace ccdr;

namespace {

enum ExitCode : int {
    ok = 0,
    failure = 1,
    malformed_input = 2,
    constant_column = 3,
    invalid_config = 4,
};

/// Thrown for option combinations that parse but make no sense.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SolverFlags {
    std::string penalty = "mcp";
    double gamma = 2.0;
    int nlambda = 20;
    double lambda_min_ratio = 0.05;
    double alpha_threshold = 3.0;
    double epsilon = 1e-4;
    int max_iters = 0;  // 0: max(ceil(sqrt(p)), 10)

    SolverConfig build() const
    {
        SolverConfig cfg;
        const PenaltyFamily family = parse_penalty_family(penalty);
        cfg.penalty = family == PenaltyFamily::mcp ? PenaltyConfig::mcp(0.0, gamma) : PenaltyConfig::l1(0.0);
        cfg.n_lambda = nlambda;
        cfg.lambda_min_ratio = lambda_min_ratio;
        cfg.alpha_threshold = alpha_threshold;
        cfg.epsilon = epsilon;
        if (max_iters != 0)
            cfg.max_iters = max_iters;
        cfg.validate();
        return cfg;
    }
};

void add_solver_flags(CLI::App& cmd, SolverFlags& f)
{
    cmd.add_option("--penalty", f.penalty, "Penalty family")
        ->check(CLI::IsMember({"mcp", "l1"}))
        ->capture_default_str();
    cmd.add_option("--gamma", f.gamma, "MCP concavity (> 1)")->capture_default_str();
    cmd.add_option("--nlambda", f.nlambda, "Number of path points")->capture_default_str();
    cmd.add_option("--lambda-min-ratio", f.lambda_min_ratio, "Smallest lambda as a fraction of sqrt(n)")
        ->capture_default_str();
    cmd.add_option("--alpha-threshold", f.alpha_threshold, "Stop once an estimate has more than alpha*p edges")
        ->capture_default_str();
    cmd.add_option("--epsilon", f.epsilon, "Convergence tolerance")->capture_default_str();
    cmd.add_option("--max-iters", f.max_iters, "Sweep bound M (0: max(ceil(sqrt(p)), 10))")
        ->capture_default_str();
}

json solver_json(const SolverConfig& cfg, Index p)
{
    return {
        {"penalty", std::string(to_string(cfg.penalty.family))},
        {"gamma", cfg.penalty.family == PenaltyFamily::mcp ? json(cfg.penalty.gamma) : json(nullptr)},
        {"nlambda", cfg.n_lambda},
        {"lambda_min_ratio", cfg.lambda_min_ratio},
        {"alpha_threshold", cfg.alpha_threshold},
        {"epsilon", cfg.epsilon},
        {"max_iters", cfg.resolved_max_iters(p)},
    };
}

json base_manifest(const std::string& command, const std::vector<std::string>& argv)
{
    return {
        {"command", command},
        {"argv", argv},
        {"version", CCDR_VERSION},
        {"rng", std::string(kRngName)},
    };
}

void write_json(const fs::path& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("cannot create directory '" + dir.string() + "': " + ec.message());
}

/// Columns that look like category codes: integral values with two to ten levels.
std::vector<Index> coded_columns(const Matrix& values)
{
    std::vector<Index> coded;
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
        std::set<double> levels;
        bool integral = true;
        for (Eigen::Index i = 0; i < values.rows() && integral; ++i) {
            const double v = values(i, j);
            integral = std::floor(v) == v;
            levels.insert(v);
        }
        if (integral && levels.size() >= 2 && levels.size() <= 10)
            coded.push_back(static_cast<Index>(j));
    }
    return coded;
}

Dataset load_dataset(const fs::path& path, bool treat_as_numeric, json* info)
{
    const io::CsvTable table = io::read_csv(path);
    if (table.values.rows() < 2)
        throw io::ParseError("need at least 2 data rows, found " + std::to_string(table.values.rows()));
    const auto coded = coded_columns(table.values);
    if (!coded.empty() && !treat_as_numeric)
        throw ConfigError("column " + std::to_string(coded.front() + 1) +
                          " looks like coded discrete data; pass --treat-as-numeric to fit it as numeric");
    if (!coded.empty())
        spdlog::warn("{} coded discrete column(s) treated as numeric", coded.size());
    Dataset data = Dataset::from_raw(table.values);
    if (info) {
        *info = {
            {"path", path.string()},
            {"n", data.n()},
            {"p", data.p()},
            {"sha256", io::fingerprint(table.values)},
            {"header", table.header},
        };
    }
    return data;
}

std::string point_file(std::size_t i)
{
    char name[32];
    std::snprintf(name, sizeof name, "path_%03zu.txt", i);
    return name;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    std::string input;
    std::string output_dir;
    SolverFlags solver;
    std::uint64_t seed = 0;
    bool treat_as_numeric = false;
    bool original_scale = false;
};

int run_fit(const FitArgs& a, const std::vector<std::string>& argv)
{
    const auto start = std::chrono::steady_clock::now();
    json dataset;
    const Dataset data = load_dataset(a.input, a.treat_as_numeric, &dataset);
    const SolverConfig cfg = a.solver.build();
    spdlog::info("fitting n={} p={} with {} path points", data.n(), data.p(), cfg.n_lambda);

    const SolutionPath path = fit_path(data, cfg);
    ensure_dir(a.output_dir);

    json points = json::array();
    json per_lambda = json::array();
    for (std::size_t i = 0; i < path.points.size(); ++i) {
        const PathPoint& pt = path.points[i];
        const WeightedDag out = a.original_scale ? to_original_scale(pt.estimate, data) : pt.estimate;
        io::write_edge_list(fs::path(a.output_dir) / point_file(i), out.edges(), pt.lambda);
        points.push_back({
            {"index", i},
            {"file", point_file(i)},
            {"lambda", pt.lambda},
            {"edge_count", pt.edge_count},
            {"objective", pt.objective},
            {"sweeps", pt.sweeps_used},
            {"converged", pt.converged},
            {"seconds", pt.seconds},
        });
        per_lambda.push_back(pt.seconds);
        spdlog::debug("lambda={:.6g} edges={} sweeps={} converged={}", pt.lambda, pt.edge_count,
                      pt.sweeps_used, pt.converged);
    }
    json summary = {
        {"penalty", std::string(to_string(cfg.penalty.family))},
        {"gamma", cfg.penalty.family == PenaltyFamily::mcp ? json(cfg.penalty.gamma) : json(nullptr)},
        {"scale", a.original_scale ? "original" : "normalized"},
        {"halted_early", path.halted_early},
        {"total_seconds", path.total_seconds},
        {"average_seconds", path.total_seconds / double(std::max<std::size_t>(1, path.points.size()))},
        {"points", points},
    };
    write_json(fs::path(a.output_dir) / "path_summary.json", summary);

    json manifest = base_manifest("fit", argv);
    manifest["config"] = solver_json(cfg, data.p());
    manifest["config"]["treat_as_numeric"] = a.treat_as_numeric;
    manifest["config"]["original_scale"] = a.original_scale;
    manifest["seed"] = a.seed;
    manifest["dataset"] = dataset;
    manifest["timings"] = {
        {"path_seconds", path.total_seconds},
        {"per_lambda_seconds", per_lambda},
        {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
    };
    write_json(fs::path(a.output_dir) / "manifest.json", manifest);
    spdlog::info("wrote {} path points to {}", path.points.size(), a.output_dir);
    return ok;
}

// ---------------------------------------------------------------- simulate

struct SimArgs {
    Index p = 10;
    double s0 = -1.0;
    double s0_ratio = -1.0;
    Index n = 100;
    std::uint64_t seed = 1;
    double weight_low = 0.5;
    double weight_high = 2.0;
    double noise_sd = 1.0;
    bool random_sign = false;
    bool no_relabel = false;
    std::string output_dir;
};

int run_simulate(const SimArgs& a, const std::vector<std::string>& argv)
{
    const auto start = std::chrono::steady_clock::now();
    if (a.s0 >= 0.0 && a.s0_ratio >= 0.0)
        throw ConfigError("give either --s0 or --s0-ratio, not both");
    if (a.n < 2)
        throw ConfigError("n must be >= 2");
    SimConfig cfg;
    cfg.p = a.p;
    cfg.expected_edges = a.s0 >= 0.0 ? a.s0 : (a.s0_ratio >= 0.0 ? a.s0_ratio * double(a.p) : double(a.p));
    cfg.n = a.n;
    cfg.seed = a.seed;
    cfg.weight_low = a.weight_low;
    cfg.weight_high = a.weight_high;
    cfg.noise_sd = a.noise_sd;
    cfg.random_sign = a.random_sign;
    cfg.relabel = !a.no_relabel;
    cfg.validate();

    Rng rng(cfg.seed);
    const WeightedDag truth = random_dag(cfg, rng);
    const Sample sample = sample_sem(truth, cfg.n, rng);

    ensure_dir(a.output_dir);
    const fs::path dir(a.output_dir);
    io::write_csv(dir / "data.csv", sample.raw);
    io::write_edge_list(dir / "truth.txt", truth.edges(), std::nullopt);

    json manifest = base_manifest("simulate", argv);
    manifest["config"] = {
        {"p", cfg.p},
        {"expected_edges", cfg.expected_edges},
        {"n", cfg.n},
        {"weight_low", cfg.weight_low},
        {"weight_high", cfg.weight_high},
        {"noise_sd", cfg.noise_sd},
        {"random_sign", cfg.random_sign},
        {"relabel", cfg.relabel},
    };
    manifest["seed"] = cfg.seed;
    manifest["dataset"] = {
        {"path", "data.csv"},
        {"n", cfg.n},
        {"p", cfg.p},
        {"sha256", io::fingerprint(sample.raw)},
        {"true_edges", truth.edge_count()},
    };
    manifest["timings"] = {
        {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
    };
    write_json(dir / "manifest.json", manifest);
    spdlog::info("simulated p={} n={} with {} true edges", cfg.p, cfg.n, truth.edge_count());
    return ok;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
    std::string estimate;
    std::string truth;
    std::string train;
    std::string test;
    std::string output;
    bool treat_as_numeric = false;
};

int run_eval(const EvalArgs& a)
{
    if (a.train.empty() != a.test.empty())
        throw ConfigError("--train and --test must be given together");
    const io::EdgeList est = io::read_edge_list(a.estimate);
    const io::EdgeList truth = io::read_edge_list(a.truth);
    if (est.p != truth.p)
        throw ConfigError("estimate has p=" + std::to_string(est.p) + " but truth has p=" +
                          std::to_string(truth.p));
    CompareOptions options;
    options.undirected = est.undirected;
    const StructureMetrics m = compare(io::to_weighted_dag(est), io::to_weighted_dag(truth), options);

    json out = {
        {"P", m.P},
        {"TP", m.TP},
        {"R", m.R},
        {"FP", m.FP},
        {"T", m.T},
        {"shd_dag", m.shd_dag},
        {"shd_skeleton", m.shd_skeleton},
        {"tpr", m.tpr},
        {"fdr", m.fdr},
        {"fpr", m.fpr},
        {"test_loglik", nullptr},
    };
    if (!a.train.empty()) {
        const Dataset train = load_dataset(a.train, a.treat_as_numeric, nullptr);
        const Dataset test = load_dataset(a.test, a.treat_as_numeric, nullptr);
        if (train.p() != est.p || test.p() != est.p)
            throw ConfigError("data width does not match the edge lists");
        out["test_loglik"] = test_loglik(est.edges, train, test);
    }
    if (a.output.empty()) {
        std::printf("%s\n", out.dump(2).c_str());
    } else {
        write_json(a.output, out);
    }
    return ok;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::vector<Index> p{50};
    std::vector<double> s0_ratios{0.2, 0.5, 1.0, 2.0};
    std::vector<double> n_ratios{1.0, 5.0};
    Index n = 0;
    Index replicates = 20;
    SolverFlags solver;
    std::string select = "oracle-shd";
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    bool test_loglik = false;
    std::string output_dir;
};

int run_bench_cmd(const BenchArgs& a, const std::vector<std::string>& argv)
{
    bench::BenchConfig cfg;
    cfg.p_values = a.p;
    cfg.s0_ratios = a.s0_ratios;
    cfg.n_ratios = a.n_ratios;
    if (a.n > 0)
        cfg.fixed_n = a.n;
    cfg.replicates = a.replicates;
    cfg.solver = a.solver.build();
    cfg.select = bench::parse_selection(a.select);
    cfg.seed = a.seed;
    cfg.jobs = std::max(1u, a.jobs);
    cfg.with_test_loglik = a.test_loglik;
    cfg.validate();

    const auto start = std::chrono::steady_clock::now();
    const auto results = bench::run_bench(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ensure_dir(a.output_dir);
    const fs::path dir(a.output_dir);
    {
        std::ofstream out(dir / "replicates.csv");
        bench::write_replicates_csv(out, results);
    }
    {
        std::ofstream out(dir / "aggregate.csv");
        bench::write_aggregate_csv(out, results);
    }
    {
        std::ofstream out(dir / "path_points.csv");
        bench::write_path_csv(out, results);
    }

    const bench::Aggregate all = bench::aggregate(results);
    json manifest = base_manifest("bench", argv);
    manifest["config"] = solver_json(cfg.solver, cfg.p_values.front());
    manifest["config"]["p"] = cfg.p_values;
    manifest["config"]["s0_ratios"] = cfg.s0_ratios;
    manifest["config"]["n_ratios"] = cfg.fixed_n ? json(nullptr) : json(cfg.n_ratios);
    manifest["config"]["n"] = cfg.fixed_n ? json(*cfg.fixed_n) : json(nullptr);
    manifest["config"]["replicates"] = cfg.replicates;
    manifest["config"]["select"] = std::string(bench::to_string(cfg.select));
    manifest["config"]["jobs"] = cfg.jobs;
    manifest["seed"] = cfg.seed;
    manifest["summary"] = {
        {"count", all.count}, {"T", all.T},     {"P", all.P},       {"TP", all.TP},
        {"R", all.R},         {"FP", all.FP},   {"shd_dag", all.shd_dag},
        {"shd_skeleton", all.shd_skeleton},     {"tpr", all.tpr},   {"fdr", all.fdr},
        {"all_acyclic", all.all_acyclic},
    };
    manifest["timings"] = {
        {"wall_seconds", wall},
        {"mean_path_seconds", all.mean_total_seconds},
        {"max_path_seconds", all.max_total_seconds},
        {"mean_seconds_per_estimate", all.mean_average_seconds},
    };
    write_json(dir / "manifest.json", manifest);
    spdlog::info("bench: {} fits, TPR {:.3f}, FDR {:.3f}, {:.1f} s", all.count, all.tpr, all.fdr, wall);
    return ok;
}

void setup_logging()
{
    auto logger = spdlog::stderr_logger_mt("ccdr");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("CCDR_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to "off"; only accept it when asked for.
        if (level != spdlog::level::off || std::string(env) == "off")
            spdlog::set_level(level);
        else
            spdlog::warn("ignoring unknown CCDR_LOG level '{}'", env);
    }
}

} // namespace

int main(int argc, char** argv)
{
    setup_logging();
    const std::vector<std::string> args(argv, argv + argc);

    CLI::App app{"Sparse Gaussian Bayesian network learning by concave penalized coordinate descent"};
    app.set_version_flag("--version", CCDR_VERSION);
    app.require_subcommand(1);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a regularization path to a CSV data file");
    fit_cmd->add_option("--input", fit.input, "CSV file, rows = observations")->required()->check(CLI::ExistingFile);
    fit_cmd->add_option("--output-dir", fit.output_dir, "Directory for edge lists and summaries")->required();
    add_solver_flags(*fit_cmd, fit.solver);
    fit_cmd->add_option("--seed", fit.seed, "Recorded in the manifest (the fit itself is deterministic)");
    fit_cmd->add_flag("--treat-as-numeric", fit.treat_as_numeric, "Accept coded discrete columns as numeric");
    fit_cmd->add_flag("--original-scale", fit.original_scale, "Write weights on the original data scale");

    SimArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Draw a random DAG and Gaussian data from it");
    sim_cmd->add_option("--p", sim.p, "Number of nodes")->capture_default_str();
    sim_cmd->add_option("--s0", sim.s0, "Expected number of edges (default p)");
    sim_cmd->add_option("--s0-ratio", sim.s0_ratio, "Expected edges as a multiple of p");
    sim_cmd->add_option("--n", sim.n, "Number of samples")->capture_default_str();
    sim_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
    sim_cmd->add_option("--weight-low", sim.weight_low, "Smallest |weight|")->capture_default_str();
    sim_cmd->add_option("--weight-high", sim.weight_high, "Largest |weight|")->capture_default_str();
    sim_cmd->add_option("--noise-sd", sim.noise_sd, "Noise standard deviation")->capture_default_str();
    sim_cmd->add_flag("--random-sign", sim.random_sign, "Flip each weight's sign with probability 1/2");
    sim_cmd->add_flag("--no-relabel", sim.no_relabel, "Keep edges pointing from lower to higher index");
    sim_cmd->add_option("--output-dir", sim.output_dir, "Directory for data.csv and truth.txt")->required();

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "Compare an estimated edge list with the truth");
    eval_cmd->add_option("--estimate", ev.estimate, "Estimated edge list")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--truth", ev.truth, "True edge list")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--train", ev.train, "Training CSV for the test log-likelihood")->check(CLI::ExistingFile);
    eval_cmd->add_option("--test", ev.test, "Test CSV for the test log-likelihood")->check(CLI::ExistingFile);
    eval_cmd->add_option("--output", ev.output, "Write the metrics JSON here instead of stdout");
    eval_cmd->add_flag("--treat-as-numeric", ev.treat_as_numeric, "Accept coded discrete columns as numeric");

    BenchArgs bn;
    auto* bench_cmd = app.add_subcommand("bench", "Run a simulation grid and report average recovery");
    bench_cmd->add_option("--p", bn.p, "Node counts")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--s0-ratios", bn.s0_ratios, "Expected edges per node")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--n-ratios", bn.n_ratios, "Samples per node")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--n", bn.n, "Fixed sample size (overrides --n-ratios)");
    bench_cmd->add_option("--replicates", bn.replicates, "Replicates per cell")->capture_default_str();
    add_solver_flags(*bench_cmd, bn.solver);
    bench_cmd->add_option("--select", bn.select, "Per-replicate model selection")
        ->check(CLI::IsMember({"oracle-shd", "bic", "none"}))
        ->capture_default_str();
    bench_cmd->add_option("--seed", bn.seed, "Master seed")->capture_default_str();
    bench_cmd->add_option("--jobs", bn.jobs, "Worker threads")->capture_default_str();
    bench_cmd->add_flag("--test-loglik", bn.test_loglik, "Score the selection on an independent test sample");
    bench_cmd->add_option("--output-dir", bn.output_dir, "Directory for CSV results")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return invalid_config;
    }

    try {
        if (*fit_cmd)
            return run_fit(fit, args);
        if (*sim_cmd)
            return run_simulate(sim, args);
        if (*eval_cmd)
            return run_eval(ev);
        if (*bench_cmd)
            return run_bench_cmd(bn, args);
    } catch (const io::ParseError& e) {
        spdlog::error("malformed input: {}", e.what());
        return malformed_input;
    } catch (const DegenerateColumn& e) {
        spdlog::error("{}", e.what());
        return constant_column;
    } catch (const std::invalid_argument& e) {
        spdlog::error("invalid configuration: {}", e.what());
        return invalid_config;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return failure;
    }
    return failure;
}
