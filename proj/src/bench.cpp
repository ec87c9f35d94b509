#include <ccdr/bench.hpp>
#include <ccdr/graph.hpp>
#include <ccdr/io.hpp>
#include <ccdr/simulate.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace ccdr::bench {

namespace {

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts)
{
    std::vector<std::uint32_t> words;
    for (auto v : parts) {
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

std::uint64_t ratio_key(double ratio)
{
    return static_cast<std::uint64_t>(std::llround(ratio * 1e6));
}

auto sort_key(const ReplicateResult& r)
{
    return std::make_tuple(r.cell.p, r.cell.s0_ratio, r.cell.n, r.cell.replicate);
}

} // namespace

std::string_view to_string(Selection s)
{
    switch (s) {
    case Selection::oracle_shd: return "oracle-shd";
    case Selection::bic: return "bic";
    case Selection::none: return "none";
    }
    return "unknown";
}

Selection parse_selection(std::string_view name)
{
    if (name == "oracle-shd")
        return Selection::oracle_shd;
    if (name == "bic")
        return Selection::bic;
    if (name == "none")
        return Selection::none;
    throw std::invalid_argument("unknown selection rule '" + std::string(name) + "'");
}

void BenchConfig::validate() const
{
    solver.validate();
    if (p_values.empty() || s0_ratios.empty() || (!fixed_n && n_ratios.empty()))
        throw std::invalid_argument("bench grid must not be empty");
    if (replicates < 1)
        throw std::invalid_argument("replicates must be >= 1");
    for (Index p : p_values) {
        if (p < 2)
            throw std::invalid_argument("bench needs p >= 2");
        for (double r : s0_ratios) {
            SimConfig sim;
            sim.p = p;
            sim.expected_edges = r * double(p);
            sim.validate();
        }
    }
    for (double r : n_ratios)
        if (!(r > 0.0))
            throw std::invalid_argument("n/p ratios must be > 0");
}

std::vector<Cell> expand_grid(const BenchConfig& cfg)
{
    cfg.validate();
    std::vector<Cell> cells;
    for (Index p : cfg.p_values) {
        for (double s0 : cfg.s0_ratios) {
            std::vector<Index> sizes;
            if (cfg.fixed_n)
                sizes.push_back(*cfg.fixed_n);
            else
                for (double r : cfg.n_ratios)
                    sizes.push_back(std::max<Index>(2, static_cast<Index>(std::llround(r * double(p)))));
            for (Index rep = 0; rep < cfg.replicates; ++rep) {
                const std::uint64_t dag_seed = derive_seed({cfg.seed, p, ratio_key(s0), rep});
                for (Index n : sizes)
                    cells.push_back(Cell{p, s0, n, rep, dag_seed, derive_seed({dag_seed, n})});
            }
        }
    }
    return cells;
}

double refit_bic(const SparseAdjacency& structure, const Dataset& data)
{
    const WeightedDag fitted = refit_ols(structure, data);
    const double n = static_cast<double>(data.n());
    const double loglik = n * mean_loglik(fitted, data.centered());
    return -2.0 * loglik + double(structure.edge_count() + structure.size()) * std::log(n);
}

Index select_point(const SolutionPath& path, const WeightedDag& truth, const Dataset& data,
                   Selection select)
{
    if (path.points.empty())
        throw std::invalid_argument("empty solution path");
    switch (select) {
    case Selection::none:
        return path.points.size() - 1;
    case Selection::oracle_shd: {
        Index best = 0;
        Index best_shd = compare(path.points[0].estimate, truth).shd_dag;
        for (Index i = 1; i < path.points.size(); ++i) {
            const Index shd = compare(path.points[i].estimate, truth).shd_dag;
            if (shd < best_shd) {
                best = i;
                best_shd = shd;
            }
        }
        return best;
    }
    case Selection::bic: {
        Index best = 0;
        double best_bic = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < path.points.size(); ++i) {
            double bic = std::numeric_limits<double>::infinity();
            try {
                bic = refit_bic(path.points[i].estimate.edges(), data);
            } catch (const std::invalid_argument&) {
                // Too many parents for n; cannot be refit, never selected.
            }
            if (bic < best_bic) {
                best = i;
                best_bic = bic;
            }
        }
        return best;
    }
    }
    return 0;
}

ReplicateResult run_cell(const Cell& cell, const BenchConfig& cfg)
{
    SimConfig sim;
    sim.p = cell.p;
    sim.expected_edges = cell.s0_ratio * double(cell.p);
    sim.n = cell.n;
    sim.seed = cell.dag_seed;
    Rng dag_rng(cell.dag_seed);
    const WeightedDag truth = random_dag(sim, dag_rng);
    Rng data_rng(cell.data_seed);
    const Sample sample = sample_sem(truth, cell.n, data_rng);

    const SolutionPath path = fit_path(sample.data, cfg.solver);

    ReplicateResult r;
    r.cell = cell;
    r.family = cfg.solver.penalty.family;
    r.path_length = path.points.size();
    r.halted_early = path.halted_early;
    r.total_seconds = path.total_seconds;
    r.average_seconds = path.total_seconds / double(std::max<Index>(1, r.path_length));
    for (const auto& pt : path.points) {
        r.all_acyclic = r.all_acyclic && is_acyclic(pt.estimate.edges());
        r.path.push_back(PointSummary{pt.lambda, compare(pt.estimate, truth), pt.seconds});
    }
    r.selected_index = select_point(path, truth, sample.data, cfg.select);
    r.selected_lambda = path.points[r.selected_index].lambda;
    r.selected = r.path[r.selected_index].metrics;

    if (cfg.with_test_loglik) {
        Rng test_rng(derive_seed({cell.data_seed, 0x7e57}));
        const Sample test = sample_sem(truth, cell.n, test_rng);
        try {
            r.test_loglik = test_loglik(path.points[r.selected_index].estimate.edges(), sample.data, test.data);
        } catch (const std::invalid_argument&) {
            r.test_loglik.reset();
        }
    }
    return r;
}

std::vector<ReplicateResult> run_bench(const BenchConfig& cfg)
{
    const std::vector<Cell> cells = expand_grid(cfg);
    std::vector<ReplicateResult> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size())
                return;
            try {
                results[i] = run_cell(cells[i], cfg);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(cells.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);
    std::sort(results.begin(), results.end(),
              [](const auto& a, const auto& b) { return sort_key(a) < sort_key(b); });
    return results;
}

Aggregate aggregate(std::span<const ReplicateResult> results)
{
    Aggregate a;
    a.count = results.size();
    if (results.empty())
        return a;
    for (const auto& r : results) {
        const auto& m = r.selected;
        a.T += double(m.T);
        a.P += double(m.P);
        a.TP += double(m.TP);
        a.R += double(m.R);
        a.FP += double(m.FP);
        a.shd_dag += double(m.shd_dag);
        a.shd_skeleton += double(m.shd_skeleton);
        a.mean_tpr += m.tpr;
        a.mean_fdr += m.fdr;
        a.mean_fpr += m.fpr;
        a.mean_total_seconds += r.total_seconds;
        a.mean_average_seconds += r.average_seconds;
        a.max_total_seconds = std::max(a.max_total_seconds, r.total_seconds);
        a.all_acyclic = a.all_acyclic && r.all_acyclic;
    }
    const double count = double(a.count);
    for (double* v : {&a.T, &a.P, &a.TP, &a.R, &a.FP, &a.shd_dag, &a.shd_skeleton, &a.mean_tpr,
                      &a.mean_fdr, &a.mean_fpr, &a.mean_total_seconds, &a.mean_average_seconds})
        *v /= count;
    a.tpr = a.T > 0 ? a.TP / a.T : 0.0;
    a.fdr = a.P > 0 ? (a.R + a.FP) / a.P : 0.0;
    return a;
}

void write_replicates_csv(std::ostream& out, std::span<const ReplicateResult> results)
{
    out << "penalty,p,s0_ratio,n,replicate,dag_seed,data_seed,T,P,TP,R,FP,shd_dag,shd_skeleton,"
           "tpr,fdr,fpr,selected_index,selected_lambda,path_length,halted_early,all_acyclic,"
           "total_seconds,average_seconds,test_loglik\n";
    for (const auto& r : results) {
        const auto& m = r.selected;
        out << ccdr::to_string(r.family) << ',' << r.cell.p << ',' << r.cell.s0_ratio << ',' << r.cell.n
            << ',' << r.cell.replicate << ',' << r.cell.dag_seed << ',' << r.cell.data_seed << ','
            << m.T << ',' << m.P << ',' << m.TP << ',' << m.R << ',' << m.FP << ',' << m.shd_dag << ','
            << m.shd_skeleton << ',' << io::format_double(m.tpr) << ',' << io::format_double(m.fdr) << ','
            << io::format_double(m.fpr) << ',' << r.selected_index << ','
            << io::format_double(r.selected_lambda) << ',' << r.path_length << ',' << r.halted_early
            << ',' << r.all_acyclic << ',' << io::format_double(r.total_seconds) << ','
            << io::format_double(r.average_seconds) << ','
            << (r.test_loglik ? io::format_double(*r.test_loglik) : std::string("NA")) << '\n';
    }
}

void write_aggregate_csv(std::ostream& out, std::span<const ReplicateResult> results)
{
    // Group by (family, p, s0/p, n) and also emit an "all" row per p.
    std::map<std::tuple<Index, double, Index>, std::vector<ReplicateResult>> groups;
    std::map<Index, std::vector<ReplicateResult>> by_p;
    for (const auto& r : results) {
        groups[{r.cell.p, r.cell.s0_ratio, r.cell.n}].push_back(r);
        by_p[r.cell.p].push_back(r);
    }
    out << "penalty,p,s0_ratio,n,count,T,P,TP,R,FP,shd_dag,shd_skeleton,tpr,fdr,mean_tpr,mean_fdr,"
           "mean_fpr,mean_total_seconds,max_total_seconds,mean_average_seconds,all_acyclic\n";
    const std::string family =
        results.empty() ? std::string("NA") : std::string(ccdr::to_string(results.front().family));
    auto row = [&](const std::string& p, const std::string& s0, const std::string& n,
                   const Aggregate& a) {
        out << family << ',' << p << ',' << s0 << ',' << n << ',' << a.count << ','
            << io::format_double(a.T) << ',' << io::format_double(a.P) << ','
            << io::format_double(a.TP) << ',' << io::format_double(a.R) << ','
            << io::format_double(a.FP) << ',' << io::format_double(a.shd_dag) << ','
            << io::format_double(a.shd_skeleton) << ',' << io::format_double(a.tpr) << ','
            << io::format_double(a.fdr) << ',' << io::format_double(a.mean_tpr) << ','
            << io::format_double(a.mean_fdr) << ',' << io::format_double(a.mean_fpr) << ','
            << io::format_double(a.mean_total_seconds) << ','
            << io::format_double(a.max_total_seconds) << ','
            << io::format_double(a.mean_average_seconds) << ',' << a.all_acyclic << '\n';
    };
    for (const auto& [key, group] : groups) {
        const auto& [p, s0, n] = key;
        row(std::to_string(p), io::format_double(s0), std::to_string(n), aggregate(group));
    }
    for (const auto& [p, group] : by_p)
        row(std::to_string(p), "all", "all", aggregate(group));
}

void write_path_csv(std::ostream& out, std::span<const ReplicateResult> results)
{
    out << "penalty,p,s0_ratio,n,replicate,index,lambda,P,TP,R,FP,shd_dag,tpr,fpr,seconds\n";
    for (const auto& r : results) {
        for (Index i = 0; i < r.path.size(); ++i) {
            const auto& pt = r.path[i];
            out << ccdr::to_string(r.family) << ',' << r.cell.p << ',' << r.cell.s0_ratio << ','
                << r.cell.n << ',' << r.cell.replicate << ',' << i << ','
                << io::format_double(pt.lambda) << ',' << pt.metrics.P << ',' << pt.metrics.TP << ','
                << pt.metrics.R << ',' << pt.metrics.FP << ',' << pt.metrics.shd_dag << ','
                << io::format_double(pt.metrics.tpr) << ',' << io::format_double(pt.metrics.fpr) << ','
                << io::format_double(pt.seconds) << '\n';
        }
    }
}

} // namespace ccdr::bench
