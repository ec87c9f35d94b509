#include <ccdr/errors.hpp>
#include <ccdr/solver.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace ccdr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_node_pair(const ReparamState& state, const Dataset& data, Index k, Index j)
{
    if (state.p() != data.p())
        throw DimensionMismatch("state and data disagree on the number of nodes");
    if (k >= state.p() || j >= state.p())
        throw DimensionMismatch("node index out of range");
    if (k == j)
        throw std::invalid_argument("block endpoints must differ");
}

// Q restricted to one coordinate, relative to that coordinate being zero:
// with unit-norm columns Q1(v) - Q1(0) = v^2/2 - v btilde + p_lambda(|v|).
double coordinate_gain(double value, double btilde, const PenaltyConfig& cfg)
{
    return 0.5 * value * value - value * btilde + penalty_value(std::abs(value), cfg);
}

} // namespace

void SolverConfig::validate() const
{
    penalty.validate();
    if (!(epsilon > 0.0))
        throw std::invalid_argument("epsilon must be > 0");
    if (max_iters && *max_iters < 1)
        throw std::invalid_argument("max_iters must be >= 1");
    if (!(alpha_threshold > 0.0))
        throw std::invalid_argument("alpha_threshold must be > 0");
    if (n_lambda < 1)
        throw std::invalid_argument("n_lambda must be >= 1");
    if (!(lambda_min_ratio > 0.0 && lambda_min_ratio < 1.0))
        throw std::invalid_argument("lambda_min_ratio must lie in (0, 1)");
}

int SolverConfig::resolved_max_iters(Index p) const
{
    if (max_iters)
        return *max_iters;
    return std::max(10, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p)))));
}

double objective(const ReparamState& state, const Dataset& data, const PenaltyConfig& cfg)
{
    double penalty = 0.0;
    state.phi().for_each_edge(
        [&](Index, Index, double phi) { penalty += penalty_value(std::abs(phi), cfg); });
    return loglik_reparam(state, data) + penalty;
}

double phi_tilde(const ReparamState& state, const Dataset& data, Index k, Index j)
{
    double value = state.rho(j) * data.gram(j, k);
    for (const auto& e : state.phi().parents(j))
        if (e.parent != k)
            value -= e.value * data.gram(e.parent, k);
    return value;
}

double update_phi(const ReparamState& state, const Dataset& data, Index k, Index j,
                  const PenaltyConfig& cfg)
{
    return threshold(phi_tilde(state, data, k, j), cfg);
}

double update_rho(const ReparamState& state, const Dataset& data, Index j)
{
    double c = 0.0;
    for (const auto& e : state.phi().parents(j))
        c += e.value * data.gram(e.parent, j);
    const double n = static_cast<double>(data.n());
    const double rho = 0.5 * (c + std::sqrt(c * c + 4.0 * n));
    if (!(rho > 0.0))
        throw std::domain_error("rho update produced a nonpositive value");
    return rho;
}

double block_update(ReparamState& state, const Dataset& data, Index k, Index j,
                    const PenaltyConfig& cfg, AncestorSearch& search)
{
    require_node_pair(state, data, k, j);
    const double old_kj = state.phi(k, j);
    const double old_jk = state.phi(j, k);

    // Each candidate lives in a different column, so neither depends on the
    // other block entry.
    const double tilde_kj = phi_tilde(state, data, k, j);
    const double tilde_jk = phi_tilde(state, data, j, k);
    const double cand_kj = threshold(tilde_kj, cfg);
    const double cand_jk = threshold(tilde_jk, cfg);

    state.set_phi(k, j, 0.0);
    state.set_phi(j, k, 0.0);
    if (cand_kj == 0.0 && cand_jk == 0.0)
        return std::max(std::abs(old_kj), std::abs(old_jk));

    // Feasibility is judged on the graph without this block's edges.
    const bool kj_ok = cand_kj != 0.0 && !search.induces_cycle(state.phi(), k, j);
    const bool jk_ok = cand_jk != 0.0 && !search.induces_cycle(state.phi(), j, k);

    bool use_kj = kj_ok;
    if (kj_ok && jk_ok) {
        const double gain_kj = coordinate_gain(cand_kj, tilde_kj, cfg);
        const double gain_jk = coordinate_gain(cand_jk, tilde_jk, cfg);
        const double scale = std::max({1.0, std::abs(gain_kj), std::abs(gain_jk)});
        if (std::abs(gain_kj - gain_jk) < 1e-12 * scale) {
            if (old_kj != 0.0)
                use_kj = true;
            else if (old_jk != 0.0)
                use_kj = false;
            else
                use_kj = k < j;
        } else {
            use_kj = gain_kj < gain_jk;
        }
    }

    double new_kj = 0.0;
    double new_jk = 0.0;
    if (use_kj)
        new_kj = cand_kj;
    else if (jk_ok)
        new_jk = cand_jk;
    state.set_phi(k, j, new_kj);
    state.set_phi(j, k, new_jk);
    return std::max(std::abs(new_kj - old_kj), std::abs(new_jk - old_jk));
}

double block_update(ReparamState& state, const Dataset& data, Index k, Index j,
                    const PenaltyConfig& cfg)
{
    AncestorSearch search(state.p());
    return block_update(state, data, k, j, cfg, search);
}

SweepResult sweep(ReparamState& state, const Dataset& data, const PenaltyConfig& cfg,
                  std::span<const Block> blocks, const UpdateObserver& observer,
                  AncestorSearch* search)
{
    if (state.p() != data.p())
        throw DimensionMismatch("state and data disagree on the number of nodes");
    AncestorSearch local(search ? 0 : state.p());
    AncestorSearch& dfs = search ? *search : local;
    const Index p = state.p();

    for (Index j = 0; j < p; ++j) {
        state.set_rho(j, update_rho(state, data, j));
        if (observer)
            observer(state);
    }

    SweepResult result;
    auto visit = [&](Index k, Index j) {
        result.max_change = std::max(result.max_change, block_update(state, data, k, j, cfg, dfs));
        if (observer)
            observer(state);
    };
    if (blocks.empty()) {
        for (Index k = 0; k < p; ++k)
            for (Index j = k + 1; j < p; ++j)
                visit(k, j);
    } else {
        for (const auto& [k, j] : blocks)
            visit(k, j);
    }
    return result;
}

std::vector<Block> active_blocks(const ReparamState& state)
{
    std::vector<Block> blocks;
    blocks.reserve(state.edge_count());
    state.phi().for_each_edge(
        [&](Index i, Index j, double) { blocks.emplace_back(std::min(i, j), std::max(i, j)); });
    std::sort(blocks.begin(), blocks.end());
    return blocks;
}

PathPoint fit_single_lambda(const ReparamState& init, const Dataset& data, const SolverConfig& cfg,
                            double lambda, const UpdateObserver& observer)
{
    cfg.validate();
    if (init.p() != data.p())
        throw DimensionMismatch("initial state and data disagree on the number of nodes");
    const auto start = Clock::now();
    const PenaltyConfig penalty = cfg.penalty.with_lambda(lambda);
    const int max_iters = cfg.resolved_max_iters(data.p());

    UpdateObserver watch = observer;
    if (cfg.check_acyclic_each_update) {
        watch = [&observer](const ReparamState& s) {
            if (!is_acyclic(s.phi()))
                throw CycleError("coordinate update produced a cycle", {});
            if (observer)
                observer(s);
        };
    }

    ReparamState state = init;
    AncestorSearch search(data.p());
    std::vector<Block> previous = active_blocks(state);
    int sweeps = 0;
    bool converged = false;

    for (int round = 0; round < max_iters; ++round) {
        const SweepResult full = sweep(state, data, penalty, {}, watch, &search);
        ++sweeps;
        const std::vector<Block> active = active_blocks(state);

        bool inner_converged = full.max_change < cfg.epsilon;
        for (int l = 0; l < max_iters && !inner_converged && !active.empty(); ++l) {
            const SweepResult r = sweep(state, data, penalty, active, watch, &search);
            ++sweeps;
            inner_converged = r.max_change < cfg.epsilon;
        }
        if (active.empty())
            inner_converged = true;

        if (inner_converged && (full.max_change < cfg.epsilon || active == previous)) {
            converged = true;
            break;
        }
        previous = active;
    }

    WeightedDag estimate = to_dag(state);
    const double q = objective(state, data, penalty);
    const Index edges = state.edge_count();
    return PathPoint{lambda, std::move(estimate), std::move(state), edges, sweeps, converged, q,
                     seconds_since(start)};
}

std::vector<double> lambda_grid(Index n, const SolverConfig& cfg)
{
    cfg.validate();
    const double lambda_max = std::sqrt(static_cast<double>(n));
    const double lambda_min = lambda_max * cfg.lambda_min_ratio;
    std::vector<double> grid(static_cast<std::size_t>(cfg.n_lambda));
    if (cfg.n_lambda == 1) {
        grid[0] = lambda_max;
        return grid;
    }
    const double step = (lambda_max - lambda_min) / static_cast<double>(cfg.n_lambda - 1);
    for (int i = 0; i < cfg.n_lambda; ++i)
        grid[static_cast<std::size_t>(i)] = lambda_max - step * static_cast<double>(i);
    grid.back() = lambda_min;
    return grid;
}

SolutionPath fit_path(const Dataset& data, const SolverConfig& cfg)
{
    cfg.validate();
    const auto start = Clock::now();
    const Index p = data.p();
    const double edge_limit = cfg.alpha_threshold * static_cast<double>(p);

    SolutionPath path;
    ReparamState warm = ReparamState::null_model(p, std::sqrt(static_cast<double>(data.n())));
    for (double lambda : lambda_grid(data.n(), cfg)) {
        PathPoint point = fit_single_lambda(warm, data, cfg, lambda);
        warm = point.reparam;
        const bool too_dense = static_cast<double>(point.edge_count) > edge_limit;
        path.points.push_back(std::move(point));
        if (too_dense) {
            path.halted_early = true;
            break;
        }
    }
    path.total_seconds = seconds_since(start);
    return path;
}

} // namespace ccdr
