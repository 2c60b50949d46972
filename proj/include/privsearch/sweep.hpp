#pragma once

#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "privsearch/corpus.hpp"
#include "privsearch/graph.hpp"
#include "privsearch/metrics.hpp"
#include "privsearch/pagerank.hpp"
#include "privsearch/privacy.hpp"
#include "privsearch/ranking.hpp"
#include "privsearch/tasks.hpp"
#include "privsearch/weight_grid.hpp"

// Experiment driver. Three experiment families over privacy parameter grids:
// authority degradation (MAE vs the full network), search quality under
// candidate privacy (MAP with the global or the local facet active), and
// search quality under querying-user privacy (MAP vs connection
// completeness). Cells of a sweep run as independent jobs; every random
// stream is derived from (master seed, cell coordinates, run), so the output
// is identical regardless of worker count, and the same run index reuses the
// same stream across the p_b (or p_c) axis of one sweep.

namespace privsearch {

enum class ExperimentKind { global_mae, global_search, local_search, user_privacy };

inline const char* to_string(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::global_mae: return "global_mae";
    case ExperimentKind::global_search: return "global_search";
    case ExperimentKind::local_search: return "local_search";
    case ExperimentKind::user_privacy: return "user_privacy";
    }
    return "?";
}

inline ExperimentKind experiment_from_string(const std::string& s) {
    if (s == "global_mae") return ExperimentKind::global_mae;
    if (s == "global_search") return ExperimentKind::global_search;
    if (s == "local_search") return ExperimentKind::local_search;
    if (s == "user_privacy") return ExperimentKind::user_privacy;
    throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

struct SweepConfig {
    ExperimentKind kind = ExperimentKind::global_mae;
    std::vector<double> lambdas;   // empty -> per-kind default
    std::vector<double> pb_values; // empty -> 0.1 .. 0.9
    std::vector<double> pc_values; // empty -> 0.0 .. 1.0
    int runs = 10;
    std::uint64_t master_seed = 42;
    std::optional<WeightVector> weights; // unset -> per-kind default
    bool tune = false;                   // re-derive weights on the full network
    double grid_step = 0.05;
    PageRankOptions pagerank_options;
    EdgeVisibility edge_visibility = EdgeVisibility::both_public;
    LocalSimMode local_sim = LocalSimMode::jaccard;
    bool exclude_querying_users = true;
    int threads = 0; // 0 -> hardware concurrency
    std::string edges_path;
    std::string publications_path;
    std::string tasks_path;
    std::string out_dir = "out";

    bool is_search() const { return kind != ExperimentKind::global_mae; }

    std::vector<double> effective_lambdas() const {
        if (!lambdas.empty())
            return lambdas;
        if (kind == ExperimentKind::global_mae)
            return {-1.0, -0.5, 0.0, 0.5, 1.0};
        return {-1.0, 0.0, 1.0};
    }

    std::vector<double> effective_pb() const {
        if (!pb_values.empty())
            return pb_values;
        std::vector<double> v;
        for (int i = 1; i <= 9; ++i)
            v.push_back(static_cast<double>(i) / 10.0);
        return v;
    }

    std::vector<double> effective_pc() const {
        if (!pc_values.empty())
            return pc_values;
        std::vector<double> v;
        for (int i = 0; i <= 10; ++i)
            v.push_back(static_cast<double>(i) / 10.0);
        return v;
    }

    WeightVector effective_weights() const {
        if (weights)
            return *weights;
        switch (kind) {
        case ExperimentKind::global_mae: return WeightVector{1.0, 0.0, 0.0}; // unused
        case ExperimentKind::global_search: return WeightVector{1.0, 0.1, 0.0};
        case ExperimentKind::local_search: return WeightVector{1.0, 0.0, 0.082};
        case ExperimentKind::user_privacy: return WeightVector{1.0, 0.0, 0.082};
        }
        return WeightVector{};
    }

    void validate() const {
        if (runs < 1)
            throw std::invalid_argument("sweep: runs must be >= 1");
        for (double l : effective_lambdas())
            (void)l;
        for (double pb : effective_pb())
            if (pb < 0.0 || pb > 1.0)
                throw std::invalid_argument("sweep: p_b outside [0,1]");
        for (double pc : effective_pc())
            if (pc < 0.0 || pc > 1.0)
                throw std::invalid_argument("sweep: p_c outside [0,1]");
        if (effective_lambdas().empty() || effective_pb().empty() || effective_pc().empty())
            throw std::invalid_argument("sweep: parameter lists must be nonempty");
    }
};

struct ResultRow {
    std::string experiment;
    std::optional<double> lambda;
    std::optional<double> pb;
    std::optional<double> pc;
    std::optional<int> run;
    std::string metric;
    double value = 0.0;

    bool operator==(const ResultRow&) const = default;
};

using ResultTable = std::vector<ResultRow>;

namespace detail {

// Fixed-slot job pool: job j writes only slot j, so assembly order never
// depends on scheduling. The first thrown exception aborts the sweep.
template <class Fn>
inline void run_jobs(std::size_t job_count, int threads, Fn&& fn) {
    int t = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (t < 1)
        t = 1;
    t = std::min<std::size_t>(t, job_count) == 0 ? 1 : static_cast<int>(std::min<std::size_t>(t, job_count));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t j = next.fetch_add(1);
            if (j >= job_count)
                return;
            try {
                fn(j);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                failed = true;
            }
        }
    };
    if (t == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(t);
        for (int i = 0; i < t; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);
}

constexpr std::uint64_t seed_tag_sample = 0x53414d50ULL; // candidate sampling
constexpr std::uint64_t seed_tag_mask = 0x4d41534bULL;   // user-connection masking

[[noreturn]] inline void rethrow_with_cell(const std::string& experiment, const std::string& coords) {
    try {
        throw;
    } catch (const std::exception& e) {
        throw std::runtime_error(experiment + " cell " + coords + ": " + e.what());
    }
}

struct SearchContext {
    const Network* net = nullptr;
    const Corpus* corpus = nullptr;
    const std::vector<QueryTask>* tasks = nullptr;
    WeightVector weights;
    LocalSimMode local_sim = LocalSimMode::jaccard;
    PageRankOptions pr_options;
    EdgeVisibility visibility = EdgeVisibility::both_public;

    std::vector<std::vector<const std::vector<double>*>> query_content; // [task][query]
    std::map<std::string, std::vector<double>> content_cache;
    std::vector<std::vector<NodeId>> relevant;   // [task]
    std::vector<UserConnections> full_conns;     // [task]
    std::vector<NodeId> excluded;                // querying users, for sampling
    std::vector<double> zeros;

    bool use_authority() const { return weights.w_g != 0.0; }
    bool use_local() const { return weights.w_l != 0.0; }

    void build(const Network& n, const Corpus& c, const std::vector<QueryTask>& t,
               const SweepConfig& cfg, bool exclude_users) {
        net = &n;
        corpus = &c;
        tasks = &t;
        weights = cfg.effective_weights();
        local_sim = cfg.local_sim;
        pr_options = cfg.pagerank_options;
        visibility = cfg.edge_visibility;
        zeros.assign(n.node_count(), 0.0);
        query_content.resize(t.size());
        relevant.resize(t.size());
        full_conns.resize(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            for (const auto& q : t[i].queries) {
                auto it = content_cache.find(q);
                if (it == content_cache.end())
                    it = content_cache.emplace(q, content_facet(c, n, q)).first;
                query_content[i].push_back(&it->second);
            }
            relevant[i] = t[i].relevant_ids(n);
            full_conns[i] = UserConnections::resolve(t[i].user_connections, n);
        }
        if (exclude_users) {
            for (const auto& task : t) {
                NodeId id = n.find(task.user_id);
                if (id != Network::npos)
                    excluded.push_back(id);
            }
            std::sort(excluded.begin(), excluded.end());
            excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
        }
    }

    // MAP of one task given the facet columns in force.
    double task_map(std::size_t task_idx, std::span<const double> authority,
                    std::span<const double> local) const {
        std::vector<double> aps;
        aps.reserve(query_content[task_idx].size());
        for (const auto* content : query_content[task_idx]) {
            FacetView f{*content, authority, local};
            aps.push_back(ap_from_facets(f, weights, relevant[task_idx]));
        }
        return map_metric(aps);
    }
};

} // namespace detail

// Exhaustive grid search for the weight configuration maximizing mean AP over
// all effective queries of all tasks, on the given facet columns.
inline WeightVector tune_weights_on_full(const detail::SearchContext& ctx,
                                         std::span<const double> authority,
                                         const std::vector<std::span<const double>>& local_by_task,
                                         const WeightGridSpec& grid) {
    const auto wc_axis = grid.axis(grid.pin_wc);
    const auto wg_axis = grid.axis(grid.pin_wg);
    const auto wl_axis = grid.axis(grid.pin_wl);
    bool found = false;
    double best_map = 0.0;
    WeightVector best;
    for (double wc : wc_axis) {
        for (double wg : wg_axis) {
            for (double wl : wl_axis) {
                if (wc == 0.0 && wg == 0.0 && wl == 0.0)
                    continue;
                const WeightVector w{wc, wg, wl};
                double sum = 0.0;
                std::size_t count = 0;
                for (std::size_t ti = 0; ti < ctx.tasks->size(); ++ti) {
                    for (const auto* content : ctx.query_content[ti]) {
                        FacetView f{*content, authority, local_by_task[ti]};
                        sum += ap_from_facets(f, w, ctx.relevant[ti]);
                        ++count;
                    }
                }
                const double mean = sum / static_cast<double>(count);
                if (!found || mean > best_map) {
                    found = true;
                    best_map = mean;
                    best = w;
                }
            }
        }
    }
    if (!found)
        throw std::invalid_argument("tune: grid contains only the all-zero vector");
    return best;
}

// Core sweep over pre-loaded inputs. For global_mae, corpus and tasks may be
// empty. Emits baseline rows first, then one row per (cell, run, metric) in
// canonical cell order.
inline ResultTable run_experiment(const SweepConfig& cfg, const Network& net,
                                  const Corpus& corpus, const std::vector<QueryTask>& tasks) {
    cfg.validate();
    const std::string name = to_string(cfg.kind);
    const auto lambdas = cfg.effective_lambdas();
    const auto pbs = cfg.effective_pb();
    const auto pcs = cfg.effective_pc();
    const std::uint64_t kind_tag = static_cast<std::uint64_t>(cfg.kind) + 1;

    ResultTable table;

    if (cfg.kind == ExperimentKind::global_mae) {
        const PrivacyView full = PrivacyView::full(net);
        const AuthorityMap truth = pagerank(full, cfg.pagerank_options);
        const std::size_t jobs = lambdas.size() * pbs.size();
        std::vector<ResultTable> slots(jobs);
        detail::run_jobs(jobs, cfg.threads, [&](std::size_t j) {
            const std::size_t li = j / pbs.size();
            const std::size_t pi = j % pbs.size();
            ResultTable& rows = slots[j];
            try {
                for (int run = 0; run < cfg.runs; ++run) {
                    const std::uint64_t seed =
                        derive_seed(cfg.master_seed, detail::seed_tag_sample, kind_tag, li,
                                    static_cast<std::uint64_t>(run));
                    const auto u = sample_private_set(net, lambdas[li], pbs[pi], seed);
                    const PrivacyView view(net, u, cfg.edge_visibility);
                    const AuthorityMap degraded = pagerank(view, cfg.pagerank_options);
                    rows.push_back(ResultRow{name, lambdas[li], pbs[pi], std::nullopt, run, "mae",
                                             mae(truth, degraded)});
                }
            } catch (...) {
                detail::rethrow_with_cell(name, "(lambda=" + std::to_string(lambdas[li]) +
                                                    ", pb=" + std::to_string(pbs[pi]) + ")");
            }
        });
        for (auto& rows : slots)
            table.insert(table.end(), rows.begin(), rows.end());
        return table;
    }

    // search experiments
    if (tasks.empty())
        throw std::invalid_argument("sweep: search experiments need a task set");
    detail::SearchContext ctx;
    ctx.build(net, corpus, tasks, cfg, cfg.exclude_querying_users);

    const PrivacyView full = PrivacyView::full(net);
    std::vector<double> full_authority_col;
    if (ctx.use_authority() || cfg.tune)
        full_authority_col = authority_facet(pagerank(full, cfg.pagerank_options));
    std::vector<std::vector<double>> full_local_cols(tasks.size());
    for (std::size_t ti = 0; ti < tasks.size(); ++ti)
        full_local_cols[ti] = local_facet(ctx.full_conns[ti], full, cfg.local_sim);

    if (cfg.tune) {
        WeightGridSpec grid;
        grid.step = cfg.grid_step;
        if (cfg.kind == ExperimentKind::global_search)
            grid.pin_wl = 0.0;
        else
            grid.pin_wg = 0.0;
        std::vector<std::span<const double>> locals;
        for (auto& col : full_local_cols)
            locals.emplace_back(col);
        std::span<const double> auth =
            full_authority_col.empty() ? std::span<const double>(ctx.zeros) : full_authority_col;
        ctx.weights = tune_weights_on_full(ctx, auth, locals, grid);
    }

    const auto auth_col_or_zeros = [&]() -> std::span<const double> {
        return ctx.use_authority() ? std::span<const double>(full_authority_col)
                                   : std::span<const double>(ctx.zeros);
    };

    // baseline rows
    if (cfg.kind == ExperimentKind::user_privacy) {
        std::vector<double> task_maps_full(tasks.size());
        std::vector<double> task_maps_none(tasks.size());
        const UserConnections no_conns;
        std::vector<double> none_col = local_facet(no_conns, full, cfg.local_sim);
        double sum_full = 0.0, sum_none = 0.0;
        for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
            task_maps_full[ti] = ctx.task_map(ti, auth_col_or_zeros(), full_local_cols[ti]);
            task_maps_none[ti] = ctx.task_map(ti, auth_col_or_zeros(), none_col);
            sum_full += task_maps_full[ti];
            sum_none += task_maps_none[ti];
        }
        table.push_back(ResultRow{name, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                                  "map_full_social", sum_full / static_cast<double>(tasks.size())});
        for (std::size_t ti = 0; ti < tasks.size(); ++ti)
            table.push_back(ResultRow{name, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                                      "map_full_social_task_" + std::to_string(ti),
                                      task_maps_full[ti]});
        table.push_back(ResultRow{name, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                                  "map_no_social", sum_none / static_cast<double>(tasks.size())});
        for (std::size_t ti = 0; ti < tasks.size(); ++ti)
            table.push_back(ResultRow{name, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                                      "map_no_social_task_" + std::to_string(ti),
                                      task_maps_none[ti]});
    } else {
        double sum = 0.0;
        std::vector<double> task_maps(tasks.size());
        for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
            task_maps[ti] = ctx.task_map(ti, auth_col_or_zeros(),
                                         ctx.use_local() ? std::span<const double>(full_local_cols[ti])
                                                         : std::span<const double>(ctx.zeros));
            sum += task_maps[ti];
        }
        table.push_back(ResultRow{name, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                                  "map_full", sum / static_cast<double>(tasks.size())});
        for (std::size_t ti = 0; ti < tasks.size(); ++ti)
            table.push_back(ResultRow{name, std::nullopt, std::nullopt, std::nullopt, std::nullopt,
                                      "map_full_task_" + std::to_string(ti), task_maps[ti]});
    }

    if (cfg.kind == ExperimentKind::user_privacy) {
        const std::size_t jobs = pcs.size();
        std::vector<ResultTable> slots(jobs);
        detail::run_jobs(jobs, cfg.threads, [&](std::size_t j) {
            ResultTable& rows = slots[j];
            const double pc = pcs[j];
            try {
                for (int run = 0; run < cfg.runs; ++run) {
                    double sum = 0.0;
                    std::vector<double> task_maps(tasks.size());
                    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
                        const std::uint64_t seed =
                            derive_seed(cfg.master_seed, detail::seed_tag_mask, kind_tag,
                                        static_cast<std::uint64_t>(run), ti);
                        const auto kept =
                            mask_user_connections(tasks[ti].user_connections, pc, seed);
                        const UserConnections conns = UserConnections::resolve(kept, net);
                        const std::vector<double> local_col = local_facet(conns, full, cfg.local_sim);
                        task_maps[ti] = ctx.task_map(ti, auth_col_or_zeros(), local_col);
                        sum += task_maps[ti];
                    }
                    rows.push_back(ResultRow{name, std::nullopt, std::nullopt, pc, run, "map",
                                             sum / static_cast<double>(tasks.size())});
                    for (std::size_t ti = 0; ti < tasks.size(); ++ti)
                        rows.push_back(ResultRow{name, std::nullopt, std::nullopt, pc, run,
                                                 "map_task_" + std::to_string(ti), task_maps[ti]});
                }
            } catch (...) {
                detail::rethrow_with_cell(name, "(pc=" + std::to_string(pc) + ")");
            }
        });
        for (auto& rows : slots)
            table.insert(table.end(), rows.begin(), rows.end());
        return table;
    }

    // candidate-privacy search sweeps
    const std::size_t jobs = lambdas.size() * pbs.size();
    std::vector<ResultTable> slots(jobs);
    detail::run_jobs(jobs, cfg.threads, [&](std::size_t j) {
        const std::size_t li = j / pbs.size();
        const std::size_t pi = j % pbs.size();
        ResultTable& rows = slots[j];
        try {
            for (int run = 0; run < cfg.runs; ++run) {
                const std::uint64_t seed =
                    derive_seed(cfg.master_seed, detail::seed_tag_sample, kind_tag, li,
                                static_cast<std::uint64_t>(run));
                const auto u = sample_private_set(net, lambdas[li], pbs[pi], seed, ctx.excluded);
                const PrivacyView view(net, u, cfg.edge_visibility);
                std::vector<double> auth_col;
                if (ctx.use_authority())
                    auth_col = authority_facet(pagerank(view, cfg.pagerank_options));
                std::span<const double> auth = ctx.use_authority()
                                                   ? std::span<const double>(auth_col)
                                                   : std::span<const double>(ctx.zeros);
                double sum = 0.0;
                std::vector<double> task_maps(tasks.size());
                for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
                    std::vector<double> local_col;
                    std::span<const double> local = ctx.zeros;
                    if (ctx.use_local()) {
                        local_col = local_facet(ctx.full_conns[ti], view, cfg.local_sim);
                        local = local_col;
                    }
                    task_maps[ti] = ctx.task_map(ti, auth, local);
                    sum += task_maps[ti];
                }
                rows.push_back(ResultRow{name, lambdas[li], pbs[pi], std::nullopt, run, "map",
                                         sum / static_cast<double>(tasks.size())});
                for (std::size_t ti = 0; ti < tasks.size(); ++ti)
                    rows.push_back(ResultRow{name, lambdas[li], pbs[pi], std::nullopt, run,
                                             "map_task_" + std::to_string(ti), task_maps[ti]});
            }
        } catch (...) {
            detail::rethrow_with_cell(name, "(lambda=" + std::to_string(lambdas[li]) +
                                                ", pb=" + std::to_string(pbs[pi]) + ")");
        }
    });
    for (auto& rows : slots)
        table.insert(table.end(), rows.begin(), rows.end());
    return table;
}

// Convenience entry point that loads the configured input files first.
inline ResultTable run_experiment(const SweepConfig& cfg) {
    cfg.validate();
    if (cfg.edges_path.empty())
        throw std::invalid_argument("sweep: edges path not set");
    const Network net = load_edges(cfg.edges_path);
    Corpus corpus;
    std::vector<QueryTask> tasks;
    if (cfg.is_search()) {
        if (cfg.publications_path.empty() || cfg.tasks_path.empty())
            throw std::invalid_argument("sweep: search experiments need publications and tasks");
        corpus = load_publications(cfg.publications_path);
        tasks = load_tasks(cfg.tasks_path);
    }
    return run_experiment(cfg, net, corpus, tasks);
}

} // namespace privsearch
