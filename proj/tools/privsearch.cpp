// Command-line driver for the people-search privacy benchmark.
//
//   privsearch synth   — generate a synthetic dataset (edges, publications, tasks)
//   privsearch run     — execute an experiment sweep and write CSV/SVG reports
//   privsearch report  — re-render summary and plots from an existing results.csv
//   privsearch oracle  — run the small-instance brute-force conformance checks

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "privsearch/privsearch.hpp"

namespace {

using namespace privsearch;

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    auto kv = KeyValueConfig::parse_text("v = " + text, flag);
    return kv.get_double_list("v");
}

int cmd_synth(const std::string& out_dir, const SynthSpec& spec) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    Network net = ba_graph(spec);
    SynthDataset data = synth_tasks(net, spec);
    save_edges(net, out_dir + "/edges.tsv");
    save_publications(data.corpus, out_dir + "/publications.jsonl");
    save_tasks(data.tasks, out_dir + "/tasks.json");
    std::printf("wrote %s/{edges.tsv,publications.jsonl,tasks.json}\n", out_dir.c_str());
    std::printf("  nodes=%zu edges=%zu max_degree=%u documents=%zu tasks=%zu\n",
                net.node_count(), net.edge_count(), net.max_degree(),
                data.corpus.documents().size(), data.tasks.size());
    return 0;
}

int cmd_run(const SweepConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    ResultTable table = run_experiment(cfg);
    emit_report(table, cfg.out_dir);
    const auto dt =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    std::printf("experiment=%s rows=%zu elapsed=%.1fs\n", to_string(cfg.kind), table.size(),
                dt.count() / 1000.0);
    std::printf("wrote %s/{results.csv,summary.csv,fig_%s.svg}\n", cfg.out_dir.c_str(),
                to_string(cfg.kind));
    return 0;
}

int cmd_report(const std::string& results_path, const std::string& out_dir) {
    ResultTable table = read_results_csv(results_path);
    emit_report(table, out_dir);
    std::printf("re-rendered %zu rows into %s\n", table.size(), out_dir.c_str());
    return 0;
}

// ---- oracle: small-instance conformance checks -----------------------------

bool check(bool ok, const char* name) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name);
    return ok;
}

bool oracle_sampling() {
    // degrees {1,2,4}, lambda = +1: weights {0.25, 0.5, 1.0}
    const std::vector<double> weights{0.25, 0.5, 1.0};
    const int trials = 100000;
    std::vector<double> first(3, 0.0);
    std::map<std::vector<std::size_t>, double> sets;
    for (int t = 0; t < trials; ++t) {
        auto s = weighted_sample_without_replacement(weights, 2, 90000 + t);
        // replay the first draw: the smallest-seed sample of size 1
        auto f = weighted_sample_without_replacement(weights, 1, 90000 + t);
        first[f[0]] += 1.0;
        sets[s] += 1.0;
    }
    const double expected_first[] = {1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0};
    bool ok = true;
    for (int i = 0; i < 3; ++i)
        ok = ok && std::abs(first[i] / trials - expected_first[i]) < 0.01;
    auto dist = reference::enumerate_sequential_draw(weights, 2);
    std::vector<double> observed, expect;
    for (const auto& [outcome, p] : dist.outcome_prob) {
        expect.push_back(p);
        observed.push_back(sets[outcome]);
    }
    ok = ok && reference::chi_square_gof_pvalue(observed, expect) > 0.01;
    return check(ok, "sequential weighted sampling matches enumeration");
}

bool oracle_pagerank() {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng = make_rng(seed);
        const std::size_t n = 20 + seed;
        std::vector<std::pair<std::string, std::string>> edges;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i)
            labels.push_back("n" + std::to_string(100 + i));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (uniform_double(rng) < 0.12)
                    edges.emplace_back(labels[a], labels[b]);
        Network net = Network::build(edges, labels);
        std::vector<NodeId> u;
        for (NodeId v = 0; v < net.node_count(); ++v)
            if (uniform_double(rng) < 0.25)
                u.push_back(v);
        PrivacyView view(net, u);
        PageRankOptions opt;
        opt.tolerance = 1e-13;
        opt.max_iter = 2000;
        auto pr = pagerank(view, opt);
        auto exact = reference::pagerank_dense(view, opt.damping);
        for (std::size_t i = 0; i < n; ++i)
            ok = ok && std::abs(pr.value[i] - exact[i]) < 1e-8;
    }
    return check(ok, "power iteration matches the dense linear solve");
}

bool oracle_grid() {
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        Rng rng = make_rng(seed);
        FacetVectors f;
        for (int i = 0; i < 10; ++i) {
            f.content.push_back(uniform_double(rng));
            f.authority.push_back(uniform_double(rng) * 0.1);
            f.local.push_back(uniform_double(rng));
        }
        std::vector<NodeId> relevant{0, 4, 7};
        WeightGridSpec grid;
        auto fast = best_weight_ap(f, relevant, grid);
        const double naive =
            reference::naive_grid_best_ap(f, relevant, grid.axis(grid.pin_wc),
                                          grid.axis(grid.pin_wg), grid.axis(grid.pin_wl));
        ok = ok && std::abs(fast.ap - naive) < 1e-12;
    }
    return check(ok, "weight grid search matches the naive loop");
}

bool oracle_wilcoxon() {
    bool ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng = make_rng(seed);
        std::vector<std::pair<double, double>> pairs;
        for (int i = 0; i < 10; ++i)
            pairs.emplace_back(uniform_double(rng), uniform_double(rng));
        auto res = wilcoxon_signed_rank(pairs);
        auto oracle = reference::wilcoxon_enumerate(pairs);
        ok = ok && std::abs(res.p_two_sided - oracle.p_two_sided) < 1e-9;
        ok = ok && res.w_plus == oracle.w_plus;
    }
    return check(ok, "signed-rank test matches exhaustive sign enumeration");
}

int cmd_oracle() {
    bool ok = true;
    ok &= oracle_sampling();
    ok &= oracle_pagerank();
    ok &= oracle_grid();
    ok &= oracle_wilcoxon();
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"privacy-preserving people search benchmark"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    SynthSpec spec;
    std::string synth_out = "data";
    synth->add_option("--out", synth_out, "output directory");
    synth->add_option("--n", spec.n, "node count");
    synth->add_option("--m", spec.m, "edges attached per new node");
    synth->add_option("--vocab", spec.vocab_size, "vocabulary size");
    synth->add_option("--docs-per-author", spec.docs_per_author, "documents per author");
    synth->add_option("--tasks", spec.n_tasks, "number of query tasks");
    synth->add_option("--queries-per-task", spec.queries_per_task, "queries per task");
    synth->add_option("--relevant-per-task", spec.relevant_per_task, "relevant candidates per task");
    synth->add_option("--seed", spec.seed, "generator seed");

    // run
    auto* run = app.add_subcommand("run", "execute an experiment sweep");
    std::string config_path, experiment, lambda_list, pb_list, pc_list, weights_list;
    std::string edges, publications, tasks, out_dir, edge_visibility, local_sim;
    int runs = -1, threads = -1, max_iter = -1;
    double grid_step = -1.0, damping = -1.0, tolerance = -1.0;
    long long seed = -1;
    bool tune = false, include_users = false;
    run->add_option("--config", config_path, "key = value configuration file");
    run->add_option("--experiment", experiment, "global_mae|global_search|local_search|user_privacy");
    run->add_option("--edges", edges, "edge list (tsv)");
    run->add_option("--publications", publications, "publications (jsonl)");
    run->add_option("--tasks", tasks, "query tasks (json)");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--lambda", lambda_list, "comma-separated lambda values");
    run->add_option("--pb", pb_list, "comma-separated p_b values");
    run->add_option("--pc", pc_list, "comma-separated p_c values");
    run->add_option("--runs", runs, "runs per cell");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--threads", threads, "worker threads (0 = hardware)");
    run->add_option("--weights", weights_list, "w_c,w_g,w_l");
    run->add_flag("--tune", tune, "re-derive weights on the full network");
    run->add_option("--grid-step", grid_step, "weight grid step for --tune");
    run->add_option("--damping", damping, "authority damping factor");
    run->add_option("--tolerance", tolerance, "authority L1 stopping threshold");
    run->add_option("--max-iter", max_iter, "authority iteration cap");
    run->add_option("--edge-visibility", edge_visibility, "both_public|either_public");
    run->add_option("--local-sim", local_sim, "jaccard|user_normalized");
    run->add_flag("--include-querying-users", include_users,
                  "allow querying users in the privacy-concerned sample");

    // report
    auto* report = app.add_subcommand("report", "re-render reports from results.csv");
    std::string results_path, report_out = "out";
    report->add_option("--results", results_path, "existing results.csv")->required();
    report->add_option("--out", report_out, "output directory");

    // oracle
    app.add_subcommand("oracle", "run the brute-force conformance checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("synth"))
            return cmd_synth(synth_out, spec);
        if (app.got_subcommand("run")) {
            SweepConfig cfg;
            if (!config_path.empty())
                apply_config(KeyValueConfig::parse_file(config_path), cfg);
            if (!experiment.empty())
                cfg.kind = experiment_from_string(experiment);
            if (!edges.empty())
                cfg.edges_path = edges;
            if (!publications.empty())
                cfg.publications_path = publications;
            if (!tasks.empty())
                cfg.tasks_path = tasks;
            if (!out_dir.empty())
                cfg.out_dir = out_dir;
            if (!lambda_list.empty())
                cfg.lambdas = parse_list(lambda_list, "--lambda");
            if (!pb_list.empty())
                cfg.pb_values = parse_list(pb_list, "--pb");
            if (!pc_list.empty())
                cfg.pc_values = parse_list(pc_list, "--pc");
            if (!weights_list.empty()) {
                auto w = parse_list(weights_list, "--weights");
                if (w.size() != 3)
                    throw std::runtime_error("--weights needs exactly w_c,w_g,w_l");
                cfg.weights = WeightVector{w[0], w[1], w[2]};
            }
            if (runs >= 0)
                cfg.runs = runs;
            if (seed >= 0)
                cfg.master_seed = static_cast<std::uint64_t>(seed);
            if (threads >= 0)
                cfg.threads = threads;
            if (tune)
                cfg.tune = true;
            if (grid_step > 0.0)
                cfg.grid_step = grid_step;
            if (damping > 0.0)
                cfg.pagerank_options.damping = damping;
            if (tolerance > 0.0)
                cfg.pagerank_options.tolerance = tolerance;
            if (max_iter > 0)
                cfg.pagerank_options.max_iter = max_iter;
            if (!edge_visibility.empty())
                cfg.edge_visibility = edge_visibility == "either_public"
                                          ? EdgeVisibility::either_public
                                          : EdgeVisibility::both_public;
            if (!local_sim.empty())
                cfg.local_sim = local_sim == "user_normalized" ? LocalSimMode::user_normalized
                                                               : LocalSimMode::jaccard;
            if (include_users)
                cfg.exclude_querying_users = false;
            return cmd_run(cfg);
        }
        if (app.got_subcommand("report"))
            return cmd_report(results_path, report_out);
        return cmd_oracle();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
