#include "catch_amalgamated.hpp"

#include <filesystem>

#include "privsearch/config.hpp"
#include "privsearch/report.hpp"
#include "privsearch/sweep.hpp"
#include "privsearch/synth.hpp"
#include "support/temp.hpp"

using namespace privsearch;

namespace {

struct SmallData {
    Network net;
    Corpus corpus;
    std::vector<QueryTask> tasks;
};

const SmallData& small_data() {
    static SmallData data = [] {
        SynthSpec spec;
        spec.n = 2000;
        spec.m = 5;
        spec.vocab_size = 6000;
        spec.n_tasks = 4;
        spec.seed = 12;
        SmallData d{ba_graph(spec), Corpus{}, {}};
        SynthDataset ds = synth_tasks(d.net, spec);
        d.corpus = std::move(ds.corpus);
        d.tasks = std::move(ds.tasks);
        return d;
    }();
    return data;
}

Network tiny_graph() {
    SynthSpec spec;
    spec.n = 200;
    spec.m = 3;
    spec.seed = 31;
    return ba_graph(spec);
}

} // namespace

TEST_CASE("the default authority sweep emits exactly one row per cell and run") {
    SweepConfig cfg;
    cfg.kind = ExperimentKind::global_mae;
    Network net = tiny_graph();
    auto table = run_experiment(cfg, net, Corpus{}, {});
    CHECK(table.size() == 5 * 9 * 10); // 450 rows, no baseline rows for MAE
    for (const auto& r : table) {
        CHECK(r.metric == "mae");
        CHECK(r.run.has_value());
    }
    auto summary = summarize(table);
    CHECK(summary.size() == 45);
    for (const auto& s : summary) {
        CHECK(s.n_runs == 10);
        CHECK_FALSE(s.p_value_vs_baseline.has_value());
    }
}

TEST_CASE("an empty privacy set produces zero authority error") {
    SweepConfig cfg;
    cfg.kind = ExperimentKind::global_mae;
    cfg.lambdas = {1.0};
    cfg.pb_values = {0.0};
    cfg.runs = 3;
    Network net = tiny_graph();
    auto table = run_experiment(cfg, net, Corpus{}, {});
    REQUIRE(table.size() == 3);
    for (const auto& r : table)
        CHECK(r.value == 0.0);
}

TEST_CASE("p_b = 0 search cells equal the full-network baseline exactly") {
    const auto& data = small_data();
    for (auto kind : {ExperimentKind::global_search, ExperimentKind::local_search}) {
        SweepConfig cfg;
        cfg.kind = kind;
        cfg.lambdas = {1.0};
        cfg.pb_values = {0.0};
        cfg.runs = 2;
        auto table = run_experiment(cfg, data.net, data.corpus, data.tasks);
        double baseline = -1.0;
        for (const auto& r : table)
            if (r.metric == "map_full")
                baseline = r.value;
        REQUIRE(baseline >= 0.0);
        int checked = 0;
        for (const auto& r : table) {
            if (r.metric == "map" && r.run.has_value()) {
                CHECK(r.value == baseline); // bitwise equal: same inputs, same code path
                ++checked;
            }
        }
        CHECK(checked == 2);
    }
}

TEST_CASE("complete and absent user information hit the exact bounds") {
    const auto& data = small_data();
    SweepConfig cfg;
    cfg.kind = ExperimentKind::user_privacy;
    cfg.pc_values = {0.0, 1.0};
    cfg.runs = 2;
    auto table = run_experiment(cfg, data.net, data.corpus, data.tasks);
    double full = -1.0, none = -1.0;
    for (const auto& r : table) {
        if (r.metric == "map_full_social")
            full = r.value;
        if (r.metric == "map_no_social")
            none = r.value;
    }
    REQUIRE(full >= none);
    for (const auto& r : table) {
        if (r.metric != "map" || !r.run.has_value())
            continue;
        if (*r.pc == 1.0)
            CHECK(r.value == full);
        else
            CHECK(r.value == none);
    }
}

TEST_CASE("worker count does not change the result table") {
    const auto& data = small_data();
    SweepConfig cfg;
    cfg.kind = ExperimentKind::global_search;
    cfg.lambdas = {-1.0, 1.0};
    cfg.pb_values = {0.2, 0.6};
    cfg.runs = 3;
    cfg.threads = 1;
    auto serial = run_experiment(cfg, data.net, data.corpus, data.tasks);
    cfg.threads = 4;
    auto parallel = run_experiment(cfg, data.net, data.corpus, data.tasks);
    CHECK(serial == parallel);
}

TEST_CASE("sampling failures surface the cell coordinates") {
    const auto& data = small_data();
    SweepConfig cfg;
    cfg.kind = ExperimentKind::local_search;
    cfg.lambdas = {0.0};
    cfg.pb_values = {1.0}; // impossible: querying users are excluded from the pool
    cfg.runs = 1;
    try {
        run_experiment(cfg, data.net, data.corpus, data.tasks);
        FAIL("expected a cell failure");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("local_search cell") != std::string::npos);
        CHECK(msg.find("pb=1") != std::string::npos);
    }
}

TEST_CASE("result tables survive the CSV round trip") {
    const auto& data = small_data();
    SweepConfig cfg;
    cfg.kind = ExperimentKind::user_privacy;
    cfg.pc_values = {0.3};
    cfg.runs = 2;
    auto table = run_experiment(cfg, data.net, data.corpus, data.tasks);
    testsupport::TempDir tmp;
    const auto path = tmp.write_file("results.csv", results_csv_text(table));
    auto parsed = read_results_csv(path);
    CHECK(parsed == table);
}

TEST_CASE("reports are deterministic and atomic") {
    Network net = tiny_graph();
    SweepConfig cfg;
    cfg.kind = ExperimentKind::global_mae;
    cfg.lambdas = {0.0, 1.0};
    cfg.pb_values = {0.2, 0.5};
    cfg.runs = 2;
    auto table = run_experiment(cfg, net, Corpus{}, {});

    testsupport::TempDir tmp;
    const auto dir1 = (tmp.path() / "r1").string();
    const auto dir2 = (tmp.path() / "r2").string();
    emit_report(table, dir1);
    emit_report(table, dir2);
    for (const char* name : {"results.csv", "summary.csv", "fig_global_mae.svg"}) {
        const auto a = testsupport::read_file(dir1 + "/" + name);
        const auto b = testsupport::read_file(dir2 + "/" + name);
        REQUIRE(!a.empty());
        CHECK(a == b);
    }
    CHECK_FALSE(std::filesystem::exists(dir1 + std::string("/results.csv.tmp")));
}

TEST_CASE("an unwritable output directory fails before any file is written") {
    Network net = tiny_graph();
    SweepConfig cfg;
    cfg.kind = ExperimentKind::global_mae;
    cfg.lambdas = {0.0};
    cfg.pb_values = {0.2};
    cfg.runs = 1;
    auto table = run_experiment(cfg, net, Corpus{}, {});
    testsupport::TempDir tmp;
    const auto blocker = tmp.write_file("blocker", "not a directory");
    CHECK_THROWS_AS(emit_report(table, blocker + "/out"), std::runtime_error);
    CHECK_FALSE(std::filesystem::exists(blocker + "/out/results.csv"));
}

TEST_CASE("search sweeps attach Wilcoxon p-values against the baseline") {
    const auto& data = small_data();
    SweepConfig cfg;
    cfg.kind = ExperimentKind::local_search;
    cfg.lambdas = {1.0};
    cfg.pb_values = {0.6};
    cfg.runs = 3;
    auto table = run_experiment(cfg, data.net, data.corpus, data.tasks);
    auto summary = summarize(table);
    bool found_map_cell = false;
    for (const auto& s : summary) {
        if (s.metric == "map" && s.pb.has_value()) {
            found_map_cell = true;
            // 4 tasks only: p-value needs 5 nonzero diffs, so it may be absent,
            // but when present it must be a probability
            if (s.p_value_vs_baseline) {
                CHECK(*s.p_value_vs_baseline >= 0.0);
                CHECK(*s.p_value_vs_baseline <= 1.0);
            }
        }
    }
    CHECK(found_map_cell);
}

TEST_CASE("config files parse, apply, and reject unknown keys") {
    const std::string text = "# sweep configuration\n"
                             "experiment = local_search\n"
                             "lambda = -1.0, 0.0, 1.0\n"
                             "pb = 0.1, 0.5\n"
                             "runs = 4\n"
                             "seed = 99\n"
                             "weights = 1.0, 0.0, 0.082\n"
                             "edge_visibility = either_public\n"
                             "local_sim = user_normalized\n"
                             "exclude_querying_users = false\n"
                             "tolerance = 1e-8\n";
    auto kv = KeyValueConfig::parse_text(text);
    SweepConfig cfg;
    apply_config(kv, cfg);
    CHECK(cfg.kind == ExperimentKind::local_search);
    CHECK(cfg.lambdas == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(cfg.pb_values == std::vector<double>{0.1, 0.5});
    CHECK(cfg.runs == 4);
    CHECK(cfg.master_seed == 99);
    REQUIRE(cfg.weights.has_value());
    CHECK(cfg.weights->w_l == 0.082);
    CHECK(cfg.edge_visibility == EdgeVisibility::either_public);
    CHECK(cfg.local_sim == LocalSimMode::user_normalized);
    CHECK_FALSE(cfg.exclude_querying_users);
    CHECK(cfg.pagerank_options.tolerance == 1e-8);

    auto bad = KeyValueConfig::parse_text("not_a_key = 1\n");
    SweepConfig cfg2;
    CHECK_THROWS_AS(apply_config(bad, cfg2), std::runtime_error);
}

TEST_CASE("per-kind defaults match the reported experiment settings") {
    SweepConfig cfg;
    cfg.kind = ExperimentKind::global_mae;
    CHECK(cfg.effective_lambdas() == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
    cfg.kind = ExperimentKind::global_search;
    CHECK(cfg.effective_lambdas() == std::vector<double>{-1.0, 0.0, 1.0});
    CHECK(cfg.effective_weights() == WeightVector{1.0, 0.1, 0.0});
    cfg.kind = ExperimentKind::local_search;
    CHECK(cfg.effective_weights() == WeightVector{1.0, 0.0, 0.082});
    CHECK(cfg.effective_pb().size() == 9);
    CHECK(cfg.effective_pc().size() == 11);
}
