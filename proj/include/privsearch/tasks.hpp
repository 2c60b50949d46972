#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "privsearch/graph.hpp"

namespace privsearch {

struct GroundTruthEntry {
    std::string candidate_id;
    int rating = 0; // 1..5 scale; > 3 counts as relevant
};

// One user-task pair: the querying user, their oracle connection list, the
// effective queries, and the shared graded ground truth.
struct QueryTask {
    std::string user_id;
    std::vector<std::string> user_connections;
    std::vector<std::string> queries;
    std::vector<GroundTruthEntry> ground_truth;

    std::vector<std::string> relevant_labels() const {
        std::vector<std::string> out;
        for (const auto& g : ground_truth)
            if (g.rating > 3)
                out.push_back(g.candidate_id);
        return out;
    }

    // Relevant candidates resolved to dense ids; unknown labels map to npos
    // and count as never-retrieved.
    std::vector<NodeId> relevant_ids(const Network& net) const {
        std::vector<NodeId> out;
        for (const auto& l : relevant_labels())
            out.push_back(net.find(l));
        return out;
    }
};

inline void validate_tasks(const std::vector<QueryTask>& tasks) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& t = tasks[i];
        if (t.queries.empty())
            throw std::runtime_error("tasks: task " + std::to_string(i) + " has no queries");
        if (t.relevant_labels().empty())
            throw std::runtime_error("tasks: task " + std::to_string(i) +
                                     " has no relevant candidates (rating > 3); "
                                     "its queries are not effective");
    }
}

inline std::vector<QueryTask> load_tasks(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_tasks: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("load_tasks: ") + e.what());
    }
    if (!j.is_array())
        throw std::runtime_error("load_tasks: top-level value must be an array");
    std::vector<QueryTask> tasks;
    for (const auto& rec : j) {
        QueryTask t;
        t.user_id = rec.at("user_id").get<std::string>();
        t.user_connections = rec.at("user_connections").get<std::vector<std::string>>();
        t.queries = rec.at("queries").get<std::vector<std::string>>();
        for (const auto& g : rec.at("ground_truth")) {
            GroundTruthEntry e;
            e.candidate_id = g.at("candidate_id").get<std::string>();
            e.rating = g.at("rating").get<int>();
            t.ground_truth.push_back(std::move(e));
        }
        tasks.push_back(std::move(t));
    }
    validate_tasks(tasks);
    return tasks;
}

inline void save_tasks(const std::vector<QueryTask>& tasks, const std::string& path) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : tasks) {
        nlohmann::json rec;
        rec["user_id"] = t.user_id;
        rec["user_connections"] = t.user_connections;
        rec["queries"] = t.queries;
        nlohmann::json gt = nlohmann::json::array();
        for (const auto& g : t.ground_truth)
            gt.push_back({{"candidate_id", g.candidate_id}, {"rating", g.rating}});
        rec["ground_truth"] = std::move(gt);
        arr.push_back(std::move(rec));
    }
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_tasks: cannot open '" + path + "'");
    out << arr.dump(2) << '\n';
}

} // namespace privsearch
