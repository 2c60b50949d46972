#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "privsearch/sweep.hpp"
#include "privsearch/synth.hpp"

// Flat key = value configuration files ('#' comments, comma-separated lists).
// Unknown keys are rejected so typos fail loudly. Command-line flags override
// file values.

namespace privsearch {

class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("config: cannot open '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_text(ss.str(), path);
    }

    static KeyValueConfig parse_text(const std::string& text, const std::string& origin = "<text>") {
        KeyValueConfig cfg;
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            const auto strip = [](std::string s) {
                const auto a = s.find_first_not_of(" \t\r");
                if (a == std::string::npos)
                    return std::string();
                const auto b = s.find_last_not_of(" \t\r");
                return s.substr(a, b - a + 1);
            };
            if (strip(line).empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config: " + origin + ":" + std::to_string(line_no) +
                                         ": expected key = value");
            const std::string key = strip(line.substr(0, eq));
            const std::string value = strip(line.substr(eq + 1));
            if (key.empty())
                throw std::runtime_error("config: " + origin + ":" + std::to_string(line_no) +
                                         ": empty key");
            cfg.values_[key] = value;
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) const { return values_.at(key); }

    double get_double(const std::string& key) const {
        return parse_double(values_.at(key), key);
    }

    long get_int(const std::string& key) const {
        const std::string& s = values_.at(key);
        long v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw std::runtime_error("config: key '" + key + "': bad integer '" + s + "'");
        return v;
    }

    bool get_bool(const std::string& key) const {
        const std::string& s = values_.at(key);
        if (s == "true" || s == "1" || s == "yes")
            return true;
        if (s == "false" || s == "0" || s == "no")
            return false;
        throw std::runtime_error("config: key '" + key + "': bad boolean '" + s + "'");
    }

    std::vector<double> get_double_list(const std::string& key) const {
        const std::string& s = values_.at(key);
        std::vector<double> out;
        std::string cur;
        auto flush = [&] {
            const auto a = cur.find_first_not_of(" \t");
            if (a == std::string::npos) {
                cur.clear();
                return;
            }
            const auto b = cur.find_last_not_of(" \t");
            out.push_back(parse_double(cur.substr(a, b - a + 1), key));
            cur.clear();
        };
        for (char c : s) {
            if (c == ',')
                flush();
            else
                cur.push_back(c);
        }
        flush();
        if (out.empty())
            throw std::runtime_error("config: key '" + key + "': empty list");
        return out;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    static double parse_double(const std::string& s, const std::string& key) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw std::runtime_error("config: key '" + key + "': bad number '" + s + "'");
        return v;
    }

    std::map<std::string, std::string> values_;
};

// Applies a config file to a sweep configuration. Recognized keys are the
// documented run-stage keys; anything else is an error.
inline void apply_config(const KeyValueConfig& kv, SweepConfig& cfg) {
    for (const auto& [key, value] : kv.values()) {
        (void)value;
        if (key == "experiment")
            cfg.kind = experiment_from_string(kv.get_string(key));
        else if (key == "edges")
            cfg.edges_path = kv.get_string(key);
        else if (key == "publications")
            cfg.publications_path = kv.get_string(key);
        else if (key == "tasks")
            cfg.tasks_path = kv.get_string(key);
        else if (key == "out")
            cfg.out_dir = kv.get_string(key);
        else if (key == "lambda")
            cfg.lambdas = kv.get_double_list(key);
        else if (key == "pb")
            cfg.pb_values = kv.get_double_list(key);
        else if (key == "pc")
            cfg.pc_values = kv.get_double_list(key);
        else if (key == "runs")
            cfg.runs = static_cast<int>(kv.get_int(key));
        else if (key == "seed")
            cfg.master_seed = static_cast<std::uint64_t>(kv.get_int(key));
        else if (key == "threads")
            cfg.threads = static_cast<int>(kv.get_int(key));
        else if (key == "weights") {
            const auto w = kv.get_double_list(key);
            if (w.size() != 3)
                throw std::runtime_error("config: weights needs exactly w_c, w_g, w_l");
            cfg.weights = WeightVector{w[0], w[1], w[2]};
        } else if (key == "tune")
            cfg.tune = kv.get_bool(key);
        else if (key == "grid_step")
            cfg.grid_step = kv.get_double(key);
        else if (key == "damping")
            cfg.pagerank_options.damping = kv.get_double(key);
        else if (key == "tolerance")
            cfg.pagerank_options.tolerance = kv.get_double(key);
        else if (key == "max_iter")
            cfg.pagerank_options.max_iter = static_cast<int>(kv.get_int(key));
        else if (key == "edge_visibility") {
            const std::string v = kv.get_string(key);
            if (v == "both_public")
                cfg.edge_visibility = EdgeVisibility::both_public;
            else if (v == "either_public")
                cfg.edge_visibility = EdgeVisibility::either_public;
            else
                throw std::runtime_error("config: edge_visibility must be both_public or "
                                         "either_public");
        } else if (key == "local_sim") {
            const std::string v = kv.get_string(key);
            if (v == "jaccard")
                cfg.local_sim = LocalSimMode::jaccard;
            else if (v == "user_normalized")
                cfg.local_sim = LocalSimMode::user_normalized;
            else
                throw std::runtime_error("config: local_sim must be jaccard or user_normalized");
        } else if (key == "exclude_querying_users")
            cfg.exclude_querying_users = kv.get_bool(key);
        else
            throw std::runtime_error("config: unknown key '" + key + "'");
    }
}

} // namespace privsearch
