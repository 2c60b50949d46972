#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "privsearch/sweep.hpp"
#include "privsearch/wilcoxon.hpp"

// Sweep output rendering: results.csv (raw rows), summary.csv (per-cell means
// with Wilcoxon p-values against the experiment baseline) and one SVG curve
// family per experiment. Every file is written to a temp name and renamed on
// success, and numbers are formatted with shortest-round-trip notation, so a
// given result table always produces byte-identical files.

namespace privsearch {

namespace detail {

inline std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::string format_opt(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

inline std::optional<double> parse_opt_double(const std::string& s) {
    if (s.empty())
        return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("csv: bad number '" + s + "'");
    return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

// Write-then-rename so readers never observe partial output.
inline void commit_file(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw std::runtime_error("report: cannot write '" + tmp.string() + "'");
        out << content;
        if (!out)
            throw std::runtime_error("report: write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

} // namespace detail

inline std::string results_csv_text(const ResultTable& rows) {
    std::string out = "experiment,lambda,pb,pc,run,metric,value\n";
    for (const auto& r : rows) {
        out += r.experiment;
        out += ',';
        out += detail::format_opt(r.lambda);
        out += ',';
        out += detail::format_opt(r.pb);
        out += ',';
        out += detail::format_opt(r.pc);
        out += ',';
        out += r.run ? std::to_string(*r.run) : std::string();
        out += ',';
        out += r.metric;
        out += ',';
        out += detail::format_double(r.value);
        out += '\n';
    }
    return out;
}

inline ResultTable read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_results_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_results_csv: empty file");
    ResultTable rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 7)
            throw std::runtime_error("read_results_csv: line " + std::to_string(line_no) +
                                     ": expected 7 fields");
        ResultRow r;
        r.experiment = f[0];
        r.lambda = detail::parse_opt_double(f[1]);
        r.pb = detail::parse_opt_double(f[2]);
        r.pc = detail::parse_opt_double(f[3]);
        if (!f[4].empty())
            r.run = static_cast<int>(*detail::parse_opt_double(f[4]));
        r.metric = f[5];
        auto v = detail::parse_opt_double(f[6]);
        if (!v)
            throw std::runtime_error("read_results_csv: line " + std::to_string(line_no) +
                                     ": missing value");
        r.value = *v;
        rows.push_back(std::move(r));
    }
    return rows;
}

struct SummaryRow {
    std::string experiment;
    std::optional<double> lambda;
    std::optional<double> pb;
    std::optional<double> pc;
    std::string metric;
    double mean = 0.0;
    double stddev = 0.0;
    int n_runs = 0;
    std::optional<double> p_value_vs_baseline;
};

// Mean/stddev over runs per cell (sample standard deviation; 0 for a single
// run). For the "map" metric of search cells, a Wilcoxon signed-rank p-value
// is attached comparing per-task run means against the experiment's upper
// baseline ("map_full" / "map_full_social"), paired per task. Cells without
// five nonzero paired differences get no p-value.
inline std::vector<SummaryRow> summarize(const ResultTable& rows) {
    struct Key {
        std::string experiment;
        std::optional<double> lambda, pb, pc;
        std::string metric;
        bool operator<(const Key& o) const {
            auto tie = [](const Key& k) {
                return std::make_tuple(k.experiment, k.lambda.has_value(), k.lambda.value_or(0),
                                       k.pb.has_value(), k.pb.value_or(0), k.pc.has_value(),
                                       k.pc.value_or(0), k.metric);
            };
            return tie(*this) < tie(o);
        }
    };
    // order of first appearance keeps the summary aligned with the table
    std::vector<Key> order;
    std::map<Key, std::vector<double>> groups;
    for (const auto& r : rows) {
        Key k{r.experiment, r.lambda, r.pb, r.pc, r.metric};
        auto it = groups.find(k);
        if (it == groups.end()) {
            order.push_back(k);
            it = groups.emplace(k, std::vector<double>{}).first;
        }
        it->second.push_back(r.value);
    }

    // per-task baseline values and per-task cell means, for the p-values
    std::map<std::string, std::map<std::string, double>> baseline_task; // experiment -> task metric suffix -> value
    for (const auto& r : rows) {
        if (r.run.has_value())
            continue;
        const std::string full_prefix =
            r.experiment == "user_privacy" ? "map_full_social_task_" : "map_full_task_";
        if (r.metric.rfind(full_prefix, 0) == 0)
            baseline_task[r.experiment][r.metric.substr(full_prefix.size())] = r.value;
    }

    std::vector<SummaryRow> out;
    for (const auto& k : order) {
        const auto& vals = groups.at(k);
        SummaryRow s;
        s.experiment = k.experiment;
        s.lambda = k.lambda;
        s.pb = k.pb;
        s.pc = k.pc;
        s.metric = k.metric;
        s.n_runs = static_cast<int>(vals.size());
        double sum = 0.0;
        for (double v : vals)
            sum += v;
        s.mean = sum / static_cast<double>(vals.size());
        double ss = 0.0;
        for (double v : vals)
            ss += (v - s.mean) * (v - s.mean);
        s.stddev = vals.size() > 1 ? std::sqrt(ss / static_cast<double>(vals.size() - 1)) : 0.0;

        const bool is_cell = k.lambda.has_value() || k.pb.has_value() || k.pc.has_value();
        if (is_cell && k.metric == "map") {
            auto bit = baseline_task.find(k.experiment);
            if (bit != baseline_task.end()) {
                // per-task means over runs for this cell
                std::map<std::string, std::pair<double, int>> task_means;
                for (const auto& r : rows) {
                    if (r.experiment != k.experiment || r.lambda != k.lambda || r.pb != k.pb ||
                        r.pc != k.pc || !r.run.has_value())
                        continue;
                    if (r.metric.rfind("map_task_", 0) == 0) {
                        auto& acc = task_means[r.metric.substr(9)];
                        acc.first += r.value;
                        acc.second += 1;
                    }
                }
                std::vector<std::pair<double, double>> pairs;
                for (const auto& [task, acc] : task_means) {
                    auto fit = bit->second.find(task);
                    if (fit != bit->second.end() && acc.second > 0)
                        pairs.emplace_back(fit->second, acc.first / acc.second);
                }
                try {
                    s.p_value_vs_baseline =
                        wilcoxon_signed_rank(std::span<const std::pair<double, double>>(pairs))
                            .p_two_sided;
                } catch (const std::invalid_argument&) {
                    // fewer than 5 nonzero differences: leave the field empty
                }
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline std::string summary_csv_text(const std::vector<SummaryRow>& rows) {
    std::string out = "experiment,lambda,pb,pc,metric,mean,stddev,n_runs,p_value_vs_baseline\n";
    for (const auto& r : rows) {
        out += r.experiment;
        out += ',';
        out += detail::format_opt(r.lambda);
        out += ',';
        out += detail::format_opt(r.pb);
        out += ',';
        out += detail::format_opt(r.pc);
        out += ',';
        out += r.metric;
        out += ',';
        out += detail::format_double(r.mean);
        out += ',';
        out += detail::format_double(r.stddev);
        out += ',';
        out += std::to_string(r.n_runs);
        out += ',';
        out += detail::format_opt(r.p_value_vs_baseline);
        out += '\n';
    }
    return out;
}

// ---- SVG curve rendering ----------------------------------------------------

namespace detail {

struct PlotSeries {
    std::string name;
    std::string color;
    std::string dash; // empty = solid
    std::vector<std::pair<double, double>> points;
    bool horizontal = false; // baseline drawn across the whole x range
    double level = 0.0;
};

inline std::string svg_plot(const std::string& title, const std::string& x_label,
                            const std::string& y_label, const std::vector<PlotSeries>& series) {
    const double width = 720, height = 480;
    const double ml = 80, mr = 200, mt = 50, mb = 60;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = 1e300, xmax = -1e300, ymin = 0.0, ymax = -1e300;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymax = std::max(ymax, y);
        }
        if (s.horizontal)
            ymax = std::max(ymax, s.level);
    }
    if (xmax <= xmin) {
        xmin = 0.0;
        xmax = 1.0;
    }
    if (ymax <= ymin)
        ymax = ymin + 1.0;
    ymax *= 1.05;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(width) +
           "\" height=\"" + format_double(height) + "\" viewBox=\"0 0 " + format_double(width) +
           " " + format_double(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + format_double(ml + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" + title + "</text>\n";

    // axes
    svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt + ph) + "\" x2=\"" +
           format_double(ml + pw) + "\" y2=\"" + format_double(mt + ph) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt) + "\" x2=\"" +
           format_double(ml) + "\" y2=\"" + format_double(mt + ph) + "\" stroke=\"black\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / ticks;
        const double fy = ymin + (ymax - ymin) * i / ticks;
        char label[32];
        svg += "<line x1=\"" + format_double(px(fx)) + "\" y1=\"" + format_double(mt + ph) +
               "\" x2=\"" + format_double(px(fx)) + "\" y2=\"" + format_double(mt + ph + 5) +
               "\" stroke=\"black\"/>\n";
        std::snprintf(label, sizeof(label), "%.2g", fx);
        svg += "<text x=\"" + format_double(px(fx)) + "\" y=\"" + format_double(mt + ph + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + label +
               "</text>\n";
        svg += "<line x1=\"" + format_double(ml - 5) + "\" y1=\"" + format_double(py(fy)) +
               "\" x2=\"" + format_double(ml) + "\" y2=\"" + format_double(py(fy)) +
               "\" stroke=\"black\"/>\n";
        std::snprintf(label, sizeof(label), "%.3g", fy);
        svg += "<text x=\"" + format_double(ml - 8) + "\" y=\"" + format_double(py(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + label +
               "</text>\n";
    }
    svg += "<text x=\"" + format_double(ml + pw / 2) + "\" y=\"" +
           format_double(height - 15) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">" + x_label + "</text>\n";
    svg += "<text x=\"20\" y=\"" + format_double(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 20 " + format_double(mt + ph / 2) + ")\">" + y_label +
           "</text>\n";

    double legend_y = mt + 10;
    for (const auto& s : series) {
        std::string path;
        if (s.horizontal) {
            path = "M" + format_double(px(xmin)) + " " + format_double(py(s.level)) + " L" +
                   format_double(px(xmax)) + " " + format_double(py(s.level));
        } else {
            for (std::size_t i = 0; i < s.points.size(); ++i)
                path += (i == 0 ? "M" : " L") + format_double(px(s.points[i].first)) + " " +
                        format_double(py(s.points[i].second));
        }
        svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"2\"" + (s.dash.empty() ? "" : " stroke-dasharray=\"" + s.dash + "\"") +
               "/>\n";
        if (!s.horizontal)
            for (const auto& [x, y] : s.points)
                svg += "<circle cx=\"" + format_double(px(x)) + "\" cy=\"" + format_double(py(y)) +
                       "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
        // legend entry
        svg += "<line x1=\"" + format_double(ml + pw + 15) + "\" y1=\"" + format_double(legend_y) +
               "\" x2=\"" + format_double(ml + pw + 45) + "\" y2=\"" + format_double(legend_y) +
               "\" stroke=\"" + s.color + "\" stroke-width=\"2\"" +
               (s.dash.empty() ? "" : " stroke-dasharray=\"" + s.dash + "\"") + "/>\n";
        svg += "<text x=\"" + format_double(ml + pw + 50) + "\" y=\"" +
               format_double(legend_y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + s.name + "</text>\n";
        legend_y += 20;
    }
    svg += "</svg>\n";
    return svg;
}

inline const char* series_color(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#2ca02c", "#9467bd", "#e377c2", "#17becf",
                                   "#bcbd22", "#8c564b", "#7f7f7f"};
    return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

} // namespace detail

// Renders the curve family of one experiment from its summary rows.
inline std::string plot_svg_for_experiment(const std::string& experiment,
                                           const std::vector<SummaryRow>& summary) {
    const bool user_privacy = experiment == "user_privacy";
    const bool is_mae = experiment == "global_mae";
    const std::string x_label = user_privacy ? "p_c" : "p_b";
    const std::string y_label = is_mae ? "MAE" : "MAP";
    const std::string metric = is_mae ? "mae" : "map";

    std::map<double, std::vector<std::pair<double, double>>> by_lambda;
    std::vector<std::pair<double, double>> pc_curve;
    std::vector<detail::PlotSeries> series;
    for (const auto& r : summary) {
        if (r.experiment != experiment)
            continue;
        if (r.metric == metric) {
            if (user_privacy && r.pc)
                pc_curve.emplace_back(*r.pc, r.mean);
            else if (r.lambda && r.pb)
                by_lambda[*r.lambda].emplace_back(*r.pb, r.mean);
        } else if (r.metric == "map_full") {
            detail::PlotSeries s;
            s.name = "Full Networks";
            s.color = "#d62728";
            s.horizontal = true;
            s.level = r.mean;
            series.push_back(std::move(s));
        } else if (r.metric == "map_full_social") {
            detail::PlotSeries s;
            s.name = "Full Social Info.";
            s.color = "#d62728";
            s.horizontal = true;
            s.level = r.mean;
            series.push_back(std::move(s));
        } else if (r.metric == "map_no_social") {
            detail::PlotSeries s;
            s.name = "No Social Info.";
            s.color = "#7f7f7f";
            s.dash = "6,4";
            s.horizontal = true;
            s.level = r.mean;
            series.push_back(std::move(s));
        }
    }
    std::size_t color_idx = 0;
    for (auto& [lambda, pts] : by_lambda) {
        std::sort(pts.begin(), pts.end());
        detail::PlotSeries s;
        char buf[48];
        std::snprintf(buf, sizeof(buf), "lambda = %+.2g", lambda);
        s.name = buf;
        s.color = detail::series_color(color_idx++);
        s.points = std::move(pts);
        series.push_back(std::move(s));
    }
    if (user_privacy && !pc_curve.empty()) {
        std::sort(pc_curve.begin(), pc_curve.end());
        detail::PlotSeries s;
        s.name = "Partial Social Info.";
        s.color = "#1f77b4";
        s.points = std::move(pc_curve);
        series.push_back(std::move(s));
    }
    const std::string title = is_mae ? "Authority degradation (" + experiment + ")"
                                     : "Search quality (" + experiment + ")";
    return detail::svg_plot(title, x_label, y_label, series);
}

// Writes results.csv, summary.csv, and one fig_<experiment>.svg per
// experiment present in the table. Probes the directory for writability
// before creating anything.
inline void emit_report(const ResultTable& rows, const std::string& out_dir) {
    if (rows.empty())
        throw std::invalid_argument("emit_report: empty result table");
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("emit_report: cannot create '" + out_dir + "': " + ec.message());
    {
        const fs::path probe = dir / ".write_probe";
        std::ofstream p(probe);
        if (!p)
            throw std::runtime_error("emit_report: directory '" + out_dir + "' is not writable");
        p.close();
        fs::remove(probe, ec);
    }

    const auto summary = summarize(rows);
    detail::commit_file(dir / "results.csv", results_csv_text(rows));
    detail::commit_file(dir / "summary.csv", summary_csv_text(summary));

    std::vector<std::string> experiments;
    for (const auto& r : rows)
        if (std::find(experiments.begin(), experiments.end(), r.experiment) == experiments.end())
            experiments.push_back(r.experiment);
    for (const auto& exp : experiments)
        detail::commit_file(dir / ("fig_" + exp + ".svg"), plot_svg_for_experiment(exp, summary));
}

} // namespace privsearch
