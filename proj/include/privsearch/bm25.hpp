#pragma once

#include <cctype>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "privsearch/corpus.hpp"

// Content relevance of a candidate: BM25 of the query against the candidate's
// pseudo-document, the concatenation of titles and abstracts of every paper
// the candidate authored. k1 = 1.2, b = 0.75, idf = ln(1 + (N - df + 0.5) /
// (df + 0.5)) so scores never go negative. Tokens are lowercased maximal
// [a-z0-9] runs, no stemming; query terms are deduplicated.

namespace privsearch {

inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        const unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty())
        out.push_back(std::move(cur));
    return out;
}

class Bm25Index {
public:
    static constexpr double k1 = 1.2;
    static constexpr double b = 0.75;

    explicit Bm25Index(const Corpus& corpus) {
        authors_.reserve(corpus.author_docs().size());
        for (const auto& [author, doc_idx] : corpus.author_docs()) {
            const std::uint32_t a = static_cast<std::uint32_t>(authors_.size());
            authors_.push_back(author);
            author_index_.emplace(author, a);
            std::size_t dl = 0;
            std::unordered_map<std::string, std::uint32_t> tf;
            for (std::size_t di : doc_idx) {
                const Document& d = corpus.documents()[di];
                for (auto&& tok : tokenize(d.title)) {
                    ++tf[tok];
                    ++dl;
                }
                for (auto&& tok : tokenize(d.abstract_text)) {
                    ++tf[tok];
                    ++dl;
                }
            }
            doc_len_.push_back(dl);
            total_len_ += dl;
            for (const auto& [term, count] : tf)
                postings_[term].emplace_back(a, count);
        }
        avgdl_ = authors_.empty() ? 0.0
                                  : static_cast<double>(total_len_) / static_cast<double>(authors_.size());
    }

    std::size_t author_count() const { return authors_.size(); }
    const std::string& author_label(std::uint32_t idx) const { return authors_[idx]; }

    static constexpr std::uint32_t npos = static_cast<std::uint32_t>(-1);
    std::uint32_t find_author(const std::string& label) const {
        auto it = author_index_.find(label);
        return it == author_index_.end() ? npos : it->second;
    }

    // Scores every author pseudo-document against the query; authors without
    // papers are simply absent from the index and score 0.
    std::vector<double> score_all(const std::string& query) const {
        const auto terms = unique_query_terms(query);
        std::vector<double> scores(authors_.size(), 0.0);
        for (const auto& term : terms) {
            auto it = postings_.find(term);
            if (it == postings_.end())
                continue;
            const double idf = idf_of(it->second.size());
            for (const auto& [a, tf] : it->second)
                scores[a] += idf * saturation(tf, doc_len_[a]);
        }
        return scores;
    }

    double score(const std::string& query, const std::string& author) const {
        const auto terms = unique_query_terms(query);
        const std::uint32_t a = find_author(author);
        if (a == npos)
            return 0.0;
        double s = 0.0;
        for (const auto& term : terms) {
            auto it = postings_.find(term);
            if (it == postings_.end())
                continue;
            for (const auto& [idx, tf] : it->second) {
                if (idx == a) {
                    s += idf_of(it->second.size()) * saturation(tf, doc_len_[a]);
                    break;
                }
            }
        }
        return s;
    }

private:
    std::vector<std::string> unique_query_terms(const std::string& query) const {
        auto toks = tokenize(query);
        if (toks.empty())
            throw std::invalid_argument("bm25: empty query");
        std::sort(toks.begin(), toks.end());
        toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
        return toks;
    }

    double idf_of(std::size_t df) const {
        const double n = static_cast<double>(authors_.size());
        const double d = static_cast<double>(df);
        return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
    }

    double saturation(double tf, std::size_t dl) const {
        const double norm = k1 * (1.0 - b + b * static_cast<double>(dl) / avgdl_);
        return tf * (k1 + 1.0) / (tf + norm);
    }

    std::vector<std::string> authors_; // label order (author_docs is a sorted map)
    std::unordered_map<std::string, std::uint32_t> author_index_;
    std::vector<std::size_t> doc_len_;
    std::size_t total_len_ = 0;
    double avgdl_ = 0.0;
    std::unordered_map<std::string, std::vector<std::pair<std::uint32_t, std::uint32_t>>> postings_;
};

// Lazy per-corpus index. A single mutex only guards the first build; after
// that reads are lock-free through the shared_ptr.
inline const Bm25Index& bm25_index(const Corpus& corpus) {
    if (corpus.bm25_cache)
        return *corpus.bm25_cache;
    static std::mutex build_mutex;
    std::lock_guard<std::mutex> lock(build_mutex);
    if (!corpus.bm25_cache)
        corpus.bm25_cache = std::make_shared<const Bm25Index>(corpus);
    return *corpus.bm25_cache;
}

inline double content_score(const Corpus& corpus, const std::string& query,
                            const std::string& candidate) {
    return bm25_index(corpus).score(query, candidate);
}

} // namespace privsearch
