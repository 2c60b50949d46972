#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace privsearch {

class Bm25Index;

struct Document {
    std::string id;
    std::string title;
    std::string abstract_text;
    std::vector<std::string> authors;
};

// Publication collection plus the author -> documents inverse index. Authors
// share the node-id label space of the coauthor network. Immutable after
// construction.
class Corpus {
public:
    Corpus() = default;

    explicit Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
        std::map<std::string, bool> ids;
        for (std::size_t i = 0; i < docs_.size(); ++i) {
            if (!ids.emplace(docs_[i].id, true).second)
                throw std::runtime_error("corpus: duplicate doc id '" + docs_[i].id + "'");
            for (const auto& a : docs_[i].authors)
                author_docs_[a].push_back(i);
        }
    }

    const std::vector<Document>& documents() const { return docs_; }

    // author label -> indices into documents(), ordered by author label
    const std::map<std::string, std::vector<std::size_t>>& author_docs() const {
        return author_docs_;
    }

    const std::vector<std::size_t>* docs_of(const std::string& author) const {
        auto it = author_docs_.find(author);
        return it == author_docs_.end() ? nullptr : &it->second;
    }

    // Lazily built retrieval index; see bm25.hpp.
    mutable std::shared_ptr<const Bm25Index> bm25_cache;

private:
    std::vector<Document> docs_;
    std::map<std::string, std::vector<std::size_t>> author_docs_;
};

// Loads line-delimited JSON records {id, title, abstract, authors}. Records
// with an empty author list are kept but never indexed.
inline Corpus load_publications(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_publications: cannot open '" + path + "'");
    std::vector<Document> docs;
    std::string line;
    std::size_t record = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        ++record;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("load_publications: record " + std::to_string(record) +
                                     ": " + e.what());
        }
        Document d;
        for (const char* field : {"id", "title", "abstract", "authors"})
            if (!j.contains(field))
                throw std::runtime_error("load_publications: record " + std::to_string(record) +
                                         ": missing field '" + field + "'");
        d.id = j.at("id").get<std::string>();
        d.title = j.at("title").get<std::string>();
        d.abstract_text = j.at("abstract").get<std::string>();
        d.authors = j.at("authors").get<std::vector<std::string>>();
        docs.push_back(std::move(d));
    }
    return Corpus(std::move(docs));
}

inline void save_publications(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_publications: cannot open '" + path + "'");
    for (const auto& d : corpus.documents()) {
        nlohmann::json j;
        j["id"] = d.id;
        j["title"] = d.title;
        j["abstract"] = d.abstract_text;
        j["authors"] = d.authors;
        out << j.dump() << '\n';
    }
}

} // namespace privsearch
