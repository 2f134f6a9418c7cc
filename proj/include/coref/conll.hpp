#pragma once

// CoNLL-2012-style coreference files. Rows are kept as raw column vectors so
// that unmodelled columns (SRL, NE, word sense) survive a read/write cycle;
// only the coreference column is interpreted and regenerated.

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "coref/util.hpp"

namespace coref {

// Token span, inclusive on both ends, within one sentence.
struct Span {
    int sentence = 0;
    int start = 0;
    int end = 0;
    auto operator<=>(const Span&) const = default;
};

struct Chain {
    int chain_id = 0;
    std::vector<Span> mentions;  // document order
    bool operator==(const Chain&) const = default;
};

struct ConllConfig {
    int coref_column = -1;  // -1: last column
    int form_column = 3;
    int pos_column = 4;
    int speaker_column = 9;
};

struct Document {
    std::string doc_id;
    int part = 0;
    std::string genre;                                       // doc_id prefix before first '/'
    std::vector<std::vector<std::vector<std::string>>> sentences;  // [sentence][token][column]
    std::vector<Chain> chains;                               // gold when read from an annotated file
    std::set<Span> gold_mentions;                            // spans of `chains` at read time
    ConllConfig config;

    std::string key() const { return doc_id + "#" + std::to_string(part); }

    int sentence_count() const { return int(sentences.size()); }
    int sentence_length(int s) const { return int(sentences[size_t(s)].size()); }

    const std::string& column(int s, int t, int col) const {
        static const std::string empty;
        const auto& row = sentences[size_t(s)][size_t(t)];
        if (col < 0 || col >= int(row.size())) return empty;
        return row[size_t(col)];
    }
    const std::string& form(int s, int t) const { return column(s, t, config.form_column); }
    const std::string& pos(int s, int t) const { return column(s, t, config.pos_column); }
    const std::string& speaker(int s, int t) const { return column(s, t, config.speaker_column); }

    std::string span_text_lower(const Span& sp) const {
        std::vector<std::string> forms;
        for (int t = sp.start; t <= sp.end; ++t) forms.push_back(lower(form(sp.sentence, t)));
        return join(forms, " ");
    }

    bool operator==(const Document& o) const {
        return doc_id == o.doc_id && part == o.part && sentences == o.sentences &&
               chains == o.chains;
    }
};

namespace detail {

inline int coref_index(const std::vector<std::string>& row, const ConllConfig& cfg) {
    if (cfg.coref_column >= 0) {
        if (cfg.coref_column >= int(row.size()))
            throw format_error("row has no coreference column " + std::to_string(cfg.coref_column));
        return cfg.coref_column;
    }
    return int(row.size()) - 1;
}

struct OpenBracket {
    int sentence;
    int start;
    int line_no;
    long appearance;
};

}  // namespace detail

inline std::string genre_of(const std::string& doc_id) {
    auto slash = doc_id.find('/');
    return slash == std::string::npos ? doc_id : doc_id.substr(0, slash);
}

inline std::vector<Document> read_conll_text(const std::string& text,
                                             const ConllConfig& cfg = {}) {
    std::vector<Document> docs;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    Document* doc = nullptr;
    std::map<int, std::vector<detail::OpenBracket>> open;  // chain id -> stack
    std::map<int, std::pair<long, std::vector<Span>>> spans_by_chain;
    long appearance = 0;
    std::vector<std::vector<std::string>> sentence;

    auto end_sentence = [&](bool force) {
        if (sentence.empty() && !force) return;
        if (!sentence.empty()) {
            doc->sentences.push_back(sentence);
            sentence.clear();
        }
        for (const auto& [chain, stack] : open) {
            if (!stack.empty())
                throw format_error(strf("unmatched '(%d' in document %s (line %d)", chain,
                                        doc->doc_id.c_str(), stack.back().line_no));
        }
    };

    auto finish_document = [&]() {
        end_sentence(true);
        std::vector<std::pair<long, Chain>> ordered;
        for (auto& [id, entry] : spans_by_chain) {
            Chain c;
            c.chain_id = id;
            c.mentions = entry.second;
            std::sort(c.mentions.begin(), c.mentions.end());
            ordered.emplace_back(entry.first, std::move(c));
        }
        std::sort(ordered.begin(), ordered.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto& [ap, c] : ordered) {
            for (const auto& m : c.mentions) {
                if (doc->gold_mentions.count(m))
                    throw format_error("span appears in two chains in document " + doc->doc_id);
                doc->gold_mentions.insert(m);
            }
            doc->chains.push_back(std::move(c));
        }
        spans_by_chain.clear();
        open.clear();
        doc = nullptr;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = trim(line);
        if (trimmed.rfind("#begin document", 0) == 0) {
            if (doc) throw format_error(strf("nested '#begin document' at line %d", line_no));
            docs.emplace_back();
            doc = &docs.back();
            doc->config = cfg;
            auto lp = trimmed.find('(');
            auto rp = trimmed.find(')', lp == std::string::npos ? 0 : lp);
            if (lp == std::string::npos || rp == std::string::npos)
                throw format_error(strf("malformed '#begin document' at line %d", line_no));
            doc->doc_id = trimmed.substr(lp + 1, rp - lp - 1);
            doc->genre = genre_of(doc->doc_id);
            auto part_at = trimmed.find("part ", rp);
            doc->part = part_at == std::string::npos
                            ? 0
                            : to_int(trim(trimmed.substr(part_at + 5)), "document part");
            continue;
        }
        if (trimmed == "#end document") {
            if (!doc) throw format_error(strf("'#end document' without begin at line %d", line_no));
            finish_document();
            continue;
        }
        if (!doc) {
            if (trimmed.empty()) continue;
            throw format_error(strf("content outside document at line %d", line_no));
        }
        if (trimmed.empty()) {
            end_sentence(false);
            continue;
        }
        if (trimmed[0] == '#') continue;

        std::vector<std::string> cols = split_ws(trimmed);
        if (cols.size() < 2)
            throw format_error(strf("row with fewer than 2 columns at line %d", line_no));
        int token_index = int(sentence.size());
        int sent_index = int(doc->sentences.size());
        const std::string& cell = cols[size_t(detail::coref_index(cols, cfg))];
        sentence.push_back(cols);

        if (cell == "-" || cell == "_") continue;
        for (const std::string& item : split(cell, '|')) {
            if (item.empty())
                throw format_error(strf("empty coreference item at line %d", line_no));
            bool opens = item.front() == '(';
            bool closes = item.back() == ')';
            std::string id_str = item.substr(opens ? 1 : 0,
                                             item.size() - (opens ? 1 : 0) - (closes ? 1 : 0));
            if (!all_digits(id_str))
                throw format_error(strf("malformed coreference item '%s' at line %d",
                                        item.c_str(), line_no));
            int chain = std::stoi(id_str);
            auto& entry = spans_by_chain[chain];
            if (entry.second.empty() && entry.first == 0) entry.first = ++appearance;
            if (opens && closes) {
                entry.second.push_back(Span{sent_index, token_index, token_index});
            } else if (opens) {
                open[chain].push_back({sent_index, token_index, line_no, appearance});
            } else {
                auto& stack = open[chain];
                if (stack.empty())
                    throw format_error(strf("unmatched '%d)' in document %s (line %d)", chain,
                                            doc->doc_id.c_str(), line_no));
                detail::OpenBracket ob = stack.back();
                stack.pop_back();
                entry.second.push_back(Span{ob.sentence, ob.start, token_index});
            }
        }
    }
    if (doc) throw format_error("missing '#end document' for document " + doc->doc_id);
    return docs;
}

inline std::vector<Document> read_conll(const std::string& path, const ConllConfig& cfg = {}) {
    return read_conll_text(read_file(path), cfg);
}

inline std::string write_conll_text(const std::vector<Document>& docs,
                                    bool drop_singletons = false) {
    std::string out;
    for (const auto& doc : docs) {
        // Cell items per (sentence, token). Within a cell: closes first
        // (inner-first), then single-token items, then opens (longest-first),
        // so the reader's most-recent-match rule re-pairs every span.
        using CellItem = std::tuple<int, int, std::string>;
        std::map<std::pair<int, int>, std::vector<CellItem>> cells;
        std::set<Span> seen;
        for (const auto& chain : doc.chains) {
            if (drop_singletons && chain.mentions.size() <= 1) continue;
            for (const auto& m : chain.mentions) {
                if (!seen.insert(m).second)
                    throw format_error(strf("identical span in two chains in document %s",
                                            doc.doc_id.c_str()));
                std::string id = std::to_string(chain.chain_id);
                if (m.start == m.end) {
                    cells[{m.sentence, m.start}].emplace_back(1, chain.chain_id, "(" + id + ")");
                } else {
                    cells[{m.sentence, m.start}].emplace_back(2, -m.end, "(" + id);
                    cells[{m.sentence, m.end}].emplace_back(0, -m.start, id + ")");
                }
            }
        }
        out += strf("#begin document (%s); part %03d\n", doc.doc_id.c_str(), doc.part);
        for (int s = 0; s < doc.sentence_count(); ++s) {
            for (int t = 0; t < doc.sentence_length(s); ++t) {
                auto row = doc.sentences[size_t(s)][size_t(t)];
                int ci = detail::coref_index(row, doc.config);
                auto it = cells.find({s, t});
                if (it == cells.end()) {
                    row[size_t(ci)] = "-";
                } else {
                    auto items = it->second;
                    std::sort(items.begin(), items.end());
                    std::vector<std::string> strs;
                    for (auto& [g, k, v] : items) strs.push_back(v);
                    row[size_t(ci)] = join(strs, "|");
                }
                out += join(row, " ");
                out += '\n';
            }
            out += '\n';
        }
        out += "#end document\n";
    }
    return out;
}

inline void write_conll(const std::string& path, const std::vector<Document>& docs,
                        bool drop_singletons = false) {
    write_file(path, write_conll_text(docs, drop_singletons));
}

// Replace a document's chains (e.g. with linker output).
inline Document with_chains(const Document& doc, std::vector<Chain> chains) {
    Document out = doc;
    out.chains = std::move(chains);
    out.gold_mentions.clear();
    for (const auto& c : out.chains)
        for (const auto& m : c.mentions) out.gold_mentions.insert(m);
    return out;
}

}  // namespace coref
