#pragma once

// Mention-pair coreference linker with a uniform trainable mention score.
// Every span gets the same markable score w_m: pair score
//     s(i,j) = 2*w_m + w . f(i,j),      s(i, eps) = 0
// so no per-span mention score gates linking and no candidate is pruned.
// Training maximizes the marginal log-likelihood of gold antecedents;
// inference is per-mention argmax followed by union-find clustering, and
// unlinked mentions come out as singleton chains.

#include <array>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "coref/conll.hpp"
#include "coref/util.hpp"

namespace coref {

struct LinkerMention {
    Span span;
    std::string text;   // lowercased forms joined by spaces
    std::string head;   // lowercased head token (rightmost noun, else last)
    bool is_pronoun = false;
    std::string speaker;
    int index = 0;  // mention index within the document, strictly increasing
};

struct LinkerDocument {
    std::string doc_key;
    std::string genre;
    std::vector<LinkerMention> mentions;  // document order
    std::vector<int> gold_cluster;        // per mention; -1 = not in any gold chain
};

// ---------------------------------------------------------------------------
// Pair features
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& pair_feature_names() {
    static const std::vector<std::string> names = {
        "sent_dist=0",    "sent_dist=1",    "sent_dist=2",     "sent_dist=3",
        "sent_dist=4-7",  "sent_dist=8+",   "ment_dist=1",     "ment_dist=2",
        "ment_dist=3",    "ment_dist=4-7",  "ment_dist=8-15",  "ment_dist=16+",
        "exact_match",    "head_match",     "i_pronoun",       "j_pronoun",
        "both_pronoun",   "same_speaker",   "genre_bias",      "nested"};
    return names;
}

inline constexpr int kPairFeatureWidth = 20;

inline std::array<double, kPairFeatureWidth> pair_features(const LinkerDocument& doc, int i,
                                                           int j) {
    const LinkerMention& mi = doc.mentions[size_t(i)];
    const LinkerMention& mj = doc.mentions[size_t(j)];
    std::array<double, kPairFeatureWidth> f{};

    int sd = mi.span.sentence - mj.span.sentence;
    int sd_bucket = sd == 0 ? 0 : sd == 1 ? 1 : sd == 2 ? 2 : sd == 3 ? 3 : sd <= 7 ? 4 : 5;
    f[size_t(sd_bucket)] = 1.0;

    int md = i - j;
    int md_bucket = md == 1 ? 0 : md == 2 ? 1 : md == 3 ? 2 : md <= 7 ? 3 : md <= 15 ? 4 : 5;
    f[size_t(6 + md_bucket)] = 1.0;

    f[12] = mi.text == mj.text ? 1.0 : 0.0;
    f[13] = mi.head == mj.head ? 1.0 : 0.0;
    f[14] = mi.is_pronoun ? 1.0 : 0.0;
    f[15] = mj.is_pronoun ? 1.0 : 0.0;
    f[16] = (mi.is_pronoun && mj.is_pronoun) ? 1.0 : 0.0;
    f[17] = (!mi.speaker.empty() && mi.speaker == mj.speaker) ? 1.0 : 0.0;
    f[18] = 1.0;  // genre is constant within a document; acts as a bias slot
    bool nested = mi.span.sentence == mj.span.sentence &&
                  ((mi.span.start <= mj.span.start && mj.span.end <= mi.span.end) ||
                   (mj.span.start <= mi.span.start && mi.span.end <= mj.span.end));
    f[19] = nested ? 1.0 : 0.0;
    return f;
}

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

struct LinkerConfig {
    double learning_rate = 0.5;
    int epochs = 200;
    double l2 = 0.0;
    double w_m_init = 0.0;
};

struct LinkerModel {
    std::vector<double> w = std::vector<double>(kPairFeatureWidth, 0.0);
    double w_m = 0.0;
    LinkerConfig config;
    std::vector<double> epoch_loss;  // mean training loss after each epoch
};

// s(i,j); j must precede i in document order.
inline double pair_score(const LinkerModel& model, const LinkerDocument& doc, int i, int j) {
    if (j >= i) throw error(strf("pair_score: antecedent %d does not precede mention %d", j, i));
    auto f = pair_features(doc, i, j);
    double s = 2.0 * model.w_m;
    for (int k = 0; k < kPairFeatureWidth; ++k) s += model.w[size_t(k)] * f[size_t(k)];
    return s;
}

namespace detail {

// Marginal log-likelihood loss and gradient over one document.
// Returns summed loss; accumulates d/dw into gw and d/dw_m into gwm.
inline double doc_loss_grad(const LinkerModel& model, const LinkerDocument& doc,
                            std::vector<double>* gw, double* gwm) {
    double loss = 0.0;
    const int n = int(doc.mentions.size());
    for (int i = 0; i < n; ++i) {
        // scores for {eps} + all real antecedents
        std::vector<double> scores(size_t(i) + 1);
        scores[0] = 0.0;  // eps
        auto feats = std::vector<std::array<double, kPairFeatureWidth>>(size_t(i));
        for (int j = 0; j < i; ++j) {
            feats[size_t(j)] = pair_features(doc, i, j);
            double s = 2.0 * model.w_m;
            for (int k = 0; k < kPairFeatureWidth; ++k)
                s += model.w[size_t(k)] * feats[size_t(j)][size_t(k)];
            scores[size_t(j) + 1] = s;
        }
        std::vector<int> gold;  // indices into scores
        if (doc.gold_cluster[size_t(i)] >= 0)
            for (int j = 0; j < i; ++j)
                if (doc.gold_cluster[size_t(j)] == doc.gold_cluster[size_t(i)])
                    gold.push_back(j + 1);
        if (gold.empty()) gold.push_back(0);  // eps

        double mx = *std::max_element(scores.begin(), scores.end());
        double z_all = 0.0;
        for (double s : scores) z_all += std::exp(s - mx);
        double z_gold = 0.0;
        for (int gi : gold) z_gold += std::exp(scores[size_t(gi)] - mx);
        loss += std::log(z_all) - std::log(z_gold);

        if (!gw) continue;
        for (int idx = 1; idx <= i; ++idx) {
            double p = std::exp(scores[size_t(idx)] - mx) / z_all;
            const auto& f = feats[size_t(idx - 1)];
            for (int k = 0; k < kPairFeatureWidth; ++k) (*gw)[size_t(k)] += p * f[size_t(k)];
            *gwm += 2.0 * p;
        }
        for (int gi : gold) {
            if (gi == 0) continue;
            double q = std::exp(scores[size_t(gi)] - mx) / z_gold;
            const auto& f = feats[size_t(gi - 1)];
            for (int k = 0; k < kPairFeatureWidth; ++k) (*gw)[size_t(k)] -= q * f[size_t(k)];
            *gwm -= 2.0 * q;
        }
    }
    return loss;
}

}  // namespace detail

// Mean loss over all mentions, plus L2 on w. Gradients optional.
inline double linker_loss(const LinkerModel& model, const std::vector<LinkerDocument>& corpus,
                          std::vector<double>* gw = nullptr, double* gwm = nullptr) {
    if (gw) {
        gw->assign(kPairFeatureWidth, 0.0);
        *gwm = 0.0;
    }
    double loss = 0.0;
    long mention_count = 0;
    for (const auto& doc : corpus) {
        if (doc.mentions.empty()) continue;  // zero-mention documents are skipped
        loss += detail::doc_loss_grad(model, doc, gw, gwm);
        mention_count += long(doc.mentions.size());
    }
    if (mention_count == 0) return 0.0;
    loss /= double(mention_count);
    if (gw) {
        for (auto& v : *gw) v /= double(mention_count);
        *gwm /= double(mention_count);
    }
    for (int k = 0; k < kPairFeatureWidth; ++k) {
        loss += 0.5 * model.config.l2 * model.w[size_t(k)] * model.w[size_t(k)];
        if (gw) (*gw)[size_t(k)] += model.config.l2 * model.w[size_t(k)];
    }
    return loss;
}

// Full-batch gradient descent; documents contribute in a fixed order, so the
// result is deterministic.
inline LinkerModel train_linker(const std::vector<LinkerDocument>& corpus,
                                const LinkerConfig& cfg) {
    LinkerModel model;
    model.config = cfg;
    model.w_m = cfg.w_m_init;
    std::vector<double> gw;
    double gwm = 0.0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        linker_loss(model, corpus, &gw, &gwm);
        for (int k = 0; k < kPairFeatureWidth; ++k)
            model.w[size_t(k)] -= cfg.learning_rate * gw[size_t(k)];
        model.w_m -= cfg.learning_rate * gwm;
        model.epoch_loss.push_back(linker_loss(model, corpus));
    }
    return model;
}

// ---------------------------------------------------------------------------
// Inference
// ---------------------------------------------------------------------------

// Argmax antecedent per mention, union-find clustering. Ties among real
// antecedents resolve toward the closer one; a tie with eps resolves to eps.
inline std::vector<Chain> link(const LinkerModel& model, const LinkerDocument& doc) {
    const int n = int(doc.mentions.size());
    auto parent = std::vector<int>(size_t(n));
    for (int i = 0; i < n; ++i) parent[size_t(i)] = i;
    auto find = [&](int x) {
        while (parent[size_t(x)] != x) {
            parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
            x = parent[size_t(x)];
        }
        return x;
    };

    for (int i = 0; i < n; ++i) {
        int best = -1;  // eps
        double best_score = 0.0;
        for (int j = i - 1; j >= 0; --j) {
            double s = pair_score(model, doc, i, j);
            if (s > best_score) {
                best = j;
                best_score = s;
            }
        }
        if (best >= 0) parent[size_t(find(i))] = find(best);
    }

    auto members = std::vector<std::vector<int>>(size_t(n));
    for (int i = 0; i < n; ++i) members[size_t(find(i))].push_back(i);
    std::vector<Chain> chains;
    for (int i = 0; i < n; ++i) {
        if (members[size_t(i)].empty()) continue;
        Chain c;
        c.chain_id = int(chains.size());
        for (int m : members[size_t(i)]) c.mentions.push_back(doc.mentions[size_t(m)].span);
        std::sort(c.mentions.begin(), c.mentions.end());
        chains.push_back(std::move(c));
    }
    std::sort(chains.begin(), chains.end(),
              [](const Chain& a, const Chain& b) { return a.mentions[0] < b.mentions[0]; });
    for (int i = 0; i < int(chains.size()); ++i) chains[size_t(i)].chain_id = i;
    return chains;
}

// ---------------------------------------------------------------------------
// Building linker documents from CoNLL documents + mention span sets
// ---------------------------------------------------------------------------

inline bool pronoun_form(const std::string& lower_form) {
    static const std::set<std::string> forms = {
        "i",    "me",    "my",    "mine",  "we",     "us",   "our",   "ours",  "you",
        "your", "yours", "he",    "him",   "his",    "she",  "her",   "hers",  "it",
        "its",  "they",  "them",  "their", "theirs", "this", "that",  "these", "those",
        "myself", "yourself", "himself", "herself", "itself", "ourselves", "yourselves",
        "themselves"};
    return forms.count(lower_form) > 0;
}

inline LinkerDocument make_linker_document(const Document& doc, const std::set<Span>& mentions) {
    LinkerDocument out;
    out.doc_key = doc.key();
    out.genre = doc.genre;
    for (const Span& sp : mentions) {
        if (sp.sentence < 0 || sp.sentence >= doc.sentence_count() || sp.start < 0 ||
            sp.end >= doc.sentence_length(sp.sentence) || sp.start > sp.end)
            throw error(strf("mention span out of range in %s (sentence %d, %d..%d)",
                             doc.doc_id.c_str(), sp.sentence, sp.start, sp.end));
        LinkerMention m;
        m.span = sp;
        m.text = doc.span_text_lower(sp);
        int head = sp.end;
        for (int t = sp.end; t >= sp.start; --t)
            if (doc.pos(sp.sentence, t).rfind("NN", 0) == 0) {
                head = t;
                break;
            }
        m.head = lower(doc.form(sp.sentence, head));
        const std::string& pos = doc.pos(sp.sentence, sp.start);
        m.is_pronoun = sp.start == sp.end &&
                       (pos == "PRP" || pos == "PRP$" || pronoun_form(lower(doc.form(sp.sentence, sp.start))));
        m.speaker = doc.speaker(sp.sentence, sp.start);
        m.index = int(out.mentions.size());
        out.mentions.push_back(std::move(m));
    }
    out.gold_cluster.assign(out.mentions.size(), -1);
    for (int ci = 0; ci < int(doc.chains.size()); ++ci)
        for (const Span& sp : doc.chains[size_t(ci)].mentions)
            for (std::size_t mi = 0; mi < out.mentions.size(); ++mi)
                if (out.mentions[mi].span == sp) out.gold_cluster[mi] = ci;
    return out;
}

// ---------------------------------------------------------------------------
// Versioned text serialization
// ---------------------------------------------------------------------------

inline std::string serialize_linker(const LinkerModel& m) {
    std::string out = "corefkit linker model v1\n";
    out += "w_m " + fmt_double(m.w_m) + "\n";
    out += strf("config learning_rate %s epochs %d l2 %s\n",
                fmt_double(m.config.learning_rate).c_str(), m.config.epochs,
                fmt_double(m.config.l2).c_str());
    out += "weights " + std::to_string(m.w.size()) + "\n";
    const auto& names = pair_feature_names();
    for (std::size_t k = 0; k < m.w.size(); ++k)
        out += names[k] + " " + fmt_double(m.w[k]) + "\n";
    return out;
}

inline LinkerModel parse_linker(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next = [&]() -> std::string {
        if (!std::getline(in, line)) throw format_error("linker model: truncated file");
        return line;
    };
    if (next() != "corefkit linker model v1")
        throw version_error("linker model: unknown file version");
    LinkerModel m;
    auto f = split_ws(next());
    if (f.size() != 2 || f[0] != "w_m") throw format_error("linker model: bad w_m line");
    m.w_m = to_double(f[1], "w_m");
    f = split_ws(next());
    if (f.size() != 7 || f[0] != "config") throw format_error("linker model: bad config line");
    m.config.learning_rate = to_double(f[2], "learning_rate");
    m.config.epochs = to_int(f[4], "epochs");
    m.config.l2 = to_double(f[6], "l2");
    f = split_ws(next());
    if (f.size() != 2 || f[0] != "weights") throw format_error("linker model: bad weights line");
    int n = to_int(f[1], "weight count");
    if (n != kPairFeatureWidth)
        throw version_error(strf("linker model: expected %d weights, found %d",
                                 kPairFeatureWidth, n));
    const auto& names = pair_feature_names();
    m.w.assign(size_t(n), 0.0);
    for (int k = 0; k < n; ++k) {
        f = split_ws(next());
        if (f.size() != 2 || f[0] != names[size_t(k)])
            throw version_error("linker model: pair feature manifest mismatch at '" + line + "'");
        m.w[size_t(k)] = to_double(f[1], "weight");
    }
    return m;
}

inline void save_linker(const std::string& path, const LinkerModel& m) {
    write_file(path, serialize_linker(m));
}

inline LinkerModel load_linker(const std::string& path) { return parse_linker(read_file(path)); }

}  // namespace coref
