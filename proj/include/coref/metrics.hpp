#pragma once

// Coreference evaluation: exact-span mention P/R/F1 and the MUC, B-cubed and
// CEAF_phi4 metrics with their average. CEAF's optimal cluster alignment is
// solved with an O(n^3) Kuhn-Munkres assignment. Corpus-level scores sum
// numerators and denominators across documents (no macro-averaging).
//
// Zero-denominator convention, matching the widely used reference scorer:
// a side with an empty denominator scores 0, unless both sides are empty
// and carry identical mention sets, in which case the score is 1.

#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coref/conll.hpp"
#include "coref/util.hpp"

namespace coref {

struct Prf {
    double p = 0.0;
    double r = 0.0;
    double f1 = 0.0;
};

inline double f1_of(double p, double r) { return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0; }

struct ScoreReport {
    Prf mention;
    long mention_tp = 0;
    long mention_pred = 0;
    long mention_gold = 0;
    Prf muc;
    Prf b3;
    Prf ceaf_phi4;
    double avg_f1 = 0.0;
};

using Clusters = std::vector<std::vector<Span>>;

inline Clusters clusters_from_chains(const std::vector<Chain>& chains,
                                     bool drop_singletons = false) {
    Clusters out;
    for (const auto& c : chains) {
        if (drop_singletons && c.mentions.size() <= 1) continue;
        out.push_back(c.mentions);
    }
    return out;
}

inline std::set<Span> cluster_mentions(const Clusters& cs) {
    std::set<Span> out;
    for (const auto& c : cs) out.insert(c.begin(), c.end());
    return out;
}

// ---------------------------------------------------------------------------
// Mention detection
// ---------------------------------------------------------------------------

struct MentionCounts {
    long tp = 0;
    long pred_total = 0;
    long gold_total = 0;
};

inline Prf mention_prf_from_counts(const MentionCounts& c) {
    Prf out;
    if (c.pred_total == 0 && c.gold_total == 0) return Prf{1.0, 1.0, 1.0};  // perfect vacuous
    out.p = c.pred_total ? double(c.tp) / double(c.pred_total) : 0.0;
    out.r = c.gold_total ? double(c.tp) / double(c.gold_total) : 0.0;
    out.f1 = f1_of(out.p, out.r);
    return out;
}

inline Prf mention_prf(const std::set<Span>& pred, const std::set<Span>& gold,
                       MentionCounts* counts = nullptr) {
    MentionCounts c;
    for (const auto& s : pred)
        if (gold.count(s)) ++c.tp;
    c.pred_total = long(pred.size());
    c.gold_total = long(gold.size());
    if (counts) *counts = c;
    return mention_prf_from_counts(c);
}

// ---------------------------------------------------------------------------
// Per-metric numerator/denominator accumulators
// ---------------------------------------------------------------------------

struct MetricCounts {
    double num_r = 0, den_r = 0;  // recall side (key)
    double num_p = 0, den_p = 0;  // precision side (response)
};

inline Prf finalize_metric(const MetricCounts& m, bool identical_mentions) {
    // both denominators empty + identical mention sets => vacuously perfect
    const bool vac = identical_mentions && m.den_r == 0 && m.den_p == 0;
    Prf out;
    out.r = m.den_r > 0 ? m.num_r / m.den_r : (vac ? 1.0 : 0.0);
    out.p = m.den_p > 0 ? m.num_p / m.den_p : (vac ? 1.0 : 0.0);
    out.f1 = f1_of(out.p, out.r);
    return out;
}

namespace detail {

// number of partitions of key cluster `c` induced by the response clustering
inline int muc_partitions(const std::vector<Span>& c, const std::map<Span, int>& resp_of) {
    std::set<int> touched;
    int unmatched = 0;
    for (const auto& m : c) {
        auto it = resp_of.find(m);
        if (it == resp_of.end())
            ++unmatched;
        else
            touched.insert(it->second);
    }
    return int(touched.size()) + unmatched;
}

inline std::map<Span, int> cluster_index(const Clusters& cs) {
    std::map<Span, int> out;
    for (int i = 0; i < int(cs.size()); ++i)
        for (const auto& m : cs[size_t(i)]) out[m] = i;
    return out;
}

inline void muc_accumulate(const Clusters& key, const Clusters& response, MetricCounts& mc) {
    auto resp_of = cluster_index(response);
    auto key_of = cluster_index(key);
    for (const auto& c : key) {
        mc.num_r += double(int(c.size()) - muc_partitions(c, resp_of));
        mc.den_r += double(c.size() - 1);
    }
    for (const auto& c : response) {
        mc.num_p += double(int(c.size()) - muc_partitions(c, key_of));
        mc.den_p += double(c.size() - 1);
    }
}

inline void b3_accumulate(const Clusters& key, const Clusters& response, MetricCounts& mc) {
    auto resp_of = cluster_index(response);
    auto key_of = cluster_index(key);
    auto side = [](const Clusters& a, const Clusters& b, const std::map<Span, int>& b_of,
                   double& num, double& den) {
        for (const auto& c : a) {
            for (const auto& m : c) {
                den += 1.0;
                auto it = b_of.find(m);
                if (it == b_of.end()) continue;
                const auto& other = b[size_t(it->second)];
                int overlap = 0;
                std::set<Span> mine(c.begin(), c.end());
                for (const auto& x : other)
                    if (mine.count(x)) ++overlap;
                num += double(overlap) / double(c.size());
            }
        }
    };
    side(key, response, resp_of, mc.num_r, mc.den_r);
    side(response, key, key_of, mc.num_p, mc.den_p);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Maximum-weight one-to-one assignment (Kuhn-Munkres with potentials)
// ---------------------------------------------------------------------------

struct Assignment {
    double total = 0.0;
    std::vector<std::pair<int, int>> pairs;  // (row, col), only real cells
};

inline Assignment assignment_max(const std::vector<std::vector<double>>& weights) {
    Assignment out;
    if (weights.empty() || weights[0].empty()) return out;
    const int rows = int(weights.size());
    const int cols = int(weights[0].size());
    const int n = std::max(rows, cols);  // zero-pad to square

    // minimize cost = -weight
    auto cost = [&](int i, int j) -> double {
        if (i < rows && j < cols) return -weights[size_t(i)][size_t(j)];
        return 0.0;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(size_t(n) + 1, 0.0), v(size_t(n) + 1, 0.0);
    std::vector<int> p(size_t(n) + 1, 0), way(size_t(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(size_t(n) + 1, inf);
        std::vector<char> used(size_t(n) + 1, 0);
        do {
            used[size_t(j0)] = 1;
            int i0 = p[size_t(j0)], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[size_t(j)]) continue;
                double cur = cost(i0 - 1, j - 1) - u[size_t(i0)] - v[size_t(j)];
                if (cur < minv[size_t(j)]) {
                    minv[size_t(j)] = cur;
                    way[size_t(j)] = j0;
                }
                if (minv[size_t(j)] < delta) {
                    delta = minv[size_t(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[size_t(j)]) {
                    u[size_t(p[size_t(j)])] += delta;
                    v[size_t(j)] -= delta;
                } else {
                    minv[size_t(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[size_t(j0)] != 0);
        do {
            int j1 = way[size_t(j0)];
            p[size_t(j0)] = p[size_t(j1)];
            j0 = j1;
        } while (j0);
    }
    for (int j = 1; j <= n; ++j) {
        int i = p[size_t(j)];
        if (i >= 1 && i <= rows && j <= cols) {
            out.pairs.emplace_back(i - 1, j - 1);
            out.total += weights[size_t(i - 1)][size_t(j - 1)];
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

inline double phi4(const std::vector<Span>& k, const std::vector<Span>& r) {
    std::set<Span> ks(k.begin(), k.end());
    int overlap = 0;
    for (const auto& m : r)
        if (ks.count(m)) ++overlap;
    return 2.0 * double(overlap) / double(k.size() + r.size());
}

namespace detail {

inline void ceaf_accumulate(const Clusters& key, const Clusters& response, MetricCounts& mc) {
    mc.den_r += double(key.size());
    mc.den_p += double(response.size());
    if (key.empty() || response.empty()) return;
    std::vector<std::vector<double>> w(key.size(), std::vector<double>(response.size(), 0.0));
    for (std::size_t i = 0; i < key.size(); ++i)
        for (std::size_t j = 0; j < response.size(); ++j) w[i][j] = phi4(key[i], response[j]);
    double total = assignment_max(w).total;
    mc.num_r += total;
    mc.num_p += total;
}

inline bool identical_mentions(const Clusters& key, const Clusters& response) {
    return cluster_mentions(key) == cluster_mentions(response);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Per-document metrics
// ---------------------------------------------------------------------------

inline Prf muc(const Clusters& key, const Clusters& response) {
    MetricCounts mc;
    detail::muc_accumulate(key, response, mc);
    return finalize_metric(mc, detail::identical_mentions(key, response));
}

inline Prf b3(const Clusters& key, const Clusters& response) {
    MetricCounts mc;
    detail::b3_accumulate(key, response, mc);
    return finalize_metric(mc, detail::identical_mentions(key, response));
}

inline Prf ceaf_phi4(const Clusters& key, const Clusters& response) {
    MetricCounts mc;
    detail::ceaf_accumulate(key, response, mc);
    return finalize_metric(mc, detail::identical_mentions(key, response));
}

// ---------------------------------------------------------------------------
// Corpus-level scoring
// ---------------------------------------------------------------------------

inline ScoreReport score_clusterings(const std::vector<Clusters>& key_docs,
                                     const std::vector<Clusters>& response_docs) {
    MetricCounts muc_c, b3_c, ceaf_c;
    MentionCounts mention_c;
    bool identical = true;
    for (std::size_t d = 0; d < key_docs.size(); ++d) {
        const Clusters& key = key_docs[d];
        const Clusters& resp = response_docs[d];
        detail::muc_accumulate(key, resp, muc_c);
        detail::b3_accumulate(key, resp, b3_c);
        detail::ceaf_accumulate(key, resp, ceaf_c);
        std::set<Span> km = cluster_mentions(key), rm = cluster_mentions(resp);
        for (const auto& s : rm)
            if (km.count(s)) ++mention_c.tp;
        mention_c.pred_total += long(rm.size());
        mention_c.gold_total += long(km.size());
        identical = identical && km == rm;
    }
    ScoreReport rep;
    rep.mention = mention_prf_from_counts(mention_c);
    rep.mention_tp = mention_c.tp;
    rep.mention_pred = mention_c.pred_total;
    rep.mention_gold = mention_c.gold_total;
    rep.muc = finalize_metric(muc_c, identical);
    rep.b3 = finalize_metric(b3_c, identical);
    rep.ceaf_phi4 = finalize_metric(ceaf_c, identical);
    rep.avg_f1 = (rep.muc.f1 + rep.b3.f1 + rep.ceaf_phi4.f1) / 3.0;
    return rep;
}

// Aligns documents by id; a missing response document scores as empty (with a
// warning on stderr). Extra response documents are ignored with a warning.
inline ScoreReport score_corpus(const std::vector<Document>& key,
                                const std::vector<Document>& response, bool drop_singletons) {
    std::map<std::string, const Document*> resp_by_key;
    for (const auto& d : response) resp_by_key[d.key()] = &d;
    std::set<std::string> seen;
    std::vector<Clusters> key_docs, resp_docs;
    for (const auto& d : key) {
        key_docs.push_back(clusters_from_chains(d.chains, drop_singletons));
        auto it = resp_by_key.find(d.key());
        if (it == resp_by_key.end()) {
            std::fprintf(stderr, "warning: no response document for %s; scoring as empty\n",
                         d.key().c_str());
            resp_docs.push_back({});
        } else {
            seen.insert(d.key());
            resp_docs.push_back(clusters_from_chains(it->second->chains, drop_singletons));
        }
    }
    for (const auto& d : response)
        if (!seen.count(d.key()))
            std::fprintf(stderr, "warning: response document %s has no key document; ignored\n",
                         d.key().c_str());
    return score_clusterings(key_docs, resp_docs);
}

// ---------------------------------------------------------------------------
// Rendering (scores x100, two decimals)
// ---------------------------------------------------------------------------

inline std::string format_score_report(const ScoreReport& r) {
    std::string out;
    out += "            Mention Detection      MUC                    B3                     "
           "CEAF_phi4\n";
    out += "            P      R      F1      P      R      F1      P      R      F1      P   "
           "   R      F1      Avg F1\n";
    out += strf("response    %-6s %-6s %-6s  %-6s %-6s %-6s  %-6s %-6s %-6s  %-6s %-6s %-6s  %s\n",
                pct2(r.mention.p).c_str(), pct2(r.mention.r).c_str(), pct2(r.mention.f1).c_str(),
                pct2(r.muc.p).c_str(), pct2(r.muc.r).c_str(), pct2(r.muc.f1).c_str(),
                pct2(r.b3.p).c_str(), pct2(r.b3.r).c_str(), pct2(r.b3.f1).c_str(),
                pct2(r.ceaf_phi4.p).c_str(), pct2(r.ceaf_phi4.r).c_str(),
                pct2(r.ceaf_phi4.f1).c_str(), pct2(r.avg_f1).c_str());
    out += strf("mention counts: tp=%ld pred=%ld gold=%ld\n", r.mention_tp, r.mention_pred,
                r.mention_gold);
    return out;
}

inline std::string score_report_csv(const ScoreReport& r) {
    std::string out = "metric,p,r,f1\n";
    out += "mention," + pct2(r.mention.p) + "," + pct2(r.mention.r) + "," + pct2(r.mention.f1) + "\n";
    out += "muc," + pct2(r.muc.p) + "," + pct2(r.muc.r) + "," + pct2(r.muc.f1) + "\n";
    out += "b3," + pct2(r.b3.p) + "," + pct2(r.b3.r) + "," + pct2(r.b3.f1) + "\n";
    out += "ceaf_phi4," + pct2(r.ceaf_phi4.p) + "," + pct2(r.ceaf_phi4.r) + "," +
           pct2(r.ceaf_phi4.f1) + "\n";
    out += "avg_f1,,," + pct2(r.avg_f1) + "\n";
    return out;
}

}  // namespace coref
