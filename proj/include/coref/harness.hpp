#pragma once

// Experiment orchestration: union augmentation of mention sets, seeded
// precision/recall perturbation of predicted mentions, sweep curves
// (perturb -> link -> score per target), and heuristic error diagnostics.
//
// Perturbations keep every true positive. Removals/additions are apportioned
// per document proportionally to the document's error count with
// largest-remainder rounding, so corpus-level targets are hit exactly
// (within integer rounding).

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coref/conll.hpp"
#include "coref/linker.hpp"
#include "coref/metrics.hpp"
#include "coref/util.hpp"

namespace coref {

// span sets keyed by "doc_id#part"
using MentionSets = std::map<std::string, std::set<Span>>;

inline MentionSets gold_mention_sets(const std::vector<Document>& docs) {
    MentionSets out;
    for (const auto& d : docs) out[d.key()] = d.gold_mentions;
    return out;
}

// Per-document set union; document id sets must match exactly.
inline MentionSets augment_union(const MentionSets& gold, const MentionSets& predicted) {
    std::vector<std::string> unmatched;
    for (const auto& [k, v] : predicted)
        if (!gold.count(k)) unmatched.push_back(k);
    for (const auto& [k, v] : gold)
        if (!predicted.count(k)) unmatched.push_back(k);
    if (!unmatched.empty())
        throw error("augment_union: unmatched document ids: " + join(unmatched, ", "));
    MentionSets out = gold;
    for (const auto& [k, v] : predicted) out[k].insert(v.begin(), v.end());
    return out;
}

namespace detail {

// exact integer largest-remainder apportionment; ties by document order
inline std::vector<long> largest_remainder(long total, const std::vector<long>& weights) {
    std::vector<long> alloc(weights.size(), 0);
    long wsum = 0;
    for (long w : weights) wsum += w;
    if (wsum == 0 || total == 0) return alloc;
    long assigned = 0;
    std::vector<std::pair<long, std::size_t>> fracs;  // (remainder, index)
    for (std::size_t i = 0; i < weights.size(); ++i) {
        long num = total * weights[i];
        alloc[i] = num / wsum;
        assigned += alloc[i];
        fracs.emplace_back(num % wsum, i);
    }
    std::sort(fracs.begin(), fracs.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (long r = total - assigned, k = 0; r > 0; --r, ++k) alloc[fracs[size_t(k)].second] += 1;
    return alloc;
}

struct SplitSets {
    std::vector<std::string> keys;
    std::vector<std::vector<Span>> hits;    // pred && gold
    std::vector<std::vector<Span>> errors;  // pred\gold (precision) or gold\pred (recall)
    long tp = 0, err = 0, gold_total = 0;
};

inline SplitSets split_sets(const MentionSets& pred, const MentionSets& gold, bool recall_side) {
    SplitSets s;
    std::set<std::string> keys;
    for (const auto& [k, v] : pred) keys.insert(k);
    for (const auto& [k, v] : gold) keys.insert(k);
    for (const auto& k : keys) {
        static const std::set<Span> empty;
        const std::set<Span>& p = pred.count(k) ? pred.at(k) : empty;
        const std::set<Span>& g = gold.count(k) ? gold.at(k) : empty;
        std::vector<Span> hit, err;
        for (const auto& sp : p)
            if (g.count(sp)) hit.push_back(sp);
        if (recall_side) {
            for (const auto& sp : g)
                if (!p.count(sp)) err.push_back(sp);
        } else {
            for (const auto& sp : p)
                if (!g.count(sp)) err.push_back(sp);
        }
        s.keys.push_back(k);
        s.tp += long(hit.size());
        s.err += long(err.size());
        s.gold_total += long(g.size());
        s.hits.push_back(std::move(hit));
        s.errors.push_back(std::move(err));
    }
    return s;
}

inline std::vector<Span> pick(std::vector<Span> pool, long n, rng64& rng) {
    deterministic_shuffle(pool, rng);
    pool.resize(size_t(std::min<long>(n, long(pool.size()))));
    return pool;
}

}  // namespace detail

// Raise precision to target_percent by dropping false positives uniformly at
// random; retained FP count = round(TP*(1-p)/p). True positives are kept.
inline MentionSets perturb_precision(const MentionSets& pred, const MentionSets& gold,
                                     double target_percent, std::uint64_t seed) {
    detail::SplitSets s = detail::split_sets(pred, gold, false);
    const double p = target_percent / 100.0;
    if (p <= 0.0 || p > 1.0) throw error("perturb_precision: target must be in (0, 100]");
    long pred_total = s.tp + s.err;
    double current = pred_total ? double(s.tp) / double(pred_total) : 1.0;
    if (p < current - 1e-12)
        throw error(strf("perturb_precision: target %.2f below current precision %.2f",
                         target_percent, current * 100.0));
    long keep_total = std::lround(double(s.tp) * (1.0 - p) / p);
    std::vector<long> weights;
    for (const auto& e : s.errors) weights.push_back(long(e.size()));
    std::vector<long> alloc = detail::largest_remainder(keep_total, weights);

    MentionSets out;
    for (std::size_t d = 0; d < s.keys.size(); ++d) {
        std::set<Span> result(s.hits[d].begin(), s.hits[d].end());
        rng64 rng = rng_for(seed, "precision:" + s.keys[d]);
        for (const auto& sp : detail::pick(s.errors[d], alloc[d], rng)) result.insert(sp);
        out[s.keys[d]] = std::move(result);
    }
    return out;
}

// Raise recall to target_percent by adding missed gold markables; recalled
// count becomes round(r*|gold|). Never removes an existing prediction.
inline MentionSets perturb_recall(const MentionSets& pred, const MentionSets& gold,
                                  double target_percent, std::uint64_t seed) {
    detail::SplitSets s = detail::split_sets(pred, gold, true);
    const double r = target_percent / 100.0;
    if (r <= 0.0 || r > 1.0) throw error("perturb_recall: target must be in (0, 100]");
    double current = s.gold_total ? double(s.tp) / double(s.gold_total) : 1.0;
    if (r < current - 1e-12)
        throw error(strf("perturb_recall: target %.2f below current recall %.2f", target_percent,
                         current * 100.0));
    long add_total = std::lround(r * double(s.gold_total)) - s.tp;
    if (add_total < 0) add_total = 0;
    std::vector<long> weights;
    for (const auto& e : s.errors) weights.push_back(long(e.size()));
    std::vector<long> alloc = detail::largest_remainder(add_total, weights);

    MentionSets out = pred;
    for (std::size_t d = 0; d < s.keys.size(); ++d) {
        rng64 rng = rng_for(seed, "recall:" + s.keys[d]);
        auto& result = out[s.keys[d]];
        for (const auto& sp : detail::pick(s.errors[d], alloc[d], rng)) result.insert(sp);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sweep curves (Figure-3-style)
// ---------------------------------------------------------------------------

struct PerturbSpec {
    enum class Axis { precision, recall };
    Axis axis = Axis::precision;
    std::vector<double> targets;  // percentages, ascending
    std::uint64_t seed = 0;
};

inline const char* to_string(PerturbSpec::Axis a) {
    return a == PerturbSpec::Axis::precision ? "precision" : "recall";
}

struct CurvePoint {
    double axis_value = 0.0;  // achieved P or R, x100
    long mention_total = 0;
    long mention_tp = 0;
    ScoreReport report;
};

struct SweepOptions {
    bool drop_singletons = false;
    bool retrain = false;          // retrain the linker on each perturbed mention set
    LinkerConfig retrain_config;
};

inline std::vector<CurvePoint> sweep_curve(const std::vector<Document>& gold_docs,
                                           const MentionSets& predicted,
                                           const LinkerModel& model, const PerturbSpec& spec,
                                           const SweepOptions& opts = {}) {
    for (std::size_t i = 1; i < spec.targets.size(); ++i)
        if (spec.targets[i] < spec.targets[i - 1])
            throw error("sweep_curve: targets must be ascending");
    MentionSets gold = gold_mention_sets(gold_docs);

    std::vector<CurvePoint> points;
    for (double target : spec.targets) {
        std::uint64_t point_seed =
            spec.seed ^ fnv1a64(strf("%s:%.6f", to_string(spec.axis), target));
        MentionSets perturbed = spec.axis == PerturbSpec::Axis::precision
                                    ? perturb_precision(predicted, gold, target, point_seed)
                                    : perturb_recall(predicted, gold, target, point_seed);

        std::vector<LinkerDocument> ldocs;
        for (const auto& doc : gold_docs) {
            auto it = perturbed.find(doc.key());
            ldocs.push_back(
                make_linker_document(doc, it == perturbed.end() ? std::set<Span>{} : it->second));
        }
        const LinkerModel* use = &model;
        LinkerModel retrained;
        if (opts.retrain) {
            retrained = train_linker(ldocs, opts.retrain_config);
            use = &retrained;
        }
        std::vector<Document> response;
        for (std::size_t d = 0; d < ldocs.size(); ++d)
            response.push_back(with_chains(gold_docs[d], link(*use, ldocs[d])));

        CurvePoint pt;
        MentionCounts mc;
        std::set<Span> dummy;
        for (const auto& doc : gold_docs) {
            const auto& pp = perturbed.count(doc.key()) ? perturbed.at(doc.key()) : dummy;
            for (const auto& sp : pp)
                if (doc.gold_mentions.count(sp)) ++mc.tp;
            mc.pred_total += long(pp.size());
            mc.gold_total += long(doc.gold_mentions.size());
        }
        Prf prf = mention_prf_from_counts(mc);
        pt.axis_value = 100.0 * (spec.axis == PerturbSpec::Axis::precision ? prf.p : prf.r);
        pt.mention_total = mc.pred_total;
        pt.mention_tp = mc.tp;
        pt.report = score_corpus(gold_docs, response, opts.drop_singletons);
        points.push_back(std::move(pt));
    }
    return points;
}

inline std::string curve_csv(const std::vector<CurvePoint>& points) {
    std::string out = "axis_value,mention_p,mention_r,muc_f1,b3_f1,ceaf_f1,avg_f1\n";
    for (const auto& pt : points) {
        out += strf("%.2f,%s,%s,%s,%s,%s,%s\n", pt.axis_value, pct2(pt.report.mention.p).c_str(),
                    pct2(pt.report.mention.r).c_str(), pct2(pt.report.muc.f1).c_str(),
                    pct2(pt.report.b3.f1).c_str(), pct2(pt.report.ceaf_phi4.f1).c_str(),
                    pct2(pt.report.avg_f1).c_str());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Heuristic error diagnostics
// ---------------------------------------------------------------------------

struct DiagnosedSpan {
    std::string doc_key;
    Span span;
    std::string tag;
};

struct Diagnostics {
    std::vector<DiagnosedSpan> recall_errors;     // gold \ pred
    std::vector<DiagnosedSpan> precision_errors;  // pred \ gold
    std::map<std::string, long> recall_counts;
    std::map<std::string, long> precision_counts;
};

namespace detail {

inline bool punct_pos(const std::string& pos) {
    return pos == "." || pos == "," || pos == ":" || pos == "``" || pos == "''" ||
           pos == "-LRB-" || pos == "-RRB-";
}

inline bool overlaps(const Span& a, const Span& b) {
    return a.sentence == b.sentence && a.start <= b.end && b.start <= a.end;
}

inline bool contains_strictly(const Span& outer, const Span& inner) {
    return outer.sentence == inner.sentence && outer.start <= inner.start &&
           inner.end <= outer.end && outer != inner;
}

}  // namespace detail

inline Diagnostics diagnose_errors(const MentionSets& pred,
                                   const std::vector<Document>& gold_docs) {
    Diagnostics diag;
    static const std::set<Span> empty;
    for (const auto& doc : gold_docs) {
        const std::set<Span>& p = pred.count(doc.key()) ? pred.at(doc.key()) : empty;
        for (const auto& g : doc.gold_mentions) {
            if (p.count(g)) continue;
            std::string tag = "other";
            for (const auto& ps : p) {
                if (detail::contains_strictly(ps, g)) {
                    tag = "nested-missing";  // the predicted span covers the gold head token
                    break;
                }
                if (detail::overlaps(ps, g)) tag = "boundary";
            }
            diag.recall_errors.push_back({doc.key(), g, tag});
            diag.recall_counts[tag] += 1;
        }
        for (const auto& ps : p) {
            if (doc.gold_mentions.count(ps)) continue;
            std::string tag = "other";
            if (ps.sentence < doc.sentence_count() && ps.end < doc.sentence_length(ps.sentence) &&
                detail::punct_pos(doc.pos(ps.sentence, ps.end)))
                tag = "trailing-punctuation";
            diag.precision_errors.push_back({doc.key(), ps, tag});
            diag.precision_counts[tag] += 1;
        }
    }
    return diag;
}

inline std::string format_diagnostics(const Diagnostics& d, int examples_per_tag = 3) {
    std::string out = "recall errors (" + std::to_string(d.recall_errors.size()) + "):\n";
    for (const auto& [tag, n] : d.recall_counts) out += strf("  %-22s %ld\n", tag.c_str(), n);
    out += "precision errors (" + std::to_string(d.precision_errors.size()) + "):\n";
    for (const auto& [tag, n] : d.precision_counts) out += strf("  %-22s %ld\n", tag.c_str(), n);
    auto samples = [&](const std::vector<DiagnosedSpan>& list, const std::string& kind) {
        std::map<std::string, int> shown;
        for (const auto& e : list) {
            if (shown[e.tag]++ >= examples_per_tag) continue;
            out += strf("  example %s/%s: %s sentence %d span %d..%d\n", kind.c_str(),
                        e.tag.c_str(), e.doc_key.c_str(), e.span.sentence, e.span.start,
                        e.span.end);
        }
    };
    samples(d.recall_errors, "recall");
    samples(d.precision_errors, "precision");
    return out;
}

}  // namespace coref
