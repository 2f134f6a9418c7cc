// coref: command-line front end for the coreference pipeline toolkit.
//
// Subcommands wire the pipeline end to end: extract -> train-classifier /
// classify -> augment -> train-linker / tune -> link -> score, plus the
// perturbation sweep (ablate) and error diagnostics (diagnose). `pipeline`
// chains classify and link in one call. All stochastic steps take --seed and
// produce byte-identical artifacts for identical inputs.

#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coref/candidates.hpp"
#include "coref/conll.hpp"
#include "coref/corpus.hpp"
#include "coref/features.hpp"
#include "coref/gbt.hpp"
#include "coref/harness.hpp"
#include "coref/linker.hpp"
#include "coref/metrics.hpp"
#include "coref/treebank.hpp"
#include "coref/util.hpp"

namespace {

using namespace coref;

constexpr std::uint64_t kDefaultSeed = 20240301;

struct CorpusArgs {
    std::string trees;
    std::string conll;
    std::string manifest;
    std::string split = "train";
    bool no_post_process = false;

    void attach(CLI::App* cmd, bool manifest_optional = true) {
        cmd->add_option("--trees", trees, "directory with <doc_id>.mrg tree files")->required();
        cmd->add_option("--conll", conll, "CoNLL coreference file")->required();
        auto* m = cmd->add_option("--manifest", manifest, "split manifest file");
        cmd->add_option("--split", split, "manifest split to use (train|test|dev)")
            ->check(CLI::IsMember({"train", "test", "dev"}));
        cmd->add_flag("--no-post-process", no_post_process,
                      "skip proper-noun premodifier recovery");
        if (!manifest_optional) m->required();
    }

    std::vector<CorpusDocument> load(int jobs) const {
        std::vector<Document> docs = read_conll(conll);
        SplitManifest m;
        if (!manifest.empty()) {
            m = read_split_manifest(manifest);
        } else {
            // no manifest: every document lands in the requested split
            std::set<std::string> ids;
            for (const auto& d : docs) ids.insert(d.doc_id);
            auto& list = split == "test"  ? m.test_ids
                         : split == "dev" ? m.dev_ids
                                          : m.train_ids;
            list.assign(ids.begin(), ids.end());
        }
        BuildOptions opts;
        opts.post_process = !no_post_process;
        opts.jobs = jobs;
        Corpus corpus = build_corpus(trees, docs, m, opts);
        return corpus.split(split);
    }
};

std::vector<CandidateRecord> candidate_records(const std::vector<CorpusDocument>& docs) {
    std::vector<CandidateRecord> out;
    for (const auto& d : docs)
        for (const auto& c : d.candidates) {
            CandidateRecord r;
            r.doc_id = d.conll.doc_id;
            r.part = d.conll.part;
            r.span = c.span;
            r.source = c.source;
            r.label = c.label;
            out.push_back(std::move(r));
        }
    return out;
}

// mention sets from a candidate table; rows filtered by prob when present
MentionSets positive_mentions(const std::vector<CandidateRecord>& records, double threshold) {
    MentionSets out;
    for (const auto& r : records) {
        if (r.prob && *r.prob < threshold) continue;
        out[r.doc_key()].insert(r.span);
    }
    return out;
}

std::map<std::string, const Document*> index_documents(const std::vector<Document>& docs) {
    std::map<std::string, const Document*> out;
    for (const auto& d : docs) out[d.key()] = &d;
    return out;
}

std::vector<LinkerDocument> linker_documents(const std::vector<Document>& docs,
                                             const MentionSets& mentions) {
    std::vector<LinkerDocument> out;
    static const std::set<Span> empty;
    for (const auto& d : docs) {
        auto it = mentions.find(d.key());
        out.push_back(make_linker_document(d, it == mentions.end() ? empty : it->second));
    }
    return out;
}

std::vector<Document> link_all(const LinkerModel& model, const std::vector<Document>& docs,
                               const MentionSets& mentions, int jobs) {
    std::vector<LinkerDocument> ldocs = linker_documents(docs, mentions);
    std::vector<Document> out(docs.size());
    parallel_for(docs.size(), jobs, [&](std::size_t i) {
        out[i] = with_chains(docs[i], link(model, ldocs[i]));
    });
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coreference pipeline toolkit"};
    app.require_subcommand(1);
    std::uint64_t seed = kDefaultSeed;
    int jobs = 1;
    app.add_option("--seed", seed, "global random seed")->capture_default_str();
    app.add_option("--jobs", jobs, "per-document parallelism")->capture_default_str();

    // ---- extract ----------------------------------------------------------
    auto* extract = app.add_subcommand("extract", "extract mention candidates from trees");
    CorpusArgs extract_args;
    extract_args.attach(extract);
    std::string extract_out;
    extract->add_option("--out", extract_out, "candidate table (TSV)")->required();

    // ---- train-classifier -------------------------------------------------
    auto* trainc = app.add_subcommand("train-classifier", "train the NP/mention classifier");
    CorpusArgs trainc_args;
    trainc_args.attach(trainc);
    std::string trainc_out, trainc_schema_out, trainc_matrix_csv;
    trainc->add_option("--out", trainc_out, "model output path")->required();
    trainc->add_option("--schema-out", trainc_schema_out, "write the feature schema manifest");
    trainc->add_option("--matrix-csv", trainc_matrix_csv, "dump the feature matrix as CSV");
    GbtConfig gbt_cfg;
    trainc->add_option("--learning-rate", gbt_cfg.learning_rate, "boosting learning rate")
        ->capture_default_str();
    trainc->add_option("--rounds", gbt_cfg.rounds, "boosting rounds")->capture_default_str();
    trainc->add_option("--max-depth", gbt_cfg.max_depth, "maximum tree depth")
        ->capture_default_str();
    trainc->add_option("--lambda", gbt_cfg.lambda_l2, "L2 regularization on leaf weights")
        ->capture_default_str();
    trainc->add_option("--gamma", gbt_cfg.gamma_min_gain, "minimum split gain")
        ->capture_default_str();
    trainc->add_option("--min-child-hessian", gbt_cfg.min_child_hessian, "minimum child hessian")
        ->capture_default_str();
    trainc->add_option("--base-score", gbt_cfg.base_score, "initial probability")
        ->capture_default_str();

    // ---- classify ----------------------------------------------------------
    auto* classify = app.add_subcommand("classify", "score candidates with a trained classifier");
    CorpusArgs classify_args;
    classify_args.attach(classify);
    std::string classify_model, classify_out;
    double classify_threshold = 0.5;
    bool classify_report = false;
    classify->add_option("--model", classify_model, "classifier model path")->required();
    classify->add_option("--out", classify_out, "proposal table (TSV)")->required();
    classify->add_option("--threshold", classify_threshold, "positive probability threshold")
        ->capture_default_str();
    classify->add_flag("--report", classify_report,
                       "print classifier and markable evaluation against gold labels");

    // ---- augment -----------------------------------------------------------
    auto* augment = app.add_subcommand(
        "augment", "union gold markables with positive classifier proposals");
    std::string augment_conll, augment_proposals, augment_out;
    double augment_threshold = 0.5;
    augment->add_option("--conll", augment_conll, "gold CoNLL file")->required();
    augment->add_option("--proposals", augment_proposals, "classifier proposal table")->required();
    augment->add_option("--threshold", augment_threshold, "positive probability threshold")
        ->capture_default_str();
    augment->add_option("--out", augment_out, "mention table (TSV)")->required();

    // ---- train-linker ------------------------------------------------------
    auto* trainl = app.add_subcommand("train-linker", "train the mention-pair linker");
    std::string trainl_conll, trainl_mentions, trainl_out;
    LinkerConfig linker_cfg;
    trainl->add_option("--conll", trainl_conll, "gold CoNLL file")->required();
    trainl->add_option("--mentions", trainl_mentions, "mention table (TSV)")->required();
    trainl->add_option("--out", trainl_out, "model output path")->required();
    trainl->add_option("--lr", linker_cfg.learning_rate, "gradient step size")
        ->capture_default_str();
    trainl->add_option("--epochs", linker_cfg.epochs, "training epochs")->capture_default_str();
    trainl->add_option("--l2", linker_cfg.l2, "L2 strength on pair weights")
        ->capture_default_str();
    trainl->add_option("--w-m-init", linker_cfg.w_m_init, "initial uniform mention score")
        ->capture_default_str();

    // ---- tune ---------------------------------------------------------------
    auto* tune = app.add_subcommand(
        "tune", "grid-search w_m initialization and L2 strength on a dev split");
    std::string tune_conll, tune_mentions, tune_dev_conll, tune_dev_mentions, tune_out;
    std::string tune_wm_grid = "-1,-0.5,0,0.5,1";
    std::string tune_l2_grid = "0,0.001,0.01";
    LinkerConfig tune_cfg;
    bool tune_drop_singletons = false;
    tune->add_option("--conll", tune_conll, "training gold CoNLL")->required();
    tune->add_option("--mentions", tune_mentions, "training mention table")->required();
    tune->add_option("--dev-conll", tune_dev_conll, "dev gold CoNLL")->required();
    tune->add_option("--dev-mentions", tune_dev_mentions, "dev mention table")->required();
    tune->add_option("--out", tune_out, "best model output path")->required();
    tune->add_option("--wm-grid", tune_wm_grid, "comma list of w_m initializations")
        ->capture_default_str();
    tune->add_option("--l2-grid", tune_l2_grid, "comma list of L2 strengths")
        ->capture_default_str();
    tune->add_option("--lr", tune_cfg.learning_rate, "gradient step size")->capture_default_str();
    tune->add_option("--epochs", tune_cfg.epochs, "training epochs")->capture_default_str();
    tune->add_flag("--drop-singletons", tune_drop_singletons, "score dev without singletons");

    // ---- link ---------------------------------------------------------------
    auto* link_cmd = app.add_subcommand("link", "cluster a mention table into chains");
    std::string link_model, link_conll, link_mentions, link_out;
    bool link_drop_singletons = false;
    link_cmd->add_option("--model", link_model, "linker model path")->required();
    link_cmd->add_option("--conll", link_conll, "CoNLL file providing tokens/speakers")
        ->required();
    link_cmd->add_option("--mentions", link_mentions, "mention table (TSV)")->required();
    link_cmd->add_option("--out", link_out, "output CoNLL path")->required();
    link_cmd->add_flag("--drop-singletons", link_drop_singletons,
                       "omit size-1 chains from the output");

    // ---- pipeline ------------------------------------------------------------
    auto* pipeline = app.add_subcommand(
        "pipeline", "two-step inference: classify mention proposals, then link them");
    CorpusArgs pipeline_args;
    pipeline_args.attach(pipeline);
    std::string pipeline_gbt, pipeline_linker, pipeline_out, pipeline_proposals_out;
    double pipeline_threshold = 0.5;
    bool pipeline_drop_singletons = false;
    pipeline->add_option("--gbt-model", pipeline_gbt, "classifier model path")->required();
    pipeline->add_option("--linker-model", pipeline_linker, "linker model path")->required();
    pipeline->add_option("--out", pipeline_out, "output CoNLL path")->required();
    pipeline->add_option("--proposals-out", pipeline_proposals_out,
                         "also write the intermediate proposal table");
    pipeline->add_option("--threshold", pipeline_threshold, "positive probability threshold")
        ->capture_default_str();
    pipeline->add_flag("--drop-singletons", pipeline_drop_singletons,
                       "omit size-1 chains from the output");

    // ---- score ---------------------------------------------------------------
    auto* score = app.add_subcommand("score", "score a response CoNLL file against a key");
    std::string score_key, score_response, score_csv;
    bool score_drop_singletons = false;
    score->add_option("--key", score_key, "gold CoNLL file")->required();
    score->add_option("--response", score_response, "predicted CoNLL file")->required();
    score->add_option("--csv", score_csv, "also write the report as CSV");
    score->add_flag("--drop-singletons", score_drop_singletons,
                    "drop size-1 chains from both sides before scoring");

    // ---- ablate ----------------------------------------------------------------
    auto* ablate = app.add_subcommand(
        "ablate", "precision/recall perturbation sweep: perturb, link, score per target");
    std::string ablate_conll, ablate_mentions, ablate_model, ablate_axis = "precision";
    std::string ablate_targets, ablate_out;
    bool ablate_retrain = false, ablate_drop_singletons = false;
    LinkerConfig ablate_retrain_cfg;
    ablate->add_option("--conll", ablate_conll, "gold CoNLL file")->required();
    ablate->add_option("--mentions", ablate_mentions, "predicted mention table")->required();
    ablate->add_option("--model", ablate_model, "linker model path")->required();
    ablate->add_option("--axis", ablate_axis, "precision|recall")
        ->check(CLI::IsMember({"precision", "recall"}));
    ablate->add_option("--targets", ablate_targets, "comma list of target percentages")
        ->required();
    ablate->add_option("--out", ablate_out, "curve CSV output path")->required();
    ablate->add_flag("--retrain", ablate_retrain, "retrain the linker per sweep point");
    ablate->add_option("--retrain-epochs", ablate_retrain_cfg.epochs,
                       "epochs when retraining per point");
    ablate->add_option("--retrain-lr", ablate_retrain_cfg.learning_rate,
                       "step size when retraining per point");
    ablate->add_flag("--drop-singletons", ablate_drop_singletons, "score without singletons");

    // ---- diagnose ---------------------------------------------------------------
    auto* diagnose = app.add_subcommand("diagnose", "tag recall/precision mention errors");
    std::string diagnose_conll, diagnose_mentions;
    int diagnose_examples = 3;
    diagnose->add_option("--conll", diagnose_conll, "gold CoNLL file")->required();
    diagnose->add_option("--mentions", diagnose_mentions, "predicted mention table")->required();
    diagnose->add_option("--examples", diagnose_examples, "examples to print per tag")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*extract) {
            auto docs = extract_args.load(jobs);
            auto records = candidate_records(docs);
            write_file(extract_out, write_candidate_table(records));
            long labeled = 0, positives = 0, missed = 0;
            for (const auto& d : docs) missed += d.missed_gold;
            for (const auto& r : records) {
                if (r.label) ++labeled;
                if (r.label && *r.label) ++positives;
            }
            std::printf("documents: %zu\ncandidates: %zu\nlabeled: %ld (positives %ld)\n"
                        "gold spans without a candidate: %ld\n",
                        docs.size(), records.size(), labeled, positives, missed);
        } else if (*trainc) {
            auto docs = trainc_args.load(jobs);
            FeatureMatrix m = featurize_corpus(docs);
            std::vector<std::vector<double>> X;
            std::vector<int> y;
            for (std::size_t i = 0; i < m.rows.size(); ++i) {
                if (m.labels[i] < 0) continue;
                X.push_back(m.rows[i]);
                y.push_back(m.labels[i]);
            }
            if (X.empty()) throw error("train-classifier: no labeled candidates in input");
            GbtModel model = train_gbt(X, y, gbt_cfg, FeatureSchema::standard().fingerprint());
            save_gbt(trainc_out, model);
            if (!trainc_schema_out.empty())
                write_file(trainc_schema_out, FeatureSchema::standard().manifest());
            if (!trainc_matrix_csv.empty()) write_file(trainc_matrix_csv, feature_matrix_csv(m));
            std::printf("trained on %zu candidates, %d rounds, final log-loss %.6f\n", X.size(),
                        gbt_cfg.rounds, model.round_logloss.back());
            std::printf("%s", format_classifier_report(evaluate_classifier(model, X, y)).c_str());
        } else if (*classify) {
            GbtModel model = load_gbt(classify_model);
            if (!model.schema_fingerprint.empty())
                check_schema_fingerprint(model.schema_fingerprint);
            auto docs = classify_args.load(jobs);
            std::vector<CandidateRecord> records = candidate_records(docs);
            FeatureMatrix m = featurize_corpus(docs);
            for (std::size_t i = 0; i < records.size(); ++i)
                records[i].prob = predict_proba(model, m.rows[i]);
            write_file(classify_out, write_candidate_table(records));
            long positives = 0;
            for (const auto& r : records)
                if (*r.prob >= classify_threshold) ++positives;
            std::printf("candidates: %zu, positives at %.2f: %ld\n", records.size(),
                        classify_threshold, positives);
            if (classify_report) {
                std::vector<std::vector<double>> X;
                std::vector<int> y;
                for (std::size_t i = 0; i < m.rows.size(); ++i) {
                    if (m.labels[i] < 0) continue;
                    X.push_back(m.rows[i]);
                    y.push_back(m.labels[i]);
                }
                if (!y.empty()) {
                    std::printf("%s",
                                format_classifier_report(
                                    evaluate_classifier(model, X, y, classify_threshold))
                                    .c_str());
                    // markable detection view: positives vs gold mention spans
                    MentionCounts mc;
                    MentionSets pos = positive_mentions(records, classify_threshold);
                    std::set<Span> dummy;
                    for (const auto& d : docs) {
                        const auto& pp = pos.count(d.conll.key()) ? pos.at(d.conll.key()) : dummy;
                        for (const auto& sp : pp)
                            if (d.conll.gold_mentions.count(sp)) ++mc.tp;
                        mc.pred_total += long(pp.size());
                        mc.gold_total += long(d.conll.gold_mentions.size());
                    }
                    Prf prf = mention_prf_from_counts(mc);
                    std::printf("markables: P %s (%ld/%ld)  R %s (%ld/%ld)  F1 %s\n",
                                pct2(prf.p).c_str(), mc.tp, mc.pred_total, pct2(prf.r).c_str(),
                                mc.tp, mc.gold_total, pct2(prf.f1).c_str());
                }
            }
        } else if (*augment) {
            std::vector<Document> docs = read_conll(augment_conll);
            auto proposals = read_candidate_table(read_file(augment_proposals));
            MentionSets predicted = positive_mentions(proposals, augment_threshold);
            MentionSets gold = gold_mention_sets(docs);
            for (const auto& [k, v] : predicted)
                if (!gold.count(k)) throw error("augment: proposal document " + k +
                                                " is not in the gold file");
            for (const auto& [k, v] : gold)
                if (!predicted.count(k)) predicted[k] = {};
            MentionSets unioned = augment_union(gold, predicted);
            std::map<std::string, std::pair<std::string, int>> id_of;
            for (const auto& d : docs) id_of[d.key()] = {d.doc_id, d.part};
            std::vector<CandidateRecord> out;
            for (const auto& [k, spans] : unioned)
                for (const auto& sp : spans) {
                    CandidateRecord r;
                    r.doc_id = id_of[k].first;
                    r.part = id_of[k].second;
                    r.span = sp;
                    r.source = CandidateSource::np_node;
                    r.label = gold[k].count(sp) > 0;
                    out.push_back(std::move(r));
                }
            write_file(augment_out, write_candidate_table(out));
            long total = 0, from_gold = 0;
            for (const auto& [k, v] : unioned) total += long(v.size());
            for (const auto& [k, v] : gold) from_gold += long(v.size());
            std::printf("union mentions: %ld (gold %ld)\n", total, from_gold);
        } else if (*trainl) {
            std::vector<Document> docs = read_conll(trainl_conll);
            MentionSets mentions =
                positive_mentions(read_candidate_table(read_file(trainl_mentions)), 0.5);
            std::vector<LinkerDocument> ldocs = linker_documents(docs, mentions);
            LinkerModel init;
            init.config = linker_cfg;
            init.w_m = linker_cfg.w_m_init;
            double loss0 = linker_loss(init, ldocs);
            LinkerModel model = train_linker(ldocs, linker_cfg);
            save_linker(trainl_out, model);
            std::printf("documents: %zu, initial loss %.6f, final loss %.6f, w_m %.4f\n",
                        ldocs.size(), loss0, model.epoch_loss.back(), model.w_m);
        } else if (*tune) {
            std::vector<Document> train_docs = read_conll(tune_conll);
            std::vector<Document> dev_docs = read_conll(tune_dev_conll);
            MentionSets train_mentions =
                positive_mentions(read_candidate_table(read_file(tune_mentions)), 0.5);
            MentionSets dev_mentions =
                positive_mentions(read_candidate_table(read_file(tune_dev_mentions)), 0.5);
            std::vector<LinkerDocument> ltrain = linker_documents(train_docs, train_mentions);
            std::vector<double> wm_grid, l2_grid;
            for (const auto& s : split(tune_wm_grid, ',')) wm_grid.push_back(to_double(s, "wm"));
            for (const auto& s : split(tune_l2_grid, ',')) l2_grid.push_back(to_double(s, "l2"));
            double best_f1 = -1.0;
            LinkerModel best;
            std::printf("w_m_init  l2        dev_avg_f1\n");
            for (double wm : wm_grid) {
                for (double l2 : l2_grid) {
                    LinkerConfig cfg = tune_cfg;
                    cfg.w_m_init = wm;
                    cfg.l2 = l2;
                    LinkerModel model = train_linker(ltrain, cfg);
                    std::vector<Document> response =
                        link_all(model, dev_docs, dev_mentions, jobs);
                    ScoreReport rep = score_corpus(dev_docs, response, tune_drop_singletons);
                    std::printf("%-9.3f %-9.4f %s\n", wm, l2, pct2(rep.avg_f1).c_str());
                    if (rep.avg_f1 > best_f1) {
                        best_f1 = rep.avg_f1;
                        best = model;
                    }
                }
            }
            save_linker(tune_out, best);
            std::printf("best dev avg F1 %s (w_m_init %.3f, l2 %.4f)\n", pct2(best_f1).c_str(),
                        best.config.w_m_init, best.config.l2);
        } else if (*link_cmd) {
            LinkerModel model = load_linker(link_model);
            std::vector<Document> docs = read_conll(link_conll);
            MentionSets mentions =
                positive_mentions(read_candidate_table(read_file(link_mentions)), 0.5);
            std::vector<Document> out = link_all(model, docs, mentions, jobs);
            write_conll(link_out, out, link_drop_singletons);
            long chains = 0, singletons = 0;
            for (const auto& d : out)
                for (const auto& c : d.chains) {
                    ++chains;
                    if (c.mentions.size() == 1) ++singletons;
                }
            std::printf("documents: %zu, chains: %ld (singletons %ld)\n", out.size(), chains,
                        singletons);
        } else if (*pipeline) {
            GbtModel gbt = load_gbt(pipeline_gbt);
            if (!gbt.schema_fingerprint.empty()) check_schema_fingerprint(gbt.schema_fingerprint);
            LinkerModel linker = load_linker(pipeline_linker);
            auto docs = pipeline_args.load(jobs);
            // step 1: mention proposal
            std::vector<CandidateRecord> records = candidate_records(docs);
            FeatureMatrix m = featurize_corpus(docs);
            for (std::size_t i = 0; i < records.size(); ++i)
                records[i].prob = predict_proba(gbt, m.rows[i]);
            if (!pipeline_proposals_out.empty())
                write_file(pipeline_proposals_out, write_candidate_table(records));
            MentionSets proposals = positive_mentions(records, pipeline_threshold);
            // step 2: coreference linking over the proposed mentions
            std::vector<Document> plain;
            for (const auto& d : docs) plain.push_back(d.conll);
            std::vector<Document> out = link_all(linker, plain, proposals, jobs);
            write_conll(pipeline_out, out, pipeline_drop_singletons);
            long mentions = 0, chains = 0, singletons = 0;
            for (const auto& [k, v] : proposals) mentions += long(v.size());
            for (const auto& d : out)
                for (const auto& c : d.chains) {
                    ++chains;
                    if (c.mentions.size() == 1) ++singletons;
                }
            std::printf("proposed mentions: %ld, chains: %ld (singletons %ld)\n", mentions,
                        chains, singletons);
        } else if (*score) {
            std::vector<Document> key = read_conll(score_key);
            std::vector<Document> response = read_conll(score_response);
            ScoreReport rep = score_corpus(key, response, score_drop_singletons);
            std::printf("%s", format_score_report(rep).c_str());
            if (!score_csv.empty()) write_file(score_csv, score_report_csv(rep));
        } else if (*ablate) {
            std::vector<Document> docs = read_conll(ablate_conll);
            MentionSets predicted =
                positive_mentions(read_candidate_table(read_file(ablate_mentions)), 0.5);
            LinkerModel model = load_linker(ablate_model);
            PerturbSpec spec;
            spec.axis = ablate_axis == "recall" ? PerturbSpec::Axis::recall
                                                : PerturbSpec::Axis::precision;
            for (const auto& t : split(ablate_targets, ','))
                spec.targets.push_back(to_double(trim(t), "target"));
            spec.seed = seed;
            SweepOptions opts;
            opts.drop_singletons = ablate_drop_singletons;
            opts.retrain = ablate_retrain;
            opts.retrain_config = ablate_retrain_cfg;
            std::vector<CurvePoint> points = sweep_curve(docs, predicted, model, spec, opts);
            write_file(ablate_out, curve_csv(points));
            std::printf("%s", curve_csv(points).c_str());
        } else if (*diagnose) {
            std::vector<Document> docs = read_conll(diagnose_conll);
            MentionSets predicted =
                positive_mentions(read_candidate_table(read_file(diagnose_mentions)), 0.5);
            Diagnostics diag = diagnose_errors(predicted, docs);
            std::printf("%s", format_diagnostics(diag, diagnose_examples).c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
