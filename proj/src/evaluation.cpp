// Stratified k-fold cross-validation and the confusion-matrix metrics.
// Positive class is Safe throughout; see ConfusionMatrix in the header.

#include "sepredict/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sepredict/io.hpp"
#include "sepredict/rng.hpp"

namespace sep {

namespace {

void warn(std::vector<std::string>* sink, std::string message) {
    if (sink) {
        sink->push_back(std::move(message));
    } else {
        std::fprintf(stderr, "warning: %s\n", message.c_str());
    }
}

std::string rate2(const std::optional<double>& rate) {
    return rate ? fixed2(*rate) : std::string("n/a");
}

std::string rate_json(const std::optional<double>& rate) {
    return rate ? g17(*rate) : std::string("null");
}

}  // namespace

FoldPlan plan_folds(const Corpus& corpus, int k, uint64_t seed, bool stratified,
                    std::vector<std::string>* warnings) {
    if (k < 2) {
        throw Error(Errc::invalid_argument, "fold count must be at least 2, got " +
                                                std::to_string(k));
    }
    if (static_cast<size_t>(k) > corpus.prescriptions.size()) {
        throw Error(Errc::k_too_large, "fold count " + std::to_string(k) +
                                           " exceeds corpus size " +
                                           std::to_string(corpus.prescriptions.size()));
    }
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    Rng rng(mix_seed(seed, 0));

    auto assign = [&plan, k](std::vector<std::string>& ids) {
        for (size_t i = 0; i < ids.size(); ++i) {
            plan.assignments.emplace(std::move(ids[i]), static_cast<int>(i % static_cast<size_t>(k)));
        }
    };

    if (stratified) {
        std::vector<std::string> safe_ids;
        std::vector<std::string> unsafe_ids;
        for (const Prescription& p : corpus.prescriptions) {
            (p.label == Label::Safe ? safe_ids : unsafe_ids).push_back(p.id);
        }
        if (safe_ids.size() < static_cast<size_t>(k)) {
            warn(warnings, "safe class has " + std::to_string(safe_ids.size()) +
                               " samples, fewer than " + std::to_string(k) +
                               " folds: some folds will hold no safe samples");
        }
        if (unsafe_ids.size() < static_cast<size_t>(k)) {
            warn(warnings, "unsafe class has " + std::to_string(unsafe_ids.size()) +
                               " samples, fewer than " + std::to_string(k) +
                               " folds: some folds will hold no unsafe samples");
        }
        rng.shuffle(safe_ids);
        assign(safe_ids);
        rng.shuffle(unsafe_ids);
        assign(unsafe_ids);
    } else {
        std::vector<std::string> ids;
        ids.reserve(corpus.prescriptions.size());
        for (const Prescription& p : corpus.prescriptions) {
            ids.push_back(p.id);
        }
        rng.shuffle(ids);
        assign(ids);
    }
    return plan;
}

ConfusionMatrix tally(const std::vector<std::pair<Label, Label>>& predicted_vs_actual) {
    ConfusionMatrix counts;
    for (const auto& [predicted, actual] : predicted_vs_actual) {
        if (actual == Label::Safe) {
            (predicted == Label::Safe ? counts.tp : counts.fn) += 1;
        } else {
            (predicted == Label::Unsafe ? counts.tn : counts.fp) += 1;
        }
    }
    return counts;
}

FoldReport fold_report(int fold, const ConfusionMatrix& counts) {
    if (counts.total() == 0) {
        throw Error(Errc::empty_sample_set, "cannot report on an empty fold");
    }
    FoldReport report;
    report.fold = fold;
    report.counts = counts;
    if (counts.tp + counts.fn > 0) {
        report.se = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
    }
    if (counts.tn + counts.fp > 0) {
        report.sp = static_cast<double>(counts.tn) / static_cast<double>(counts.tn + counts.fp);
    }
    report.acc = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(counts.total());
    return report;
}

FoldOutcome evaluate_fold(const std::vector<EncodedSample>& samples, const FoldPlan& plan,
                          int fold, const TrainConfig& config, const NetworkShape& shape,
                          std::vector<std::string>* warnings) {
    if (fold < 0 || fold >= plan.k) {
        throw Error(Errc::invalid_argument, "fold index " + std::to_string(fold) +
                                                " outside [0, " + std::to_string(plan.k) + ")");
    }
    std::vector<EncodedSample> train_split;
    std::vector<EncodedSample> test_split;
    for (const EncodedSample& sample : samples) {
        const auto it = plan.assignments.find(sample.prescription_id);
        if (it == plan.assignments.end()) {
            throw Error(Errc::invalid_argument,
                        "sample '" + sample.prescription_id + "' is missing from the fold plan");
        }
        (it->second == fold ? test_split : train_split).push_back(sample);
    }
    if (test_split.empty()) {
        throw Error(Errc::empty_split, "fold " + std::to_string(fold + 1) + " has no test samples");
    }

    NetworkModel model = train(train_split, config, shape, warnings);

    std::vector<std::pair<Label, Label>> outcomes;
    outcomes.reserve(test_split.size());
    for (const EncodedSample& sample : test_split) {
        outcomes.emplace_back(predict(model, sample.input).predicted, sample.label());
    }
    return {fold_report(fold, tally(outcomes)), std::move(model)};
}

CvReport summarize(std::vector<FoldReport> folds, std::vector<std::string> warnings) {
    if (folds.empty()) {
        throw Error(Errc::empty_sample_set, "no folds to summarize");
    }
    CvReport report;
    report.folds = std::move(folds);
    report.warnings = std::move(warnings);

    double se_sum = 0.0;
    double sp_sum = 0.0;
    double acc_sum = 0.0;
    size_t se_n = 0;
    size_t sp_n = 0;
    for (const FoldReport& fold : report.folds) {
        if (fold.se) {
            se_sum += *fold.se;
            ++se_n;
        } else {
            report.warnings.push_back("fold " + std::to_string(fold.fold + 1) +
                                      ": sensitivity undefined (no safe samples); excluded "
                                      "from the average");
        }
        if (fold.sp) {
            sp_sum += *fold.sp;
            ++sp_n;
        } else {
            report.warnings.push_back("fold " + std::to_string(fold.fold + 1) +
                                      ": specificity undefined (no unsafe samples); excluded "
                                      "from the average");
        }
        acc_sum += fold.acc;
    }
    if (se_n > 0) {
        report.avg_se = se_sum / static_cast<double>(se_n);
    }
    if (sp_n > 0) {
        report.avg_sp = sp_sum / static_cast<double>(sp_n);
    }
    report.avg_acc = acc_sum / static_cast<double>(report.folds.size());
    return report;
}

CvReport cross_validate(const Corpus& corpus, const DrugOntology& ontology, int k,
                        uint64_t seed, const TrainConfig& config, const NetworkShape& shape,
                        bool stratified) {
    std::vector<std::string> warnings;
    const FoldPlan plan = plan_folds(corpus, k, seed, stratified, &warnings);
    const std::vector<EncodedSample> samples = encode_corpus(corpus, ontology);

    std::vector<FoldReport> folds;
    folds.reserve(static_cast<size_t>(k));
    for (int fold = 0; fold < k; ++fold) {
        TrainConfig fold_config = config;
        fold_config.seed = mix_seed(seed, static_cast<uint64_t>(fold));
        folds.push_back(evaluate_fold(samples, plan, fold, fold_config, shape, &warnings).report);
    }
    return summarize(std::move(folds), std::move(warnings));
}

DistributionReport distribution_report(const std::vector<EncodedSample>& samples,
                                       double threshold) {
    if (samples.empty()) {
        throw Error(Errc::empty_sample_set, "distribution of an empty sample set");
    }
    if (!std::isfinite(threshold)) {
        throw Error(Errc::invalid_argument, "threshold must be finite");
    }
    DistributionReport report;
    report.threshold = threshold;
    for (const EncodedSample& sample : samples) {
        auto& row = sample.label() == Label::Safe ? report.safe : report.unsafe;
        row.count += 1;
        if (sample.input.hot + sample.input.cold > threshold) {
            row.above += 1;
        }
    }
    for (auto* row : {&report.safe, &report.unsafe}) {
        if (row->count > 0) {
            row->fraction = static_cast<double>(row->above) / static_cast<double>(row->count);
        }
    }
    return report;
}

std::string report_tsv(const CvReport& report) {
    std::string out = "fold\tse\tsp\tacc\n";
    for (const FoldReport& fold : report.folds) {
        out += std::to_string(fold.fold + 1) + "\t" + rate2(fold.se) + "\t" + rate2(fold.sp) +
               "\t" + fixed2(fold.acc) + "\n";
    }
    out += "avg\t" + rate2(report.avg_se) + "\t" + rate2(report.avg_sp) + "\t" +
           fixed2(report.avg_acc) + "\n";
    return out;
}

std::string report_json(const CvReport& report) {
    std::string out = "{\n  \"k\": " + std::to_string(report.folds.size()) + ",\n  \"folds\": [\n";
    for (size_t i = 0; i < report.folds.size(); ++i) {
        const FoldReport& fold = report.folds[i];
        out += "    { \"fold\": " + std::to_string(fold.fold + 1) +
               ", \"tp\": " + std::to_string(fold.counts.tp) +
               ", \"fn\": " + std::to_string(fold.counts.fn) +
               ", \"tn\": " + std::to_string(fold.counts.tn) +
               ", \"fp\": " + std::to_string(fold.counts.fp) +
               ", \"se\": " + rate_json(fold.se) + ", \"sp\": " + rate_json(fold.sp) +
               ", \"acc\": " + g17(fold.acc) + " }";
        out += i + 1 < report.folds.size() ? ",\n" : "\n";
    }
    out += "  ],\n";
    out += "  \"avg_se\": " + rate_json(report.avg_se) + ",\n";
    out += "  \"avg_sp\": " + rate_json(report.avg_sp) + ",\n";
    out += "  \"avg_acc\": " + g17(report.avg_acc) + ",\n";
    out += "  \"warnings\": [";
    for (size_t i = 0; i < report.warnings.size(); ++i) {
        out += i > 0 ? ", " : "";
        out += "\"" + json_escape(report.warnings[i]) + "\"";
    }
    out += "]\n}\n";
    return out;
}

std::string distribution_tsv(const DistributionReport& report) {
    std::string out = "class\tabove_threshold_fraction\tcount\n";
    const auto row = [&out](const char* name, const DistributionReport::ClassRow& r) {
        out += std::string(name) + "\t" + (r.count > 0 ? g17(r.fraction) : std::string("n/a")) +
               "\t" + std::to_string(r.count) + "\n";
    };
    row("safe", report.safe);
    row("unsafe", report.unsafe);
    return out;
}

}  // namespace sep
