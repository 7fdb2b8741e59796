#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sepredict/corpus.hpp"
#include "sepredict/encoder.hpp"
#include "sepredict/network.hpp"

namespace sep {

struct FoldPlan {
    int k = 10;
    std::unordered_map<std::string, int> assignments;  // prescription id -> fold in [0, k)
    uint64_t seed = 0;
};

/// Positive class = Safe (no side effect): the corpus has more safe than
/// unsafe prescriptions, which is the convention the metrics follow.
struct ConfusionMatrix {
    long long tp = 0;  // safe predicted safe
    long long fn = 0;  // safe predicted unsafe
    long long tn = 0;  // unsafe predicted unsafe
    long long fp = 0;  // unsafe predicted safe

    long long total() const { return tp + fn + tn + fp; }

    bool operator==(const ConfusionMatrix&) const = default;
};

/// se/sp are empty when their denominator is zero; reports render that as
/// "n/a" and averages skip it with a warning, never a silent 0.
struct FoldReport {
    int fold = 0;
    std::optional<double> se;  // tp / (tp + fn)
    std::optional<double> sp;  // tn / (tn + fp)
    double acc = 0.0;          // (tp + tn) / total
    ConfusionMatrix counts;
};

struct CvReport {
    std::vector<FoldReport> folds;
    std::optional<double> avg_se;
    std::optional<double> avg_sp;
    double avg_acc = 0.0;
    std::vector<std::string> warnings;
};

struct DistributionReport {
    struct ClassRow {
        long long count = 0;
        long long above = 0;
        double fraction = 0.0;  // share of the class with hot+cold > threshold
    };
    ClassRow safe;
    ClassRow unsafe;
    double threshold = 500.0;
};

/// Seeded shuffle within each class, then round-robin fold assignment;
/// deterministic for a fixed (corpus order, seed). Set stratified=false for
/// a plain shuffled split.
FoldPlan plan_folds(const Corpus& corpus, int k, uint64_t seed, bool stratified = true,
                    std::vector<std::string>* warnings = nullptr);

ConfusionMatrix tally(const std::vector<std::pair<Label, Label>>& predicted_vs_actual);
FoldReport fold_report(int fold, const ConfusionMatrix& counts);

struct FoldOutcome {
    FoldReport report;
    NetworkModel model;
};

/// Trains on every sample outside `fold` (the scaler is fitted on that split
/// only) and scores the held-out fold.
FoldOutcome evaluate_fold(const std::vector<EncodedSample>& samples, const FoldPlan& plan,
                          int fold, const TrainConfig& config, const NetworkShape& shape,
                          std::vector<std::string>* warnings = nullptr);

/// Unweighted fold means; folds with an undefined rate are excluded from that
/// average with a warning.
CvReport summarize(std::vector<FoldReport> folds, std::vector<std::string> warnings = {});

/// k independent fold evaluations; fold f trains with seed mix(seed, f).
CvReport cross_validate(const Corpus& corpus, const DrugOntology& ontology, int k,
                        uint64_t seed, const TrainConfig& config, const NetworkShape& shape,
                        bool stratified = true);

DistributionReport distribution_report(const std::vector<EncodedSample>& samples,
                                       double threshold = 500.0);

// Report rendering. The TSV table prints rates with two decimals; the JSON
// sidecar keeps full precision plus the confusion counts.
std::string report_tsv(const CvReport& report);
std::string report_json(const CvReport& report);
std::string distribution_tsv(const DistributionReport& report);

}  // namespace sep
