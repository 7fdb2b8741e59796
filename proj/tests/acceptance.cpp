// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails. Each check is self-contained and deterministic.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "sepredict/encoder.hpp"
#include "sepredict/evaluation.hpp"
#include "sepredict/io.hpp"
#include "sepredict/network.hpp"
#include "sepredict/rng.hpp"
#include "sepredict/synth.hpp"

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, value);
    return buf;
}

struct Outcome {
    bool ok = false;
    std::string detail;
};

// ---- criterion 1: encoder vs independent dosage summation ----------------

sep::DrugOntology hundred_drug_ontology() {
    sep::DrugOntology ontology;
    ontology.version = "acceptance/1";
    for (int i = 0; i < 100; ++i) {
        char name[8];
        std::snprintf(name, sizeof name, "d%03d", i);
        const auto attribution = i < 40   ? sep::Attribution::Hot
                                 : i < 75 ? sep::Attribution::Cold
                                          : sep::Attribution::Neutral;
        ontology.entries.emplace(name, attribution);
    }
    return ontology;
}

Outcome criterion_encoder_oracle() {
    const auto start = Clock::now();
    const sep::DrugOntology ontology = hundred_drug_ontology();
    const sep::WeightMatrix weights = sep::build_weight_matrix(ontology);
    sep::Rng rng(101);

    std::vector<std::string> vocabulary = weights.vocabulary;
    for (int trial = 0; trial < 1000; ++trial) {
        sep::Prescription p;
        p.id = "t" + std::to_string(trial);
        const bool integer_dosages = trial % 2 == 0;
        const size_t n_items = 1 + rng.below(15);
        for (size_t j = 0; j < n_items; ++j) {
            std::swap(vocabulary[j], vocabulary[j + rng.below(vocabulary.size() - j)]);
            const double dosage = integer_dosages
                                      ? static_cast<double>(rng.below(500))
                                      : rng.uniform(0.1, 50.0);
            p.items.push_back({vocabulary[j], dosage});
        }

        double want_hot = 0.0;
        double want_cold = 0.0;
        for (const auto& item : p.items) {
            switch (ontology.entries.at(item.drug)) {
                case sep::Attribution::Hot: want_hot += item.dosage; break;
                case sep::Attribution::Cold: want_cold += item.dosage; break;
                case sep::Attribution::Neutral: break;
            }
        }

        const sep::IfVector got = sep::encode(sep::to_bow(p, weights), weights);
        const auto close = [&](double got_v, double want_v) {
            return integer_dosages ? got_v == want_v
                                   : std::abs(got_v - want_v) <=
                                         1e-12 * std::max(1.0, std::abs(want_v));
        };
        if (!close(got.hot, want_hot) || !close(got.cold, want_cold)) {
            return {false, "mismatch at trial " + std::to_string(trial)};
        }
    }
    const double elapsed = seconds_since(start);
    return {elapsed < 1.0, "1000 prescriptions, " + fmt("%.3f", elapsed) + " s"};
}

// ---- criterion 2: gradient audit ------------------------------------------

size_t parameter_count(const sep::NetworkModel& model) {
    size_t count = 0;
    for (const auto& w : model.weights) {
        count += w.data.size();
    }
    for (const auto& b : model.biases) {
        count += b.size();
    }
    return count;
}

double* parameter_at(sep::NetworkModel& model, size_t flat) {
    for (auto& w : model.weights) {
        if (flat < w.data.size()) {
            return &w.data[flat];
        }
        flat -= w.data.size();
    }
    for (auto& b : model.biases) {
        if (flat < b.size()) {
            return &b[flat];
        }
        flat -= b.size();
    }
    return nullptr;
}

double gradient_at(const sep::Gradients& gradients, size_t flat) {
    for (const auto& w : gradients.weights) {
        if (flat < w.data.size()) {
            return w.data[flat];
        }
        flat -= w.data.size();
    }
    for (const auto& b : gradients.biases) {
        if (flat < b.size()) {
            return b[flat];
        }
        flat -= b.size();
    }
    return 0.0;
}

Outcome criterion_gradient_audit() {
    const auto start = Clock::now();
    constexpr double h = 1e-5;
    sep::Rng rng(202);
    double worst = 0.0;

    for (int trial = 0; trial < 10; ++trial) {
        const sep::NetworkShape shape =
            trial % 2 == 0 ? sep::NetworkShape{} : sep::NetworkShape{{2, 30, 30, 10, 2}};
        sep::NetworkModel model = sep::init(shape, 1000 + static_cast<uint64_t>(trial));
        for (auto& layer : model.biases) {
            for (double& b : layer) {
                b = rng.uniform(-0.3, 0.3);
            }
        }
        const double l2 = trial % 2 == 0 ? 0.0 : 0.01;

        std::vector<sep::LabeledInput> batch(1 + rng.below(16));
        for (auto& sample : batch) {
            sample.input = {rng.uniform(0.0, 1.2), rng.uniform(0.0, 1.2)};
            sample.target = rng.below(2) == 0 ? std::array<double, 2>{1.0, 0.0}
                                              : std::array<double, 2>{0.0, 1.0};
        }

        const sep::Gradients analytic = sep::backward(model, batch, l2);
        const size_t count = parameter_count(model);
        for (int probe = 0; probe < 100; ++probe) {
            const size_t flat = rng.below(count);
            double* parameter = parameter_at(model, flat);
            const double saved = *parameter;
            *parameter = saved + h;
            const double up = sep::loss(model, batch, l2);
            *parameter = saved - h;
            const double down = sep::loss(model, batch, l2);
            *parameter = saved;
            const double fd = (up - down) / (2.0 * h);
            const double analytic_v = gradient_at(analytic, flat);
            const double rel =
                std::abs(analytic_v - fd) / std::max(1.0, std::abs(analytic_v));
            worst = std::max(worst, rel);
        }
    }
    const double elapsed = seconds_since(start);
    const bool ok = worst < 1e-4 && elapsed < 10.0;
    return {ok, "max rel err " + fmt("%.2e", worst) + ", " + fmt("%.2f", elapsed) + " s"};
}

// ---- criterion 3: metrics oracle -------------------------------------------

Outcome criterion_metrics_oracle() {
    sep::Rng rng(303);
    for (int trial = 0; trial < 1000; ++trial) {
        long long tp = 0, fn = 0, tn = 0, fp = 0;
        do {
            tp = static_cast<long long>(rng.below(40));
            fn = static_cast<long long>(rng.below(40));
            tn = static_cast<long long>(rng.below(40));
            fp = static_cast<long long>(rng.below(40));
        } while (tp + fn + tn + fp == 0);

        std::vector<std::pair<sep::Label, sep::Label>> outcomes;
        for (long long i = 0; i < tp; ++i) outcomes.push_back({sep::Label::Safe, sep::Label::Safe});
        for (long long i = 0; i < fn; ++i) outcomes.push_back({sep::Label::Unsafe, sep::Label::Safe});
        for (long long i = 0; i < tn; ++i) outcomes.push_back({sep::Label::Unsafe, sep::Label::Unsafe});
        for (long long i = 0; i < fp; ++i) outcomes.push_back({sep::Label::Safe, sep::Label::Unsafe});
        rng.shuffle(outcomes);

        const sep::ConfusionMatrix counts = sep::tally(outcomes);
        if (counts != sep::ConfusionMatrix{tp, fn, tn, fp}) {
            return {false, "tally mismatch at trial " + std::to_string(trial)};
        }
        const sep::FoldReport report = sep::fold_report(0, counts);
        const long long p = tp + fn;
        const long long n = tn + fp;
        if (p > 0 && *report.se != static_cast<double>(tp) / static_cast<double>(p)) {
            return {false, "se mismatch at trial " + std::to_string(trial)};
        }
        if (n > 0 && *report.sp != static_cast<double>(tn) / static_cast<double>(n)) {
            return {false, "sp mismatch at trial " + std::to_string(trial)};
        }
        if (report.acc !=
            static_cast<double>(tp + tn) / static_cast<double>(counts.total())) {
            return {false, "acc mismatch at trial " + std::to_string(trial)};
        }
        // acc = (se*P + sp*N)/(P+N): the rates reconstruct their integer
        // numerators, so the identity is checked in exact arithmetic.
        if (p > 0 && n > 0) {
            const long long se_num = std::llround(*report.se * static_cast<double>(p));
            const long long sp_num = std::llround(*report.sp * static_cast<double>(n));
            const long long acc_num =
                std::llround(report.acc * static_cast<double>(p + n));
            if (se_num != tp || sp_num != tn || acc_num != se_num + sp_num) {
                return {false, "identity failed at trial " + std::to_string(trial)};
            }
        }
    }
    return {true, "1000 random confusion configurations"};
}

// ---- criterion 4: reference fold-row averaging -----------------------------

Outcome criterion_reference_rows() {
    const std::vector<double> se{1.00, 1.00, 0.92, 1.00, 0.91, 1.00, 1.00, 1.00, 1.00, 0.95};
    const std::vector<double> sp{0.00, 0.33, 1.00, 0.33, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    const std::vector<double> acc{0.92, 0.92, 0.92, 0.92, 0.88, 0.79, 0.92, 0.88, 0.79, 0.79};

    std::vector<sep::FoldReport> folds;
    for (int i = 0; i < 10; ++i) {
        sep::FoldReport fold;
        fold.fold = i;
        fold.se = se[static_cast<size_t>(i)];
        fold.sp = sp[static_cast<size_t>(i)];
        fold.acc = acc[static_cast<size_t>(i)];
        fold.counts = {1, 0, 1, 0};
        folds.push_back(fold);
    }
    const sep::CvReport report = sep::summarize(folds);
    const bool in_tolerance = std::abs(*report.avg_se - 0.98) <= 0.005 &&
                              std::abs(*report.avg_sp - 0.17) <= 0.005 &&
                              std::abs(report.avg_acc - 0.87) <= 0.005;
    const std::string printed = sep::fixed2(*report.avg_se) + "/" +
                                sep::fixed2(*report.avg_sp) + "/" +
                                sep::fixed2(report.avg_acc);
    return {in_tolerance && printed == "0.98/0.17/0.87", "prints " + printed};
}

// ---- criterion 5: unsafe-skewed noise gives SE > SP ------------------------

Outcome criterion_imbalance_ordering() {
    sep::SynthConfig config;
    config.noise_safe = 0.0;
    config.noise_unsafe = 0.35;
    config.seed = 3;
    const sep::SynthOutput output = sep::generate(config);
    const sep::CvReport report =
        sep::cross_validate(output.corpus, output.ontology, 10, 3, sep::TrainConfig{},
                            sep::NetworkShape{});
    if (!report.avg_se || !report.avg_sp) {
        return {false, "an average rate is undefined"};
    }
    const std::string detail =
        "avg SE " + sep::fixed2(*report.avg_se) + " vs SP " + sep::fixed2(*report.avg_sp);
    return {*report.avg_se > *report.avg_sp, detail};
}

// ---- criterion 6: separable-corpus accuracy --------------------------------

Outcome criterion_separable_accuracy() {
    const auto start = Clock::now();

    sep::SynthConfig clean;
    clean.noise = 0.0;
    clean.seed = 7;
    const sep::SynthOutput pure = sep::generate(clean);
    const sep::CvReport clean_report =
        sep::cross_validate(pure.corpus, pure.ontology, 10, 7, sep::TrainConfig{},
                            sep::NetworkShape{});

    sep::SynthConfig noisy;
    noisy.seed = 7;  // default noise 0.1
    const sep::SynthOutput mixed = sep::generate(noisy);
    const sep::CvReport noisy_report =
        sep::cross_validate(mixed.corpus, mixed.ontology, 10, 7, sep::TrainConfig{},
                            sep::NetworkShape{});

    const double elapsed = seconds_since(start);
    const bool ok =
        clean_report.avg_acc >= 0.95 && noisy_report.avg_acc >= 0.80 && elapsed < 120.0;
    return {ok, "avg acc " + sep::fixed2(clean_report.avg_acc) + " (noise 0) / " +
                    sep::fixed2(noisy_report.avg_acc) + " (noise 0.1), " +
                    fmt("%.1f", elapsed) + " s"};
}

// ---- criterion 7: fold-plan invariants over 100 seeds ----------------------

Outcome criterion_fold_invariants() {
    const sep::SynthOutput output = sep::generate(sep::SynthConfig{});
    for (uint64_t seed = 0; seed < 100; ++seed) {
        const sep::FoldPlan plan = sep::plan_folds(output.corpus, 10, seed);
        if (plan.assignments.size() != output.corpus.prescriptions.size()) {
            return {false, "plan skips samples at seed " + std::to_string(seed)};
        }
        std::vector<int> safe_counts(10, 0);
        std::vector<int> sizes(10, 0);
        for (const auto& p : output.corpus.prescriptions) {
            const auto it = plan.assignments.find(p.id);
            if (it == plan.assignments.end() || it->second < 0 || it->second >= 10) {
                return {false, "bad assignment at seed " + std::to_string(seed)};
            }
            sizes[static_cast<size_t>(it->second)] += 1;
            if (p.label == sep::Label::Safe) {
                safe_counts[static_cast<size_t>(it->second)] += 1;
            }
        }
        const int n24 = static_cast<int>(std::count(sizes.begin(), sizes.end(), 24));
        const int n25 = static_cast<int>(std::count(sizes.begin(), sizes.end(), 25));
        const bool safe_even = std::all_of(safe_counts.begin(), safe_counts.end(),
                                           [](int c) { return c == 15; });
        if (n24 != 8 || n25 != 2 || !safe_even) {
            return {false, "fold shape broken at seed " + std::to_string(seed)};
        }
    }
    return {true, "seeds 0..99, sizes 8x24 + 2x25, 15 safe per fold"};
}

// ---- criterion 8: end-to-end determinism ------------------------------------

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(const std::string& args, const fs::path& log_dir, const std::string& tag) {
    const fs::path out = log_dir / (tag + ".out");
    const fs::path err = log_dir / (tag + ".err");
    const std::string command = std::string("\"") + SEP_CLI_PATH + "\" " + args + " > \"" +
                                out.string() + "\" 2> \"" + err.string() + "\"";
    const int raw = std::system(command.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

Outcome criterion_determinism() {
    const fs::path root = fs::temp_directory_path() / "sepredict_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);

    for (const char* pass : {"a", "b"}) {
        const fs::path dir = root / pass;
        fs::create_directories(dir);
        if (run_cli("generate --seed 7 --out \"" + dir.string() + "\"", root,
                    std::string("generate_") + pass) != 0) {
            return {false, std::string("generate failed on pass ") + pass};
        }
        const std::string inputs = "--ontology \"" + (dir / "synthetic.ont.tsv").string() +
                                   "\" --corpus \"" + (dir / "synthetic.rx.tsv").string() + "\"";
        if (run_cli("evaluate " + inputs + " --seed 7 --k 10 --epochs 120 --out \"" +
                        dir.string() + "\"",
                    root, std::string("evaluate_") + pass) != 0) {
            return {false, std::string("evaluate failed on pass ") + pass};
        }
    }
    for (const char* name : {"synthetic.rx.tsv", "cv.report.tsv", "cv.report.json",
                             "distribution.tsv", "scatter.tsv"}) {
        const std::string a = slurp(root / "a" / name);
        const std::string b = slurp(root / "b" / name);
        if (a.empty() || a != b) {
            return {false, std::string(name) + " differs between passes"};
        }
    }

    // model persistence round trip
    sep::SynthConfig config;
    config.n_safe = 20;
    config.n_unsafe = 12;
    config.seed = 4;
    const sep::SynthOutput output = sep::generate(config);
    sep::TrainConfig train_config;
    train_config.epochs = 60;
    train_config.seed = 4;
    const sep::NetworkModel model = sep::train(
        sep::encode_corpus(output.corpus, output.ontology), train_config, sep::NetworkShape{});
    const fs::path first = root / "model.json";
    const fs::path second = root / "model.copy.json";
    sep::save_model(model, first.string());
    sep::save_model(sep::load_model(first.string()), second.string());
    if (slurp(first).empty() || slurp(first) != slurp(second)) {
        return {false, "model save/load round trip differs"};
    }
    fs::remove_all(root);
    return {true, "report files and model bytes identical across passes"};
}

// ---- criterion 9: noise-free distribution fractions -------------------------

Outcome criterion_distribution_fractions() {
    sep::SynthConfig config;
    config.noise = 0.0;
    config.seed = 7;
    const sep::SynthOutput output = sep::generate(config);
    const sep::DistributionReport report = sep::distribution_report(
        sep::encode_corpus(output.corpus, output.ontology), 500.0);
    const bool exact = report.safe.fraction == 0.0 && report.unsafe.fraction == 1.0;
    return {exact, "fractions " + sep::g17(report.safe.fraction) + " / " +
                       sep::g17(report.unsafe.fraction)};
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        Outcome (*check)();
    };
    const Criterion criteria[] = {
        {1, "encoder matches the dosage-summation oracle", criterion_encoder_oracle},
        {2, "analytic gradients match central finite differences", criterion_gradient_audit},
        {3, "metrics match brute-force recounts with the exact accuracy identity",
         criterion_metrics_oracle},
        {4, "reference fold-row averages print 0.98/0.17/0.87", criterion_reference_rows},
        {5, "unsafe-skewed noise yields higher sensitivity than specificity",
         criterion_imbalance_ordering},
        {6, "separable-corpus accuracy clears 0.95 (noise 0) and 0.80 (noise 0.1)",
         criterion_separable_accuracy},
        {7, "fold-plan invariants hold for 100 seeds", criterion_fold_invariants},
        {8, "generate/evaluate reruns and model round trips are byte-identical",
         criterion_determinism},
        {9, "noise-free distribution fractions are exactly 0 and 1",
         criterion_distribution_fractions},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        Outcome outcome;
        try {
            outcome = criterion.check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failures += outcome.ok ? 0 : 1;
        std::printf("%s criterion %d: %s%s%s%s\n", outcome.ok ? "PASS" : "FAIL",
                    criterion.number, criterion.name, outcome.detail.empty() ? "" : " (",
                    outcome.detail.c_str(), outcome.detail.empty() ? "" : ")");
        std::fflush(stdout);
    }
    if (failures > 0) {
        std::printf("acceptance: %d of 9 criteria failed\n", failures);
        return 1;
    }
    std::printf("acceptance: 9 of 9 criteria passed\n");
    return 0;
}
