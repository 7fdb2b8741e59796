// sepredict: command-line front end for the side-effect prediction pipeline.
// Subcommands cover the whole flow: generate -> validate -> encode -> train
// -> predict / evaluate. Tables go to stdout, artifacts to files under
// --out, diagnostics to stderr. Every stochastic command requires --seed.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sepredict.h"

namespace {

namespace fs = std::filesystem;

struct OwnedString {
    char* text = nullptr;

    OwnedString() = default;
    OwnedString(const OwnedString&) = delete;
    OwnedString& operator=(const OwnedString&) = delete;
    ~OwnedString() { sep_string_free(text); }

    const char* get() const { return text ? text : ""; }
};

using OntologyPtr = std::unique_ptr<sep_ontology, decltype(&sep_ontology_free)>;
using CorpusPtr = std::unique_ptr<sep_corpus, decltype(&sep_corpus_free)>;
using ModelPtr = std::unique_ptr<sep_model, decltype(&sep_model_free)>;
using ReportPtr = std::unique_ptr<sep_cv_report, decltype(&sep_report_free)>;

const char* status_tag(sep_status status) {
    switch (status) {
        case SEP_OK:
            return "ok";
        case SEP_ERR_INVALID_ARG:
            return "invalid";
        case SEP_ERR_PARSE:
            return "parse";
        case SEP_ERR_IO:
            return "io";
        case SEP_ERR_DOMAIN:
            return "domain";
        case SEP_ERR_INTERNAL:
            break;
    }
    return "internal";
}

int exit_code(sep_status status) {
    switch (status) {
        case SEP_OK:
            return 0;
        case SEP_ERR_INVALID_ARG:
            return 2;
        case SEP_ERR_PARSE:
            return 3;
        case SEP_ERR_IO:
            return 4;
        case SEP_ERR_DOMAIN:
            return 5;
        case SEP_ERR_INTERNAL:
            break;
    }
    return 6;
}

// One line, fixed grammar: sepredict: error: <where>: <tag>: <message>
int diagnose(sep_status status, const std::string& where, std::string message) {
    for (char& c : message) {
        if (c == '\n') {
            c = ' ';
        }
    }
    std::fprintf(stderr, "sepredict: error: %s: %s: %s\n", where.c_str(), status_tag(status),
                 message.c_str());
    return exit_code(status);
}

int diagnose(sep_status status, const std::string& where) {
    return diagnose(status, where, sep_last_error());
}

int usage_error(const std::string& where, const std::string& message) {
    return diagnose(SEP_ERR_INVALID_ARG, where, message);
}

int write_artifact(const fs::path& path, const char* text, const std::string& where) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) {
        return diagnose(SEP_ERR_IO, where, "cannot write " + path.string());
    }
    std::fprintf(stderr, "wrote %s\n", path.string().c_str());
    return 0;
}

struct Options {
    std::string ontology_path;
    std::string corpus_path;
    std::string model_path;
    std::string out_dir = ".";
    uint64_t seed = 0;

    sep_synth_config synth{};
    sep_train_config training{};
    std::string layers = "2,24,24,16,2";
    int k = 10;
    bool no_stratify = false;
    double threshold = 500.0;
};

bool parse_layers(const std::string& text, std::vector<int>& out) {
    out.clear();
    std::string token;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ',') {
            try {
                size_t used = 0;
                const int value = std::stoi(token, &used);
                if (used != token.size()) {
                    return false;
                }
                out.push_back(value);
            } catch (const std::exception&) {
                return false;
            }
            token.clear();
        } else {
            token += text[i];
        }
    }
    return !out.empty();
}

int ensure_out_dir(const Options& opts) {
    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (ec) {
        return diagnose(SEP_ERR_IO, "out", "cannot create directory " + opts.out_dir + ": " +
                                               ec.message());
    }
    return 0;
}

int load_pair(const Options& opts, const std::string& where, OntologyPtr& ontology,
              CorpusPtr& corpus) {
    if (opts.ontology_path.empty()) {
        return usage_error(where, "--ontology is required");
    }
    if (opts.corpus_path.empty()) {
        return usage_error(where, "--corpus is required");
    }
    sep_ontology* onto_raw = nullptr;
    if (const sep_status s = sep_ontology_load(opts.ontology_path.c_str(), &onto_raw);
        s != SEP_OK) {
        return diagnose(s, where);
    }
    ontology.reset(onto_raw);
    sep_corpus* corpus_raw = nullptr;
    if (const sep_status s = sep_corpus_load(opts.corpus_path.c_str(), &corpus_raw);
        s != SEP_OK) {
        return diagnose(s, where);
    }
    corpus.reset(corpus_raw);
    return 0;
}

int require_seed(const CLI::Option* seed_opt, const std::string& where) {
    if (seed_opt->count() == 0) {
        return usage_error(where, "--seed is required (stochastic command)");
    }
    return 0;
}

int cmd_generate(const Options& opts) {
    if (const int rc = ensure_out_dir(opts)) {
        return rc;
    }
    sep_synth_config config = opts.synth;
    config.seed = opts.seed;
    sep_ontology* ontology = nullptr;
    sep_corpus* corpus = nullptr;
    if (const sep_status s = sep_generate(&config, &ontology, &corpus); s != SEP_OK) {
        return diagnose(s, "generate");
    }
    const OntologyPtr onto_guard(ontology, sep_ontology_free);
    const CorpusPtr corpus_guard(corpus, sep_corpus_free);
    const fs::path onto_path = fs::path(opts.out_dir) / "synthetic.ont.tsv";
    const fs::path corpus_path = fs::path(opts.out_dir) / "synthetic.rx.tsv";
    if (const sep_status s = sep_ontology_save(ontology, onto_path.string().c_str());
        s != SEP_OK) {
        return diagnose(s, "generate");
    }
    std::fprintf(stderr, "wrote %s\n", onto_path.string().c_str());
    if (const sep_status s = sep_corpus_save(corpus, corpus_path.string().c_str()); s != SEP_OK) {
        return diagnose(s, "generate");
    }
    std::fprintf(stderr, "wrote %s\n", corpus_path.string().c_str());
    return 0;
}

int cmd_validate(const Options& opts) {
    OntologyPtr ontology(nullptr, sep_ontology_free);
    CorpusPtr corpus(nullptr, sep_corpus_free);
    if (const int rc = load_pair(opts, "validate", ontology, corpus)) {
        return rc;
    }
    OwnedString gaps;
    size_t gap_count = 0;
    if (const sep_status s = sep_corpus_validate(corpus.get(), ontology.get(), &gaps.text,
                                                 &gap_count);
        s != SEP_OK) {
        return diagnose(s, "validate");
    }
    if (gap_count > 0) {
        std::fputs(gaps.get(), stderr);
        std::fprintf(stderr,
                     "sepredict: error: validate: gaps: corpus references %zu drugs missing "
                     "from the ontology\n",
                     gap_count);
        return 1;
    }
    std::fprintf(stderr, "validated %zu prescriptions against %zu drugs\n",
                 sep_corpus_size(corpus.get()), sep_ontology_size(ontology.get()));
    return 0;
}

int cmd_encode(const Options& opts) {
    OntologyPtr ontology(nullptr, sep_ontology_free);
    CorpusPtr corpus(nullptr, sep_corpus_free);
    if (const int rc = load_pair(opts, "encode", ontology, corpus)) {
        return rc;
    }
    if (const int rc = ensure_out_dir(opts)) {
        return rc;
    }
    OwnedString encoded;
    if (const sep_status s = sep_encode_tsv(corpus.get(), ontology.get(), &encoded.text);
        s != SEP_OK) {
        return diagnose(s, "encode");
    }
    return write_artifact(fs::path(opts.out_dir) / "samples.enc.tsv", encoded.get(), "encode");
}

int cmd_train(const Options& opts) {
    OntologyPtr ontology(nullptr, sep_ontology_free);
    CorpusPtr corpus(nullptr, sep_corpus_free);
    if (const int rc = load_pair(opts, "train", ontology, corpus)) {
        return rc;
    }
    if (const int rc = ensure_out_dir(opts)) {
        return rc;
    }
    std::vector<int> layers;
    if (!parse_layers(opts.layers, layers)) {
        return usage_error("train", "--layers must be a comma-separated integer list");
    }
    sep_train_config config = opts.training;
    config.seed = opts.seed;
    sep_model* model = nullptr;
    if (const sep_status s = sep_train(corpus.get(), ontology.get(), &config, layers.data(),
                                       layers.size(), &model);
        s != SEP_OK) {
        return diagnose(s, "train");
    }
    const ModelPtr model_guard(model, sep_model_free);
    const fs::path model_path = fs::path(opts.out_dir) / "network.model.json";
    if (const sep_status s = sep_model_save(model, model_path.string().c_str()); s != SEP_OK) {
        return diagnose(s, "train");
    }
    std::fprintf(stderr, "wrote %s\n", model_path.string().c_str());
    return 0;
}

int cmd_predict(const Options& opts) {
    if (opts.model_path.empty()) {
        return usage_error("predict", "--model is required");
    }
    OntologyPtr ontology(nullptr, sep_ontology_free);
    CorpusPtr corpus(nullptr, sep_corpus_free);
    if (const int rc = load_pair(opts, "predict", ontology, corpus)) {
        return rc;
    }
    if (const int rc = ensure_out_dir(opts)) {
        return rc;
    }
    sep_model* model = nullptr;
    if (const sep_status s = sep_model_load(opts.model_path.c_str(), &model); s != SEP_OK) {
        return diagnose(s, "predict");
    }
    const ModelPtr model_guard(model, sep_model_free);
    OwnedString predictions;
    if (const sep_status s = sep_predict_corpus(model, corpus.get(), ontology.get(),
                                                &predictions.text);
        s != SEP_OK) {
        return diagnose(s, "predict");
    }
    return write_artifact(fs::path(opts.out_dir) / "predictions.tsv", predictions.get(),
                          "predict");
}

int cmd_evaluate(const Options& opts) {
    OntologyPtr ontology(nullptr, sep_ontology_free);
    CorpusPtr corpus(nullptr, sep_corpus_free);
    if (const int rc = load_pair(opts, "evaluate", ontology, corpus)) {
        return rc;
    }
    if (const int rc = ensure_out_dir(opts)) {
        return rc;
    }
    std::vector<int> layers;
    if (!parse_layers(opts.layers, layers)) {
        return usage_error("evaluate", "--layers must be a comma-separated integer list");
    }
    sep_train_config config = opts.training;
    config.seed = opts.seed;
    sep_cv_report* report = nullptr;
    if (const sep_status s = sep_cross_validate(corpus.get(), ontology.get(), opts.k, opts.seed,
                                                &config, layers.data(), layers.size(),
                                                opts.no_stratify ? 0 : 1, &report);
        s != SEP_OK) {
        return diagnose(s, "evaluate");
    }
    const ReportPtr report_guard(report, sep_report_free);

    OwnedString warnings;
    if (sep_report_warnings(report, &warnings.text) == SEP_OK && warnings.get()[0] != '\0') {
        std::string line;
        for (const char* c = warnings.get(); *c; ++c) {
            if (*c == '\n') {
                std::fprintf(stderr, "warning: %s\n", line.c_str());
                line.clear();
            } else {
                line += *c;
            }
        }
    }

    OwnedString table;
    if (const sep_status s = sep_report_tsv(report, &table.text); s != SEP_OK) {
        return diagnose(s, "evaluate");
    }
    std::fputs(table.get(), stdout);
    if (const int rc = write_artifact(fs::path(opts.out_dir) / "cv.report.tsv", table.get(),
                                      "evaluate")) {
        return rc;
    }

    OwnedString sidecar;
    if (const sep_status s = sep_report_json(report, &sidecar.text); s != SEP_OK) {
        return diagnose(s, "evaluate");
    }
    if (const int rc = write_artifact(fs::path(opts.out_dir) / "cv.report.json", sidecar.get(),
                                      "evaluate")) {
        return rc;
    }

    OwnedString distribution;
    if (const sep_status s = sep_distribution_tsv(corpus.get(), ontology.get(), opts.threshold,
                                                  &distribution.text);
        s != SEP_OK) {
        return diagnose(s, "evaluate");
    }
    if (const int rc = write_artifact(fs::path(opts.out_dir) / "distribution.tsv",
                                      distribution.get(), "evaluate")) {
        return rc;
    }

    OwnedString scatter;
    if (const sep_status s = sep_encode_tsv(corpus.get(), ontology.get(), &scatter.text);
        s != SEP_OK) {
        return diagnose(s, "evaluate");
    }
    return write_artifact(fs::path(opts.out_dir) / "scatter.tsv", scatter.get(), "evaluate");
}

}  // namespace

int main(int argc, char** argv) {
    Options opts;
    sep_synth_config_default(&opts.synth);
    sep_train_config_default(&opts.training);

    CLI::App app{"ontology-based medicine side-effect prediction pipeline"};
    app.name("sepredict");
    app.fallthrough();
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::simple);
    app.set_config("--config", "", "flat key=value configuration file");

    app.add_option("--ontology", opts.ontology_path, "drug ontology file (.ont.tsv)");
    app.add_option("--corpus", opts.corpus_path, "prescription corpus file (.rx.tsv)");
    app.add_option("--model", opts.model_path, "trained model file (.model.json)");
    app.add_option("--out", opts.out_dir, "output directory for artifacts")
        ->capture_default_str();
    const CLI::Option* seed_opt =
        app.add_option("--seed", opts.seed, "master seed (required for generate/train/evaluate)");

    app.add_option("--layers", opts.layers, "network layer sizes, comma separated")
        ->capture_default_str();
    app.add_option("--learning-rate", opts.training.learning_rate, "gradient descent step size")
        ->capture_default_str();
    app.add_option("--epochs", opts.training.epochs, "training epochs")->capture_default_str();
    app.add_option("--batch-size", opts.training.batch_size, "mini-batch size")
        ->capture_default_str();
    app.add_option("--l2", opts.training.l2, "l2 regularization strength")
        ->capture_default_str();

    app.add_option("--k", opts.k, "number of cross-validation folds")->capture_default_str();
    app.add_flag("--no-stratify", opts.no_stratify, "plain shuffled folds instead of stratified");
    app.add_option("--threshold", opts.threshold, "dosage threshold for the distribution report")
        ->capture_default_str();

    app.add_option("--safe", opts.synth.n_safe, "synthetic safe prescription count")
        ->capture_default_str();
    app.add_option("--unsafe", opts.synth.n_unsafe, "synthetic unsafe prescription count")
        ->capture_default_str();
    app.add_option("--hot", opts.synth.n_hot, "synthetic hot drug count")->capture_default_str();
    app.add_option("--cold", opts.synth.n_cold, "synthetic cold drug count")
        ->capture_default_str();
    app.add_option("--neutral", opts.synth.n_neutral, "synthetic neutral drug count")
        ->capture_default_str();
    app.add_option("--safe-low", opts.synth.safe_total_low, "safe total dosage range low end")
        ->capture_default_str();
    app.add_option("--safe-high", opts.synth.safe_total_high, "safe total dosage range high end")
        ->capture_default_str();
    app.add_option("--unsafe-low", opts.synth.unsafe_total_low,
                   "unsafe total dosage range low end")
        ->capture_default_str();
    app.add_option("--unsafe-high", opts.synth.unsafe_total_high,
                   "unsafe total dosage range high end")
        ->capture_default_str();
    app.add_option("--noise", opts.synth.noise, "fraction of samples with swapped class range")
        ->capture_default_str();
    app.add_option("--noise-safe", opts.synth.noise_safe,
                   "noise override for the safe class (negative = inherit --noise)");
    app.add_option("--noise-unsafe", opts.synth.noise_unsafe,
                   "noise override for the unsafe class (negative = inherit --noise)");
    app.add_option("--min-items", opts.synth.min_items, "minimum drugs per prescription")
        ->capture_default_str();
    app.add_option("--max-items", opts.synth.max_items, "maximum drugs per prescription")
        ->capture_default_str();

    CLI::App* generate =
        app.add_subcommand("generate", "write a synthetic ontology and corpus");
    CLI::App* validate =
        app.add_subcommand("validate", "check ontology coverage of a corpus");
    CLI::App* encode = app.add_subcommand("encode", "emit influential-factor vectors");
    CLI::App* train = app.add_subcommand("train", "train a model on the full corpus");
    CLI::App* predict = app.add_subcommand("predict", "score a corpus with a trained model");
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "stratified k-fold cross-validation report");
    for (CLI::App* sub : {generate, validate, encode, train, predict, evaluate}) {
        sub->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand(generate)) {
        if (const int rc = require_seed(seed_opt, "generate")) {
            return rc;
        }
        return cmd_generate(opts);
    }
    if (app.got_subcommand(validate)) {
        return cmd_validate(opts);
    }
    if (app.got_subcommand(encode)) {
        return cmd_encode(opts);
    }
    if (app.got_subcommand(train)) {
        if (const int rc = require_seed(seed_opt, "train")) {
            return rc;
        }
        return cmd_train(opts);
    }
    if (app.got_subcommand(predict)) {
        return cmd_predict(opts);
    }
    if (app.got_subcommand(evaluate)) {
        if (const int rc = require_seed(seed_opt, "evaluate")) {
            return rc;
        }
        return cmd_evaluate(opts);
    }
    return usage_error("cli", "no subcommand given");
}
