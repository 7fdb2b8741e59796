#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "sepredict.h"

namespace {

constexpr const char* kOntologyText =
    "# version: test/1\n"
    "aconiti\thot\n"
    "bupleuri\tcold\n"
    "glycyrrhizae\tneutral\n";

constexpr const char* kCorpusText =
    "# version: rx/1\n"
    "# ontology_version: test/1\n"
    "p1\tsafe\taconiti:10.5,bupleuri:5,glycyrrhizae:2\n"
    "p2\tunsafe\taconiti:700,bupleuri:40\n";

struct OwnedString {
    char* text = nullptr;
    ~OwnedString() { sep_string_free(text); }
    std::string str() const { return text ? text : "<null>"; }
};

std::filesystem::path temp_path(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

sep_synth_config small_synth(uint64_t seed) {
    sep_synth_config config;
    sep_synth_config_default(&config);
    config.n_safe = 18;
    config.n_unsafe = 12;
    config.n_hot = 6;
    config.n_cold = 6;
    config.n_neutral = 4;
    config.noise = 0.0;
    config.seed = seed;
    return config;
}

sep_train_config quick_train(uint64_t seed) {
    sep_train_config config;
    sep_train_config_default(&config);
    config.epochs = 80;
    config.seed = seed;
    return config;
}

}  // namespace

TEST_CASE("the library reports a version") {
    REQUIRE(sep_version() != nullptr);
    CHECK(std::strlen(sep_version()) > 0);
}

TEST_CASE("ontology lifecycle: parse, size, save, load") {
    sep_ontology* ontology = nullptr;
    REQUIRE(sep_ontology_parse(kOntologyText, &ontology) == SEP_OK);
    REQUIRE(ontology != nullptr);
    CHECK(sep_ontology_size(ontology) == 3);
    CHECK(std::string(sep_last_error()).empty());

    const auto path = temp_path("sep_capi.ont.tsv");
    REQUIRE(sep_ontology_save(ontology, path.string().c_str()) == SEP_OK);
    sep_ontology* reloaded = nullptr;
    REQUIRE(sep_ontology_load(path.string().c_str(), &reloaded) == SEP_OK);
    CHECK(sep_ontology_size(reloaded) == 3);

    sep_ontology_free(reloaded);
    sep_ontology_free(ontology);
    std::filesystem::remove(path);
}

TEST_CASE("parse failures surface as SEP_ERR_PARSE with a message") {
    sep_ontology* ontology = nullptr;
    CHECK(sep_ontology_parse("aconiti\tlukewarm\n", &ontology) == SEP_ERR_PARSE);
    CHECK(ontology == nullptr);
    CHECK(!std::string(sep_last_error()).empty());

    sep_corpus* corpus = nullptr;
    CHECK(sep_corpus_parse("p1\tsafe\n", &corpus) == SEP_ERR_PARSE);
    CHECK(corpus == nullptr);
    CHECK(!std::string(sep_last_error()).empty());
}

TEST_CASE("null arguments are rejected without crashing") {
    CHECK(sep_ontology_parse(nullptr, nullptr) == SEP_ERR_INVALID_ARG);
    CHECK(!std::string(sep_last_error()).empty());
    CHECK(sep_corpus_size(nullptr) == 0);
    CHECK(sep_ontology_size(nullptr) == 0);
    CHECK(sep_train(nullptr, nullptr, nullptr, nullptr, 0, nullptr) == SEP_ERR_INVALID_ARG);
    sep_string_free(nullptr);
    sep_ontology_free(nullptr);
    sep_corpus_free(nullptr);
    sep_model_free(nullptr);
    sep_report_free(nullptr);
}

TEST_CASE("missing files surface as SEP_ERR_IO") {
    sep_ontology* ontology = nullptr;
    CHECK(sep_ontology_load("/nonexistent/sep.ont.tsv", &ontology) == SEP_ERR_IO);
    CHECK(ontology == nullptr);
    sep_model* model = nullptr;
    CHECK(sep_model_load("/nonexistent/sep.model.json", &model) == SEP_ERR_IO);
}

TEST_CASE("corpus lifecycle with coverage validation") {
    sep_corpus* corpus = nullptr;
    REQUIRE(sep_corpus_parse(kCorpusText, &corpus) == SEP_OK);
    CHECK(sep_corpus_size(corpus) == 2);

    sep_ontology* ontology = nullptr;
    REQUIRE(sep_ontology_parse(kOntologyText, &ontology) == SEP_OK);

    OwnedString gaps;
    size_t gap_count = 99;
    REQUIRE(sep_corpus_validate(corpus, ontology, &gaps.text, &gap_count) == SEP_OK);
    CHECK(gap_count == 0);
    CHECK(gaps.str().empty());

    sep_corpus* partial = nullptr;
    REQUIRE(sep_corpus_parse("p9\tsafe\taconiti:3,mystery:8\n", &partial) == SEP_OK);
    OwnedString missing;
    size_t missing_count = 0;
    REQUIRE(sep_corpus_validate(partial, ontology, &missing.text, &missing_count) == SEP_OK);
    CHECK(missing_count == 1);
    CHECK(missing.str() == "p9\tmystery\n");

    sep_corpus_free(partial);
    sep_ontology_free(ontology);
    sep_corpus_free(corpus);
}

TEST_CASE("encoding renders raw influential factors") {
    sep_corpus* corpus = nullptr;
    sep_ontology* ontology = nullptr;
    REQUIRE(sep_corpus_parse(kCorpusText, &corpus) == SEP_OK);
    REQUIRE(sep_ontology_parse(kOntologyText, &ontology) == SEP_OK);

    OwnedString encoded;
    REQUIRE(sep_encode_tsv(corpus, ontology, &encoded.text) == SEP_OK);
    CHECK(encoded.str() ==
          "p1\t10.5\t5\tsafe\n"
          "p2\t700\t40\tunsafe\n");

    // a drug outside the ontology is a domain error, not a parse error
    sep_corpus* partial = nullptr;
    REQUIRE(sep_corpus_parse("p9\tsafe\tmystery:8\n", &partial) == SEP_OK);
    OwnedString bad;
    CHECK(sep_encode_tsv(partial, ontology, &bad.text) == SEP_ERR_DOMAIN);
    CHECK(bad.text == nullptr);

    sep_corpus_free(partial);
    sep_ontology_free(ontology);
    sep_corpus_free(corpus);
}

TEST_CASE("the default synth config matches the native defaults") {
    sep_synth_config config;
    sep_synth_config_default(&config);
    CHECK(config.n_safe == 150);
    CHECK(config.n_unsafe == 92);
    CHECK(config.n_hot == 40);
    CHECK(config.n_cold == 35);
    CHECK(config.n_neutral == 25);
    CHECK(config.threshold == 500.0);
    CHECK(config.noise == 0.1);
    CHECK(config.noise_safe < 0.0);
    CHECK(config.noise_unsafe < 0.0);
    CHECK(config.min_items == 3);
    CHECK(config.max_items == 12);

    sep_ontology* ontology = nullptr;
    sep_corpus* corpus = nullptr;
    REQUIRE(sep_generate(&config, &ontology, &corpus) == SEP_OK);
    CHECK(sep_ontology_size(ontology) == 100);
    CHECK(sep_corpus_size(corpus) == 242);
    sep_corpus_free(corpus);
    sep_ontology_free(ontology);

    config.noise = 2.0;
    CHECK(sep_generate(&config, &ontology, &corpus) == SEP_ERR_INVALID_ARG);
}

TEST_CASE("train, predict, and persist a model end to end") {
    const sep_synth_config synth = small_synth(31);
    sep_ontology* ontology = nullptr;
    sep_corpus* corpus = nullptr;
    REQUIRE(sep_generate(&synth, &ontology, &corpus) == SEP_OK);

    const sep_train_config config = quick_train(5);
    sep_model* model = nullptr;
    REQUIRE(sep_train(corpus, ontology, &config, nullptr, 0, &model) == SEP_OK);
    REQUIRE(model != nullptr);

    double p_safe = -1.0;
    double p_unsafe = -1.0;
    int predicted_safe = -1;
    REQUIRE(sep_predict(model, 120.0, 80.0, &p_safe, &p_unsafe, &predicted_safe) == SEP_OK);
    CHECK(p_safe >= 0.0);
    CHECK(p_unsafe >= 0.0);
    CHECK(p_safe + p_unsafe == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(predicted_safe == (p_safe > p_unsafe ? 1 : 0));
    REQUIRE(sep_predict(model, 120.0, 80.0, nullptr, nullptr, nullptr) == SEP_OK);
    CHECK(sep_predict(model, std::nan(""), 80.0, &p_safe, nullptr, nullptr) == SEP_ERR_DOMAIN);

    const auto path = temp_path("sep_capi.model.json");
    REQUIRE(sep_model_save(model, path.string().c_str()) == SEP_OK);
    sep_model* reloaded = nullptr;
    REQUIRE(sep_model_load(path.string().c_str(), &reloaded) == SEP_OK);

    const auto copy = temp_path("sep_capi.model.copy.json");
    REQUIRE(sep_model_save(reloaded, copy.string().c_str()) == SEP_OK);
    CHECK(slurp(path) == slurp(copy));

    double q_safe = -1.0;
    REQUIRE(sep_predict(reloaded, 120.0, 80.0, &q_safe, nullptr, nullptr) == SEP_OK);
    CHECK(q_safe == p_safe);

    OwnedString predictions;
    REQUIRE(sep_predict_corpus(model, corpus, ontology, &predictions.text) == SEP_OK);
    const std::string text = predictions.str();
    CHECK(text.rfind("p0001\t", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 30);  // one row per prescription

    sep_model_free(reloaded);
    sep_model_free(model);
    sep_corpus_free(corpus);
    sep_ontology_free(ontology);
    std::filesystem::remove(path);
    std::filesystem::remove(copy);
}

TEST_CASE("custom layer sizes are validated") {
    const sep_synth_config synth = small_synth(32);
    sep_ontology* ontology = nullptr;
    sep_corpus* corpus = nullptr;
    REQUIRE(sep_generate(&synth, &ontology, &corpus) == SEP_OK);

    const sep_train_config config = quick_train(5);
    const int too_small[] = {2, 10, 10, 10, 2};  // hidden sum 30 <= 60
    sep_model* model = nullptr;
    CHECK(sep_train(corpus, ontology, &config, too_small, 5, &model) == SEP_ERR_INVALID_ARG);
    CHECK(model == nullptr);

    const int wide[] = {2, 30, 30, 10, 2};
    REQUIRE(sep_train(corpus, ontology, &config, wide, 5, &model) == SEP_OK);
    sep_model_free(model);
    sep_corpus_free(corpus);
    sep_ontology_free(ontology);
}

TEST_CASE("cross-validation reports per-fold and average rates") {
    const sep_synth_config synth = small_synth(33);
    sep_ontology* ontology = nullptr;
    sep_corpus* corpus = nullptr;
    REQUIRE(sep_generate(&synth, &ontology, &corpus) == SEP_OK);

    const sep_train_config config = quick_train(0);
    sep_cv_report* report = nullptr;
    REQUIRE(sep_cross_validate(corpus, ontology, 3, 17, &config, nullptr, 0, 1, &report) ==
            SEP_OK);
    REQUIRE(report != nullptr);
    REQUIRE(sep_report_fold_count(report) == 3);

    for (size_t i = 0; i < 3; ++i) {
        double se = -1.0, sp = -1.0, acc = -1.0;
        REQUIRE(sep_report_fold(report, i, &se, &sp, &acc) == SEP_OK);
        CHECK(se >= 0.0);
        CHECK(se <= 1.0);
        CHECK(sp >= 0.0);
        CHECK(sp <= 1.0);
        CHECK(acc >= 0.0);
        CHECK(acc <= 1.0);
    }
    CHECK(sep_report_fold(report, 3, nullptr, nullptr, nullptr) == SEP_ERR_INVALID_ARG);

    double avg_se = -1.0, avg_sp = -1.0, avg_acc = -1.0;
    REQUIRE(sep_report_averages(report, &avg_se, &avg_sp, &avg_acc) == SEP_OK);
    CHECK(avg_acc >= 0.0);
    CHECK(avg_acc <= 1.0);

    OwnedString tsv;
    REQUIRE(sep_report_tsv(report, &tsv.text) == SEP_OK);
    CHECK(tsv.str().rfind("fold\tse\tsp\tacc\n", 0) == 0);
    CHECK(tsv.str().find("avg\t") != std::string::npos);

    OwnedString json;
    REQUIRE(sep_report_json(report, &json.text) == SEP_OK);
    CHECK(json.str().find("\"avg_acc\"") != std::string::npos);

    OwnedString warnings;
    REQUIRE(sep_report_warnings(report, &warnings.text) == SEP_OK);
    CHECK(warnings.str().empty());

    sep_report_free(report);

    CHECK(sep_cross_validate(corpus, ontology, 1, 17, &config, nullptr, 0, 1, &report) ==
          SEP_ERR_INVALID_ARG);
    CHECK(sep_cross_validate(corpus, ontology, 31, 17, &config, nullptr, 0, 1, &report) ==
          SEP_ERR_INVALID_ARG);

    sep_corpus_free(corpus);
    sep_ontology_free(ontology);
}

TEST_CASE("undefined rates come back as NaN with warnings") {
    sep_synth_config synth = small_synth(34);
    synth.n_safe = 9;
    synth.n_unsafe = 2;
    sep_ontology* ontology = nullptr;
    sep_corpus* corpus = nullptr;
    REQUIRE(sep_generate(&synth, &ontology, &corpus) == SEP_OK);

    sep_train_config config = quick_train(1);
    config.epochs = 20;
    sep_cv_report* report = nullptr;
    REQUIRE(sep_cross_validate(corpus, ontology, 3, 2, &config, nullptr, 0, 1, &report) == SEP_OK);

    int nan_sp = 0;
    for (size_t i = 0; i < sep_report_fold_count(report); ++i) {
        double sp = 0.0;
        REQUIRE(sep_report_fold(report, i, nullptr, &sp, nullptr) == SEP_OK);
        nan_sp += std::isnan(sp) ? 1 : 0;
    }
    CHECK(nan_sp == 1);  // 2 unsafe samples across 3 folds leave one fold without

    OwnedString warnings;
    REQUIRE(sep_report_warnings(report, &warnings.text) == SEP_OK);
    CHECK(warnings.str().find("specificity undefined") != std::string::npos);

    sep_report_free(report);
    sep_corpus_free(corpus);
    sep_ontology_free(ontology);
}

TEST_CASE("the distribution table is rendered per class") {
    sep_corpus* corpus = nullptr;
    sep_ontology* ontology = nullptr;
    REQUIRE(sep_corpus_parse(kCorpusText, &corpus) == SEP_OK);
    REQUIRE(sep_ontology_parse(kOntologyText, &ontology) == SEP_OK);

    OwnedString table;
    REQUIRE(sep_distribution_tsv(corpus, ontology, 500.0, &table.text) == SEP_OK);
    CHECK(table.str() ==
          "class\tabove_threshold_fraction\tcount\n"
          "safe\t0\t1\n"
          "unsafe\t1\t1\n");

    sep_corpus* empty = nullptr;
    REQUIRE(sep_corpus_parse("", &empty) == SEP_OK);
    OwnedString none;
    CHECK(sep_distribution_tsv(empty, ontology, 500.0, &none.text) == SEP_ERR_DOMAIN);

    sep_corpus_free(empty);
    sep_corpus_free(corpus);
    sep_ontology_free(ontology);
}
