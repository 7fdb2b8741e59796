// C binding over the C++ core. Exceptions stop here: every entry point maps
// sep::Error codes onto sep_status and stashes the message in a thread-local
// slot for sep_last_error().

#include "sepredict.h"

#include <cstring>
#include <limits>
#include <string>
#include <utility>

#include "sepredict/corpus.hpp"
#include "sepredict/encoder.hpp"
#include "sepredict/error.hpp"
#include "sepredict/evaluation.hpp"
#include "sepredict/io.hpp"
#include "sepredict/network.hpp"
#include "sepredict/synth.hpp"

struct sep_ontology {
    sep::DrugOntology value;
};
struct sep_corpus {
    sep::Corpus value;
};
struct sep_model {
    sep::NetworkModel value;
};
struct sep_cv_report {
    sep::CvReport value;
};

namespace {

thread_local std::string t_last_error;

sep_status status_of(sep::Errc code) {
    using sep::Errc;
    switch (code) {
        case Errc::malformed_line:
        case Errc::duplicate_drug:
        case Errc::unknown_attribution:
        case Errc::duplicate_prescription_id:
        case Errc::duplicate_drug_in_prescription:
        case Errc::negative_dosage:
        case Errc::unknown_label:
        case Errc::bad_model_file:
            return SEP_ERR_PARSE;
        case Errc::io_error:
            return SEP_ERR_IO;
        case Errc::invalid_shape:
        case Errc::k_too_large:
        case Errc::invalid_config:
        case Errc::invalid_argument:
            return SEP_ERR_INVALID_ARG;
        case Errc::empty_ontology:
        case Errc::drug_not_in_vocabulary:
        case Errc::dimension_mismatch:
        case Errc::empty_sample_set:
        case Errc::non_finite_input:
        case Errc::empty_batch:
        case Errc::empty_split:
            return SEP_ERR_DOMAIN;
    }
    return SEP_ERR_INTERNAL;
}

template <typename Fn>
sep_status guarded(Fn&& fn) {
    t_last_error.clear();
    try {
        return fn();
    } catch (const sep::Error& e) {
        t_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return SEP_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown failure";
        return SEP_ERR_INTERNAL;
    }
}

sep_status invalid(const char* message) {
    t_last_error = message;
    return SEP_ERR_INVALID_ARG;
}

char* dup_string(const std::string& text) {
    char* out = new char[text.size() + 1];
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

double rate_or_nan(const std::optional<double>& rate) {
    return rate ? *rate : std::numeric_limits<double>::quiet_NaN();
}

sep::NetworkShape shape_of(const int* layer_sizes, size_t n_layers) {
    sep::NetworkShape shape;
    if (layer_sizes && n_layers > 0) {
        shape.layer_sizes.assign(layer_sizes, layer_sizes + n_layers);
    }
    return shape;
}

sep::TrainConfig train_config_of(const sep_train_config& config) {
    sep::TrainConfig out;
    out.learning_rate = config.learning_rate;
    out.epochs = config.epochs;
    out.batch_size = config.batch_size;
    out.seed = config.seed;
    out.l2 = config.l2;
    return out;
}

}  // namespace

extern "C" {

const char* sep_version(void) { return "1.0.0"; }

const char* sep_last_error(void) { return t_last_error.c_str(); }

void sep_string_free(char* text) { delete[] text; }

/* -- drug ontology ------------------------------------------------------- */

sep_status sep_ontology_parse(const char* text, sep_ontology** out) {
    if (!text || !out) {
        return invalid("sep_ontology_parse: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        *out = new sep_ontology{sep::parse_ontology(text)};
        return SEP_OK;
    });
}

sep_status sep_ontology_load(const char* path, sep_ontology** out) {
    if (!path || !out) {
        return invalid("sep_ontology_load: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        *out = new sep_ontology{sep::load_ontology(path)};
        return SEP_OK;
    });
}

sep_status sep_ontology_save(const sep_ontology* ontology, const char* path) {
    if (!ontology || !path) {
        return invalid("sep_ontology_save: null argument");
    }
    return guarded([&] {
        sep::save(ontology->value, path);
        return SEP_OK;
    });
}

size_t sep_ontology_size(const sep_ontology* ontology) {
    return ontology ? ontology->value.entries.size() : 0;
}

void sep_ontology_free(sep_ontology* ontology) { delete ontology; }

/* -- prescription corpus ------------------------------------------------- */

sep_status sep_corpus_parse(const char* text, sep_corpus** out) {
    if (!text || !out) {
        return invalid("sep_corpus_parse: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        *out = new sep_corpus{sep::parse_corpus(text)};
        return SEP_OK;
    });
}

sep_status sep_corpus_load(const char* path, sep_corpus** out) {
    if (!path || !out) {
        return invalid("sep_corpus_load: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        *out = new sep_corpus{sep::load_corpus(path)};
        return SEP_OK;
    });
}

sep_status sep_corpus_save(const sep_corpus* corpus, const char* path) {
    if (!corpus || !path) {
        return invalid("sep_corpus_save: null argument");
    }
    return guarded([&] {
        sep::save(corpus->value, path);
        return SEP_OK;
    });
}

size_t sep_corpus_size(const sep_corpus* corpus) {
    return corpus ? corpus->value.prescriptions.size() : 0;
}

void sep_corpus_free(sep_corpus* corpus) { delete corpus; }

sep_status sep_corpus_validate(const sep_corpus* corpus, const sep_ontology* ontology,
                               char** gaps, size_t* gap_count) {
    if (!corpus || !ontology || !gaps) {
        return invalid("sep_corpus_validate: null argument");
    }
    *gaps = nullptr;
    return guarded([&] {
        const auto pairs = sep::validate_against(corpus->value, ontology->value);
        std::string text;
        for (const auto& [id, drug] : pairs) {
            text += id + "\t" + drug + "\n";
        }
        *gaps = dup_string(text);
        if (gap_count) {
            *gap_count = pairs.size();
        }
        return SEP_OK;
    });
}

sep_status sep_encode_tsv(const sep_corpus* corpus, const sep_ontology* ontology, char** out) {
    if (!corpus || !ontology || !out) {
        return invalid("sep_encode_tsv: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        *out = dup_string(sep::encoded_tsv(sep::encode_corpus(corpus->value, ontology->value)));
        return SEP_OK;
    });
}

/* -- synthetic corpus ---------------------------------------------------- */

void sep_synth_config_default(sep_synth_config* config) {
    if (!config) {
        return;
    }
    const sep::SynthConfig defaults;
    config->n_safe = defaults.n_safe;
    config->n_unsafe = defaults.n_unsafe;
    config->n_hot = defaults.n_hot;
    config->n_cold = defaults.n_cold;
    config->n_neutral = defaults.n_neutral;
    config->threshold = defaults.threshold;
    config->safe_total_low = defaults.safe_total_range[0];
    config->safe_total_high = defaults.safe_total_range[1];
    config->unsafe_total_low = defaults.unsafe_total_range[0];
    config->unsafe_total_high = defaults.unsafe_total_range[1];
    config->noise = defaults.noise;
    config->noise_safe = -1.0;
    config->noise_unsafe = -1.0;
    config->min_items = defaults.min_items;
    config->max_items = defaults.max_items;
    config->seed = defaults.seed;
}

sep_status sep_generate(const sep_synth_config* config, sep_ontology** ontology,
                        sep_corpus** corpus) {
    if (!config || !ontology || !corpus) {
        return invalid("sep_generate: null argument");
    }
    *ontology = nullptr;
    *corpus = nullptr;
    return guarded([&] {
        sep::SynthConfig cfg;
        cfg.n_safe = config->n_safe;
        cfg.n_unsafe = config->n_unsafe;
        cfg.n_hot = config->n_hot;
        cfg.n_cold = config->n_cold;
        cfg.n_neutral = config->n_neutral;
        cfg.threshold = config->threshold;
        cfg.safe_total_range = {config->safe_total_low, config->safe_total_high};
        cfg.unsafe_total_range = {config->unsafe_total_low, config->unsafe_total_high};
        cfg.noise = config->noise;
        if (config->noise_safe >= 0.0) {
            cfg.noise_safe = config->noise_safe;
        }
        if (config->noise_unsafe >= 0.0) {
            cfg.noise_unsafe = config->noise_unsafe;
        }
        cfg.min_items = config->min_items;
        cfg.max_items = config->max_items;
        cfg.seed = config->seed;
        sep::SynthOutput output = sep::generate(cfg);
        *ontology = new sep_ontology{std::move(output.ontology)};
        *corpus = new sep_corpus{std::move(output.corpus)};
        return SEP_OK;
    });
}

/* -- training and prediction --------------------------------------------- */

void sep_train_config_default(sep_train_config* config) {
    if (!config) {
        return;
    }
    const sep::TrainConfig defaults;
    config->learning_rate = defaults.learning_rate;
    config->epochs = defaults.epochs;
    config->batch_size = defaults.batch_size;
    config->seed = defaults.seed;
    config->l2 = defaults.l2;
}

sep_status sep_train(const sep_corpus* corpus, const sep_ontology* ontology,
                     const sep_train_config* config, const int* layer_sizes, size_t n_layers,
                     sep_model** out) {
    if (!corpus || !ontology || !config || !out) {
        return invalid("sep_train: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        const auto samples = sep::encode_corpus(corpus->value, ontology->value);
        *out = new sep_model{sep::train(samples, train_config_of(*config),
                                        shape_of(layer_sizes, n_layers))};
        return SEP_OK;
    });
}

sep_status sep_model_load(const char* path, sep_model** out) {
    if (!path || !out) {
        return invalid("sep_model_load: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        *out = new sep_model{sep::load_model(path)};
        return SEP_OK;
    });
}

sep_status sep_model_save(const sep_model* model, const char* path) {
    if (!model || !path) {
        return invalid("sep_model_save: null argument");
    }
    return guarded([&] {
        sep::save_model(model->value, path);
        return SEP_OK;
    });
}

void sep_model_free(sep_model* model) { delete model; }

sep_status sep_predict(const sep_model* model, double hot, double cold, double* p_safe,
                       double* p_unsafe, int* predicted_safe) {
    if (!model) {
        return invalid("sep_predict: null model");
    }
    return guarded([&] {
        const sep::Prediction prediction = sep::predict(model->value, {hot, cold});
        if (p_safe) {
            *p_safe = prediction.probabilities[0];
        }
        if (p_unsafe) {
            *p_unsafe = prediction.probabilities[1];
        }
        if (predicted_safe) {
            *predicted_safe = prediction.predicted == sep::Label::Safe ? 1 : 0;
        }
        return SEP_OK;
    });
}

sep_status sep_predict_corpus(const sep_model* model, const sep_corpus* corpus,
                              const sep_ontology* ontology, char** out) {
    if (!model || !corpus || !ontology || !out) {
        return invalid("sep_predict_corpus: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        const auto samples = sep::encode_corpus(corpus->value, ontology->value);
        std::string text;
        for (const auto& sample : samples) {
            const sep::Prediction prediction = sep::predict(model->value, sample.input);
            text += sample.prescription_id + "\t" + sep::g17(prediction.probabilities[0]) +
                    "\t" + sep::g17(prediction.probabilities[1]) + "\t" +
                    sep::to_string(prediction.predicted) + "\n";
        }
        *out = dup_string(text);
        return SEP_OK;
    });
}

/* -- evaluation ----------------------------------------------------------- */

sep_status sep_cross_validate(const sep_corpus* corpus, const sep_ontology* ontology, int k,
                              uint64_t seed, const sep_train_config* config,
                              const int* layer_sizes, size_t n_layers, int stratified,
                              sep_cv_report** out) {
    if (!corpus || !ontology || !config || !out) {
        return invalid("sep_cross_validate: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        *out = new sep_cv_report{sep::cross_validate(corpus->value, ontology->value, k, seed,
                                                     train_config_of(*config),
                                                     shape_of(layer_sizes, n_layers),
                                                     stratified != 0)};
        return SEP_OK;
    });
}

size_t sep_report_fold_count(const sep_cv_report* report) {
    return report ? report->value.folds.size() : 0;
}

sep_status sep_report_fold(const sep_cv_report* report, size_t index, double* se, double* sp,
                           double* acc) {
    if (!report) {
        return invalid("sep_report_fold: null report");
    }
    if (index >= report->value.folds.size()) {
        return invalid("sep_report_fold: fold index out of range");
    }
    const sep::FoldReport& fold = report->value.folds[index];
    if (se) {
        *se = rate_or_nan(fold.se);
    }
    if (sp) {
        *sp = rate_or_nan(fold.sp);
    }
    if (acc) {
        *acc = fold.acc;
    }
    t_last_error.clear();
    return SEP_OK;
}

sep_status sep_report_averages(const sep_cv_report* report, double* se, double* sp, double* acc) {
    if (!report) {
        return invalid("sep_report_averages: null report");
    }
    if (se) {
        *se = rate_or_nan(report->value.avg_se);
    }
    if (sp) {
        *sp = rate_or_nan(report->value.avg_sp);
    }
    if (acc) {
        *acc = report->value.avg_acc;
    }
    t_last_error.clear();
    return SEP_OK;
}

sep_status sep_report_tsv(const sep_cv_report* report, char** out) {
    if (!report || !out) {
        return invalid("sep_report_tsv: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        *out = dup_string(sep::report_tsv(report->value));
        return SEP_OK;
    });
}

sep_status sep_report_json(const sep_cv_report* report, char** out) {
    if (!report || !out) {
        return invalid("sep_report_json: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        *out = dup_string(sep::report_json(report->value));
        return SEP_OK;
    });
}

sep_status sep_report_warnings(const sep_cv_report* report, char** out) {
    if (!report || !out) {
        return invalid("sep_report_warnings: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        std::string text;
        for (const std::string& warning : report->value.warnings) {
            text += warning + "\n";
        }
        *out = dup_string(text);
        return SEP_OK;
    });
}

void sep_report_free(sep_cv_report* report) { delete report; }

sep_status sep_distribution_tsv(const sep_corpus* corpus, const sep_ontology* ontology,
                                double threshold, char** out) {
    if (!corpus || !ontology || !out) {
        return invalid("sep_distribution_tsv: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        const auto samples = sep::encode_corpus(corpus->value, ontology->value);
        *out = dup_string(sep::distribution_tsv(sep::distribution_report(samples, threshold)));
        return SEP_OK;
    });
}

}  // extern "C"
