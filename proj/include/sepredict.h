/* C interface to the side-effect prediction pipeline.
 *
 * All functions return sep_status; on failure sep_last_error() holds a
 * message for the calling thread. Objects come back through opaque handles
 * released by their matching _free function. Strings returned through a
 * char** are NUL-terminated, owned by the caller, and released with
 * sep_string_free. Undefined rates (zero denominator) come back as NaN.
 */
#ifndef SEPREDICT_H
#define SEPREDICT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SEP_BUILD)
#define SEP_API __declspec(dllexport)
#else
#define SEP_API __declspec(dllimport)
#endif
#else
#define SEP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sep_status {
    SEP_OK = 0,
    SEP_ERR_INVALID_ARG = 1, /* bad parameter or configuration */
    SEP_ERR_PARSE = 2,       /* malformed document */
    SEP_ERR_IO = 3,          /* file could not be read or written */
    SEP_ERR_DOMAIN = 4,      /* operation precondition violated */
    SEP_ERR_INTERNAL = 5
} sep_status;

typedef struct sep_ontology sep_ontology;
typedef struct sep_corpus sep_corpus;
typedef struct sep_model sep_model;
typedef struct sep_cv_report sep_cv_report;

SEP_API const char* sep_version(void);

/* Message from the last failing call on this thread; empty if none. */
SEP_API const char* sep_last_error(void);

SEP_API void sep_string_free(char* text);

/* -- drug ontology ------------------------------------------------------- */

SEP_API sep_status sep_ontology_parse(const char* text, sep_ontology** out);
SEP_API sep_status sep_ontology_load(const char* path, sep_ontology** out);
SEP_API sep_status sep_ontology_save(const sep_ontology* ontology, const char* path);
SEP_API size_t sep_ontology_size(const sep_ontology* ontology);
SEP_API void sep_ontology_free(sep_ontology* ontology);

/* -- prescription corpus ------------------------------------------------- */

SEP_API sep_status sep_corpus_parse(const char* text, sep_corpus** out);
SEP_API sep_status sep_corpus_load(const char* path, sep_corpus** out);
SEP_API sep_status sep_corpus_save(const sep_corpus* corpus, const char* path);
SEP_API size_t sep_corpus_size(const sep_corpus* corpus);
SEP_API void sep_corpus_free(sep_corpus* corpus);

/* Coverage gaps as "prescription_id<TAB>drug" lines (empty string when the
 * ontology is total over the corpus). gap_count may be NULL. */
SEP_API sep_status sep_corpus_validate(const sep_corpus* corpus, const sep_ontology* ontology,
                                       char** gaps, size_t* gap_count);

/* Encoded samples as "id<TAB>hot<TAB>cold<TAB>label" lines (raw IFs). */
SEP_API sep_status sep_encode_tsv(const sep_corpus* corpus, const sep_ontology* ontology,
                                  char** out);

/* -- synthetic corpus ---------------------------------------------------- */

typedef struct sep_synth_config {
    int n_safe;
    int n_unsafe;
    int n_hot;
    int n_cold;
    int n_neutral;
    double threshold;
    double safe_total_low;
    double safe_total_high;
    double unsafe_total_low;
    double unsafe_total_high;
    double noise;
    double noise_safe;   /* negative = inherit noise */
    double noise_unsafe; /* negative = inherit noise */
    int min_items;
    int max_items;
    uint64_t seed;
} sep_synth_config;

SEP_API void sep_synth_config_default(sep_synth_config* config);
SEP_API sep_status sep_generate(const sep_synth_config* config, sep_ontology** ontology,
                                sep_corpus** corpus);

/* -- training and prediction --------------------------------------------- */

typedef struct sep_train_config {
    double learning_rate;
    int epochs;
    int batch_size;
    uint64_t seed;
    double l2;
} sep_train_config;

SEP_API void sep_train_config_default(sep_train_config* config);

/* layer_sizes may be NULL (with n_layers 0) for the default [2,24,24,16,2]. */
SEP_API sep_status sep_train(const sep_corpus* corpus, const sep_ontology* ontology,
                             const sep_train_config* config, const int* layer_sizes,
                             size_t n_layers, sep_model** out);
SEP_API sep_status sep_model_load(const char* path, sep_model** out);
SEP_API sep_status sep_model_save(const sep_model* model, const char* path);
SEP_API void sep_model_free(sep_model* model);

/* Probabilities for one influential-factor pair (raw, unscaled dosage
 * totals). predicted_safe is 1 for Safe, 0 for Unsafe; out-params may be
 * NULL. */
SEP_API sep_status sep_predict(const sep_model* model, double hot, double cold, double* p_safe,
                               double* p_unsafe, int* predicted_safe);

/* Per-prescription predictions: "id<TAB>p_safe<TAB>p_unsafe<TAB>label". */
SEP_API sep_status sep_predict_corpus(const sep_model* model, const sep_corpus* corpus,
                                      const sep_ontology* ontology, char** out);

/* -- evaluation ----------------------------------------------------------- */

SEP_API sep_status sep_cross_validate(const sep_corpus* corpus, const sep_ontology* ontology,
                                      int k, uint64_t seed, const sep_train_config* config,
                                      const int* layer_sizes, size_t n_layers, int stratified,
                                      sep_cv_report** out);
SEP_API size_t sep_report_fold_count(const sep_cv_report* report);
SEP_API sep_status sep_report_fold(const sep_cv_report* report, size_t index, double* se,
                                   double* sp, double* acc);
SEP_API sep_status sep_report_averages(const sep_cv_report* report, double* se, double* sp,
                                       double* acc);
SEP_API sep_status sep_report_tsv(const sep_cv_report* report, char** out);
SEP_API sep_status sep_report_json(const sep_cv_report* report, char** out);

/* Newline-joined warnings accumulated during cross-validation (empty string
 * when none). */
SEP_API sep_status sep_report_warnings(const sep_cv_report* report, char** out);
SEP_API void sep_report_free(sep_cv_report* report);

/* Per-class fractions of prescriptions whose hot+cold dosage exceeds the
 * threshold, as "class<TAB>above_threshold_fraction<TAB>count" lines. */
SEP_API sep_status sep_distribution_tsv(const sep_corpus* corpus, const sep_ontology* ontology,
                                        double threshold, char** out);

#ifdef __cplusplus
}
#endif

#endif /* SEPREDICT_H */
