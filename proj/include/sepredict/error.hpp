#pragma once

#include <stdexcept>
#include <string>

namespace sep {

enum class Errc {
    // document parsing
    malformed_line,
    duplicate_drug,
    unknown_attribution,
    duplicate_prescription_id,
    duplicate_drug_in_prescription,
    negative_dosage,
    unknown_label,
    bad_model_file,
    // operation preconditions
    empty_ontology,
    drug_not_in_vocabulary,
    dimension_mismatch,
    empty_sample_set,
    invalid_shape,
    non_finite_input,
    empty_batch,
    empty_split,
    k_too_large,
    invalid_config,
    invalid_argument,
    // filesystem
    io_error,
};

const char* errc_name(Errc code);

/// Failure kind plus, for document errors, the source name and 1-based line.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message);
    Error(Errc code, const std::string& message, const std::string& source, int line);

    Errc code() const noexcept { return code_; }
    const std::string& source() const noexcept { return source_; }
    int line() const noexcept { return line_; }  // 0 when not tied to a line

private:
    Errc code_;
    std::string source_;
    int line_ = 0;
};

}  // namespace sep
