#include "sepredict/error.hpp"

namespace sep {

namespace {

std::string format_message(const std::string& message, const std::string& source, int line) {
    if (line > 0) {
        return source + ":" + std::to_string(line) + ": " + message;
    }
    return message;
}

}  // namespace

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::malformed_line: return "malformed_line";
        case Errc::duplicate_drug: return "duplicate_drug";
        case Errc::unknown_attribution: return "unknown_attribution";
        case Errc::duplicate_prescription_id: return "duplicate_prescription_id";
        case Errc::duplicate_drug_in_prescription: return "duplicate_drug_in_prescription";
        case Errc::negative_dosage: return "negative_dosage";
        case Errc::unknown_label: return "unknown_label";
        case Errc::bad_model_file: return "bad_model_file";
        case Errc::empty_ontology: return "empty_ontology";
        case Errc::drug_not_in_vocabulary: return "drug_not_in_vocabulary";
        case Errc::dimension_mismatch: return "dimension_mismatch";
        case Errc::empty_sample_set: return "empty_sample_set";
        case Errc::invalid_shape: return "invalid_shape";
        case Errc::non_finite_input: return "non_finite_input";
        case Errc::empty_batch: return "empty_batch";
        case Errc::empty_split: return "empty_split";
        case Errc::k_too_large: return "k_too_large";
        case Errc::invalid_config: return "invalid_config";
        case Errc::invalid_argument: return "invalid_argument";
        case Errc::io_error: return "io_error";
    }
    return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

Error::Error(Errc code, const std::string& message, const std::string& source, int line)
    : std::runtime_error(format_message(message, source, line)),
      code_(code),
      source_(source),
      line_(line) {}

}  // namespace sep
