#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sepredict/error.hpp"

namespace sep {

enum class Attribution { Hot, Cold, Neutral };
enum class Label { Safe, Unsafe };

const char* to_string(Attribution a);
const char* to_string(Label l);

/// Thermal attribution per drug; must be total over any corpus it validates.
struct DrugOntology {
    std::map<std::string, Attribution> entries;  // drug id -> attribution, ids case-sensitive
    std::string version;

    bool operator==(const DrugOntology&) const = default;
};

struct PrescriptionItem {
    std::string drug;
    double dosage = 0.0;  // abstract units, finite and >= 0

    bool operator==(const PrescriptionItem&) const = default;
};

/// Labeled bag of (drug, dosage) pairs. Safe = no side effect reported when
/// used correctly; Unsafe = reported to frequently cause side effects.
struct Prescription {
    std::string id;
    Label label = Label::Safe;
    std::vector<PrescriptionItem> items;  // non-empty, drug ids unique

    double total_dosage() const;

    bool operator==(const Prescription&) const = default;
};

struct Corpus {
    std::vector<Prescription> prescriptions;  // document order, ids unique
    std::string ontology_version;

    size_t size() const { return prescriptions.size(); }

    bool operator==(const Corpus&) const = default;
};

// Parsers for the tab-separated formats (see README). `source` names the
// document in errors; every error carries a 1-based line number.
DrugOntology parse_ontology(const std::string& text, const std::string& source = "<string>");
Corpus parse_corpus(const std::string& text, const std::string& source = "<string>");

std::string serialize(const DrugOntology& ontology);
std::string serialize(const Corpus& corpus);

DrugOntology load_ontology(const std::string& path);
Corpus load_corpus(const std::string& path);
void save(const DrugOntology& ontology, const std::string& path);
void save(const Corpus& corpus, const std::string& path);

/// (prescription id, drug id) pairs that lack an ontology entry, in corpus
/// order. Empty result means the ontology is total over the corpus.
std::vector<std::pair<std::string, std::string>>
validate_against(const Corpus& corpus, const DrugOntology& ontology);

}  // namespace sep
