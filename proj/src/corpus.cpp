// Tab-separated ontology and prescription formats. Every parse error carries
// the document name and a 1-based line number.

#include "sepredict/corpus.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_set>

#include "sepredict/io.hpp"

namespace sep {

namespace {

constexpr const char* kVersionDirective = "# version:";
constexpr const char* kOntologyVersionDirective = "# ontology_version:";

struct Line {
    int number = 0;  // 1-based
    std::string text;
};

std::string strip(const std::string& s) {
    size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Data lines with numbering; comments and blank lines are skipped, except a
// version directive comment, which lands in *version.
std::vector<Line> data_lines(const std::string& text, const char* directive,
                             std::string* version) {
    std::vector<Line> lines;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (!raw.empty() && raw.back() == '\r') {
            raw.pop_back();
        }
        if (raw.empty() || strip(raw).empty()) {
            continue;
        }
        if (raw[0] == '#') {
            if (version && raw.rfind(directive, 0) == 0) {
                *version = strip(raw.substr(std::string(directive).size()));
            }
            continue;
        }
        lines.push_back({number, raw});
    }
    return lines;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(s.substr(start));
            break;
        }
        fields.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double parse_dosage(const std::string& token, const std::string& source, int line) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw Error(Errc::malformed_line, "bad dosage literal \"" + token + "\"", source, line);
    }
    if (value < 0.0) {
        throw Error(Errc::negative_dosage, "negative dosage " + token, source, line);
    }
    return value;
}

}  // namespace

const char* to_string(Attribution a) {
    switch (a) {
        case Attribution::Hot: return "hot";
        case Attribution::Cold: return "cold";
        case Attribution::Neutral: return "neutral";
    }
    return "?";
}

const char* to_string(Label l) {
    return l == Label::Safe ? "safe" : "unsafe";
}

double Prescription::total_dosage() const {
    double total = 0.0;
    for (const auto& item : items) {
        total += item.dosage;
    }
    return total;
}

DrugOntology parse_ontology(const std::string& text, const std::string& source) {
    DrugOntology ontology;
    for (const auto& line : data_lines(text, kVersionDirective, &ontology.version)) {
        auto fields = split(line.text, '\t');
        if (fields.size() != 2 || fields[0].empty()) {
            throw Error(Errc::malformed_line, "expected drug_id<TAB>attribution", source,
                        line.number);
        }
        Attribution attribution;
        if (fields[1] == "hot") {
            attribution = Attribution::Hot;
        } else if (fields[1] == "cold") {
            attribution = Attribution::Cold;
        } else if (fields[1] == "neutral") {
            attribution = Attribution::Neutral;
        } else {
            throw Error(Errc::unknown_attribution, "unknown attribution \"" + fields[1] + "\"",
                        source, line.number);
        }
        if (!ontology.entries.emplace(fields[0], attribution).second) {
            throw Error(Errc::duplicate_drug, "duplicate drug \"" + fields[0] + "\"", source,
                        line.number);
        }
    }
    return ontology;
}

Corpus parse_corpus(const std::string& text, const std::string& source) {
    Corpus corpus;
    std::unordered_set<std::string> seen_ids;
    for (const auto& line : data_lines(text, kOntologyVersionDirective, &corpus.ontology_version)) {
        auto fields = split(line.text, '\t');
        if (fields.size() != 3 || fields[0].empty()) {
            throw Error(Errc::malformed_line, "expected id<TAB>label<TAB>drug:dosage[,...]",
                        source, line.number);
        }
        Prescription prescription;
        prescription.id = fields[0];
        if (fields[1] == "safe") {
            prescription.label = Label::Safe;
        } else if (fields[1] == "unsafe") {
            prescription.label = Label::Unsafe;
        } else {
            throw Error(Errc::unknown_label, "unknown label \"" + fields[1] + "\"", source,
                        line.number);
        }
        if (fields[2].empty()) {
            throw Error(Errc::malformed_line, "prescription has no items", source, line.number);
        }
        std::unordered_set<std::string> seen_drugs;
        for (const auto& token : split(fields[2], ',')) {
            size_t colon = token.rfind(':');
            if (colon == std::string::npos || colon == 0) {
                throw Error(Errc::malformed_line, "expected drug:dosage, got \"" + token + "\"",
                            source, line.number);
            }
            PrescriptionItem item;
            item.drug = token.substr(0, colon);
            item.dosage = parse_dosage(token.substr(colon + 1), source, line.number);
            if (!seen_drugs.insert(item.drug).second) {
                throw Error(Errc::duplicate_drug_in_prescription,
                            "drug \"" + item.drug + "\" listed twice in \"" + prescription.id +
                                "\"",
                            source, line.number);
            }
            prescription.items.push_back(std::move(item));
        }
        if (!seen_ids.insert(prescription.id).second) {
            throw Error(Errc::duplicate_prescription_id,
                        "duplicate prescription id \"" + prescription.id + "\"", source,
                        line.number);
        }
        corpus.prescriptions.push_back(std::move(prescription));
    }
    return corpus;
}

std::string serialize(const DrugOntology& ontology) {
    std::string out;
    if (!ontology.version.empty()) {
        out += std::string(kVersionDirective) + " " + ontology.version + "\n";
    }
    for (const auto& [drug, attribution] : ontology.entries) {
        out += drug;
        out += '\t';
        out += to_string(attribution);
        out += '\n';
    }
    return out;
}

std::string serialize(const Corpus& corpus) {
    std::string out;
    if (!corpus.ontology_version.empty()) {
        out += std::string(kOntologyVersionDirective) + " " + corpus.ontology_version + "\n";
    }
    for (const auto& prescription : corpus.prescriptions) {
        out += prescription.id;
        out += '\t';
        out += to_string(prescription.label);
        out += '\t';
        for (size_t i = 0; i < prescription.items.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += prescription.items[i].drug;
            out += ':';
            out += g17(prescription.items[i].dosage);
        }
        out += '\n';
    }
    return out;
}

DrugOntology load_ontology(const std::string& path) {
    return parse_ontology(read_file(path), path);
}

Corpus load_corpus(const std::string& path) {
    return parse_corpus(read_file(path), path);
}

void save(const DrugOntology& ontology, const std::string& path) {
    write_file(path, serialize(ontology));
}

void save(const Corpus& corpus, const std::string& path) {
    write_file(path, serialize(corpus));
}

std::vector<std::pair<std::string, std::string>>
validate_against(const Corpus& corpus, const DrugOntology& ontology) {
    std::vector<std::pair<std::string, std::string>> gaps;
    for (const auto& prescription : corpus.prescriptions) {
        for (const auto& item : prescription.items) {
            if (!ontology.entries.contains(item.drug)) {
                gaps.emplace_back(prescription.id, item.drug);
            }
        }
    }
    return gaps;
}

}  // namespace sep
