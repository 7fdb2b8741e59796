// Prescription -> influential-factor encoding: bag-of-words dosage vector
// compressed through the drug/property membership matrix.

#include "sepredict/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "sepredict/io.hpp"

namespace sep {

std::array<double, 2> one_hot(Label label) {
    return label == Label::Safe ? std::array<double, 2>{1.0, 0.0}
                                : std::array<double, 2>{0.0, 1.0};
}

WeightMatrix build_weight_matrix(const DrugOntology& ontology) {
    if (ontology.entries.empty()) {
        throw Error(Errc::empty_ontology, "cannot build a weight matrix from an empty ontology");
    }
    WeightMatrix weights;
    weights.vocabulary.reserve(ontology.entries.size());
    weights.cells.reserve(ontology.entries.size());
    for (const auto& [drug, attribution] : ontology.entries) {  // map order = sorted vocabulary
        weights.vocabulary.push_back(drug);
        switch (attribution) {
            case Attribution::Hot: weights.cells.push_back({1.0, 0.0}); break;
            case Attribution::Cold: weights.cells.push_back({0.0, 1.0}); break;
            case Attribution::Neutral: weights.cells.push_back({0.0, 0.0}); break;
        }
    }
    return weights;
}

BowVector to_bow(const Prescription& prescription, const std::vector<std::string>& vocabulary) {
    BowVector bow(vocabulary.size(), 0.0);
    for (const auto& item : prescription.items) {
        auto slot = std::find(vocabulary.begin(), vocabulary.end(), item.drug);
        if (slot == vocabulary.end()) {
            throw Error(Errc::drug_not_in_vocabulary,
                        "drug \"" + item.drug + "\" is not in the vocabulary");
        }
        bow[static_cast<size_t>(slot - vocabulary.begin())] = item.dosage;
    }
    return bow;
}

BowVector to_bow(const Prescription& prescription, const WeightMatrix& weights) {
    return to_bow(prescription, weights.vocabulary);
}

IfVector encode(const BowVector& bow, const WeightMatrix& weights) {
    if (bow.size() != weights.size()) {
        throw Error(Errc::dimension_mismatch,
                    "bag-of-words length " + std::to_string(bow.size()) +
                        " does not match vocabulary size " + std::to_string(weights.size()));
    }
    IfVector v;
    for (size_t d = 0; d < bow.size(); ++d) {
        v.hot += bow[d] * weights.cells[d][WeightMatrix::kHot];
        v.cold += bow[d] * weights.cells[d][WeightMatrix::kCold];
    }
    return v;
}

InputScaler fit_scaler(const std::vector<IfVector>& samples) {
    if (samples.empty()) {
        throw Error(Errc::empty_sample_set, "cannot fit a scaler on an empty sample set");
    }
    double hot_max = 0.0;
    double cold_max = 0.0;
    for (const auto& v : samples) {
        hot_max = std::max(hot_max, v.hot);
        cold_max = std::max(cold_max, v.cold);
    }
    // a component that never occurs divides by 1 so application stays total
    return {hot_max > 0.0 ? hot_max : 1.0, cold_max > 0.0 ? cold_max : 1.0};
}

std::array<double, 2> apply_scaler(const InputScaler& scaler, const IfVector& v) {
    return {v.hot / scaler.hot_max, v.cold / scaler.cold_max};
}

std::vector<EncodedSample> encode_corpus(const Corpus& corpus, const DrugOntology& ontology) {
    const WeightMatrix weights = build_weight_matrix(ontology);
    std::vector<EncodedSample> samples;
    samples.reserve(corpus.prescriptions.size());
    for (const auto& prescription : corpus.prescriptions) {
        EncodedSample sample;
        sample.prescription_id = prescription.id;
        sample.input = encode(to_bow(prescription, weights), weights);
        sample.target = one_hot(prescription.label);
        samples.push_back(std::move(sample));
    }
    return samples;
}

std::string encoded_tsv(const std::vector<EncodedSample>& samples) {
    std::string out;
    for (const auto& sample : samples) {
        out += sample.prescription_id;
        out += '\t';
        out += g17(sample.input.hot);
        out += '\t';
        out += g17(sample.input.cold);
        out += '\t';
        out += to_string(sample.label());
        out += '\n';
    }
    return out;
}

void save_encoded(const std::vector<EncodedSample>& samples, const std::string& path) {
    write_file(path, encoded_tsv(samples));
}

}  // namespace sep
