#pragma once

#include <array>
#include <string>
#include <vector>

#include "sepredict/corpus.hpp"

namespace sep {

/// Dense bag-of-words vector over a drug vocabulary; entry d holds the
/// prescription's dosage of drug d (0 when absent).
using BowVector = std::vector<double>;

/// D x 2 drug/property membership matrix. Column 0 is hot, column 1 cold;
/// a neutral drug has an all-zero row. Rows follow the lexicographically
/// sorted vocabulary, so the matrix is deterministic for a given ontology.
struct WeightMatrix {
    static constexpr size_t kHot = 0;
    static constexpr size_t kCold = 1;

    std::vector<std::string> vocabulary;       // sorted drug ids, one per row
    std::vector<std::array<double, 2>> cells;  // cells[d] = {hot, cold} in {0,1}

    size_t size() const { return vocabulary.size(); }
};

/// Influential factors of a prescription: total hot dosage and total cold
/// dosage. Neutral drugs contribute to neither component.
struct IfVector {
    double hot = 0.0;
    double cold = 0.0;

    bool operator==(const IfVector&) const = default;
};

/// Per-component maxima of the fitting split; both strictly positive
/// (a zero max is replaced by 1 so application stays total).
struct InputScaler {
    double hot_max = 1.0;
    double cold_max = 1.0;

    bool operator==(const InputScaler&) const = default;
};

std::array<double, 2> one_hot(Label label);  // Safe=(1,0), Unsafe=(0,1)

struct EncodedSample {
    std::string prescription_id;
    IfVector input;                        // raw influential factors
    std::array<double, 2> scaled{0.0, 0.0};  // input after scaler application
    std::array<double, 2> target{1.0, 0.0};  // one-hot class

    Label label() const { return target[0] == 1.0 ? Label::Safe : Label::Unsafe; }
};

WeightMatrix build_weight_matrix(const DrugOntology& ontology);

/// The vocabulary may be in any order; every prescription drug must appear in it.
BowVector to_bow(const Prescription& prescription, const std::vector<std::string>& vocabulary);
BowVector to_bow(const Prescription& prescription, const WeightMatrix& weights);

/// v_i = W^T v_p, computed as the literal matrix product.
IfVector encode(const BowVector& bow, const WeightMatrix& weights);

InputScaler fit_scaler(const std::vector<IfVector>& samples);

/// (hot / hot_max, cold / cold_max); not clamped, so inputs outside the
/// fitting range map outside [0, 1].
std::array<double, 2> apply_scaler(const InputScaler& scaler, const IfVector& v);

/// Raw IFs and targets for every prescription; `scaled` stays zero until a
/// scaler is fitted (training fits its own on its split).
std::vector<EncodedSample> encode_corpus(const Corpus& corpus, const DrugOntology& ontology);

/// id<TAB>hot<TAB>cold<TAB>label rows, raw (unscaled) IFs.
std::string encoded_tsv(const std::vector<EncodedSample>& samples);
void save_encoded(const std::vector<EncodedSample>& samples, const std::string& path);

}  // namespace sep
