#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "sepredict/corpus.hpp"

namespace sep {

/// Deterministic stand-in corpus: class-conditional total-dosage ranges sit
/// on either side of `threshold`, and `noise` swaps the range for a fraction
/// of each class so the separation is imperfect.
struct SynthConfig {
    int n_safe = 150;
    int n_unsafe = 92;
    int n_hot = 40;
    int n_cold = 35;
    int n_neutral = 25;
    double threshold = 500.0;
    std::array<double, 2> safe_total_range{100.0, 480.0};
    std::array<double, 2> unsafe_total_range{520.0, 1200.0};
    double noise = 0.1;                 // fraction with swapped class range
    std::optional<double> noise_safe;   // per-class overrides of `noise`
    std::optional<double> noise_unsafe;
    int min_items = 3;
    int max_items = 12;
    uint64_t seed = 0;
};

struct SynthOutput {
    DrugOntology ontology;
    Corpus corpus;
};

/// Fully determined by config.seed; the output always passes corpus
/// validation and ontology totality.
SynthOutput generate(const SynthConfig& config);

}  // namespace sep
