// Synthetic corpus generator. Class-conditional total dosages land inside
// the configured ranges, with a noise fraction of each class drawn from the
// other class's range instead.

#include "sepredict/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "sepredict/error.hpp"
#include "sepredict/rng.hpp"

namespace sep {

namespace {

constexpr const char* kSyllables[] = {
    "an",    "bai",  "ban",   "bei",  "cang", "chai", "chen",  "chi",  "chuan", "chun",
    "dan",   "dang", "di",    "dong", "du",   "fang", "feng",  "fu",   "gan",   "gao",
    "gou",   "gu",   "gui",   "hai",  "han",  "he",   "hong",  "hu",   "hua",   "huang",
    "ji",    "jia",  "jiang", "jie",  "jin",  "jing", "ju",    "jue",  "kuan",  "lian",
    "ling",  "long", "lu",    "mai",  "mei",  "mu",   "nan",   "niu",  "pao",   "pu",
    "qian",  "qiang","qin",   "qing", "qu",   "ren",  "rou",   "sang", "sha",   "shan",
    "shao",  "shen", "sheng", "shi",  "shu",  "song", "su",    "tao",  "tian",  "ting",
    "tong",  "wei",  "wu",    "xi",   "xia",  "xian", "xiang", "xiao", "xin",   "xing",
    "xu",    "xuan", "ya",    "yan",  "yang", "ye",   "yi",    "yin",  "ying",  "yu",
    "yuan",  "yun",  "zao",   "ze",   "zhi",  "zhu",  "zi",    "zong"};
constexpr size_t kSyllableCount = sizeof(kSyllables) / sizeof(kSyllables[0]);

// Concatenated syllable pairs can coincide ("dang"+"an" == "dan"+"gan"), so
// generation tracks what it has emitted and skips repeats.
std::vector<std::string> make_names(size_t count) {
    const size_t square = kSyllableCount * kSyllableCount;
    std::vector<std::string> names;
    names.reserve(count);
    std::set<std::string> seen;
    for (size_t i = 0; names.size() < count; ++i) {
        std::string name = std::string(kSyllables[i % kSyllableCount]) +
                           kSyllables[(i / kSyllableCount) % kSyllableCount];
        if (i >= square) {
            name += std::to_string(i / square);
        }
        if (seen.insert(name).second) {
            names.push_back(std::move(name));
        }
    }
    return names;
}

void validate(const SynthConfig& config) {
    const auto fail = [](const std::string& message) {
        throw Error(Errc::invalid_config, message);
    };
    if (config.n_safe < 1 || config.n_unsafe < 1) {
        fail("class counts must be at least 1");
    }
    if (config.n_hot < 0 || config.n_cold < 0 || config.n_neutral < 0) {
        fail("drug counts must be non-negative");
    }
    if (config.n_hot + config.n_cold < 1) {
        fail("at least one hot or cold drug is required");
    }
    if (!std::isfinite(config.threshold)) {
        fail("threshold must be finite");
    }
    for (const auto& range : {config.safe_total_range, config.unsafe_total_range}) {
        if (!std::isfinite(range[0]) || !std::isfinite(range[1]) || !(range[0] > 0.0) ||
            range[0] > range[1]) {
            fail("total dosage ranges must be positive and ordered");
        }
    }
    for (const double frac : {config.noise, config.noise_safe.value_or(config.noise),
                              config.noise_unsafe.value_or(config.noise)}) {
        if (!(frac >= 0.0) || !(frac <= 1.0)) {
            fail("noise fractions must lie in [0, 1]");
        }
    }
    if (config.min_items < 1 || config.max_items < config.min_items) {
        fail("item counts must satisfy 1 <= min_items <= max_items");
    }
    const long long drugs = static_cast<long long>(config.n_hot) + config.n_cold + config.n_neutral;
    if (config.max_items > drugs) {
        fail("max_items exceeds the drug count");
    }
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

std::vector<char> noise_flags(Rng& rng, int n, double fraction) {
    std::vector<char> flags(static_cast<size_t>(n), 0);
    const auto k = static_cast<size_t>(std::llround(fraction * n));
    std::fill(flags.begin(), flags.begin() + static_cast<long>(std::min(k, flags.size())), 1);
    rng.shuffle(flags);
    return flags;
}

}  // namespace

SynthOutput generate(const SynthConfig& config) {
    validate(config);

    const auto n_drugs =
        static_cast<size_t>(config.n_hot) + config.n_cold + config.n_neutral;
    const auto n_non_neutral = static_cast<size_t>(config.n_hot) + config.n_cold;

    std::vector<std::string> names = make_names(n_drugs);
    Rng onto_rng(mix_seed(config.seed, 0));
    onto_rng.shuffle(names);

    // Position in `names` decides the attribution: hot block, cold block,
    // neutral tail.
    const auto attr_at = [&](size_t index) {
        if (index < static_cast<size_t>(config.n_hot)) {
            return Attribution::Hot;
        }
        return index < n_non_neutral ? Attribution::Cold : Attribution::Neutral;
    };

    SynthOutput out;
    out.ontology.version = "synth/1 seed=" + std::to_string(config.seed);
    for (size_t i = 0; i < names.size(); ++i) {
        out.ontology.entries.emplace(names[i], attr_at(i));
    }
    out.corpus.ontology_version = out.ontology.version;

    Rng rng(mix_seed(config.seed, 1));
    const std::vector<char> noisy_safe =
        noise_flags(rng, config.n_safe, config.noise_safe.value_or(config.noise));
    const std::vector<char> noisy_unsafe =
        noise_flags(rng, config.n_unsafe, config.noise_unsafe.value_or(config.noise));

    std::vector<size_t> pool(n_drugs);
    std::iota(pool.begin(), pool.end(), size_t{0});
    int id_counter = 0;

    const auto generate_one = [&](Label label, bool noisy) {
        Prescription p;
        char id[24];
        std::snprintf(id, sizeof id, "p%04d", ++id_counter);
        p.id = id;
        p.label = label;

        const auto span = static_cast<uint64_t>(config.max_items - config.min_items);
        const size_t n_items =
            static_cast<size_t>(config.min_items) + (span > 0 ? rng.below(span + 1) : 0);
        for (size_t j = 0; j < n_items; ++j) {
            const size_t pick = j + rng.below(n_drugs - j);
            std::swap(pool[j], pool[pick]);
        }
        std::vector<size_t> chosen(pool.begin(), pool.begin() + static_cast<long>(n_items));
        const bool has_active = std::any_of(chosen.begin(), chosen.end(), [&](size_t d) {
            return attr_at(d) != Attribution::Neutral;
        });
        if (!has_active) {
            // All-neutral draw carries no dosage signal; swap one pick for a
            // hot or cold drug (cannot collide with the neutral selection).
            chosen[0] = rng.below(n_non_neutral);
        }

        std::array<double, 2> range =
            label == Label::Safe ? config.safe_total_range : config.unsafe_total_range;
        if (noisy) {
            range = label == Label::Safe ? config.unsafe_total_range : config.safe_total_range;
        }
        const double total = rng.uniform(range[0], range[1]);

        std::vector<double> weights(chosen.size(), 0.0);
        double weight_sum = 0.0;
        for (size_t t = 0; t < chosen.size(); ++t) {
            if (attr_at(chosen[t]) != Attribution::Neutral) {
                weights[t] = rng.uniform();
                weight_sum += weights[t];
            }
        }
        if (weight_sum == 0.0) {
            for (size_t t = 0; t < chosen.size(); ++t) {
                if (attr_at(chosen[t]) != Attribution::Neutral) {
                    weights[t] = 1.0;
                    weight_sum += 1.0;
                }
            }
        }
        for (size_t t = 0; t < chosen.size(); ++t) {
            const double dosage = attr_at(chosen[t]) != Attribution::Neutral
                                      ? total * weights[t] / weight_sum
                                      : rng.uniform(1.0, 50.0);
            p.items.push_back({names[chosen[t]], round2(dosage)});
        }
        out.corpus.prescriptions.push_back(std::move(p));
    };

    for (int i = 0; i < config.n_safe; ++i) {
        generate_one(Label::Safe, noisy_safe[static_cast<size_t>(i)] != 0);
    }
    for (int i = 0; i < config.n_unsafe; ++i) {
        generate_one(Label::Unsafe, noisy_unsafe[static_cast<size_t>(i)] != 0);
    }
    return out;
}

}  // namespace sep
