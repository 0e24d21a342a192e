#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace qtag {

/// Encoded model inputs: 4 features in [0, pi] plus a {0, 1} label.
struct FeatureSet {
    std::vector<std::array<double, 4>> x;
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
    void push(const std::array<double, 4>& f, int label) {
        x.push_back(f);
        labels.push_back(label);
    }
};

struct SplitIndices {
    std::vector<int> train;
    std::vector<int> test;
};

/**
 * Seeded stratified split: per-label index pools are shuffled and cut
 * at round(fraction * pool size), so label proportions carry over. The
 * same (labels, fraction, seed) always yields the same split.
 * fraction = 1 leaves the test side empty (callers warn).
 */
SplitIndices split_train_test(std::span<const std::uint8_t> labels, double fraction,
                              std::uint64_t seed);

/// CSV with header split,label,f0,f1,f2,f3; values at 17 significant
/// digits so the file bytes are reproducible.
void write_features(std::ostream& out, const FeatureSet& train, const FeatureSet& test);

struct FeatureFile {
    FeatureSet train;
    FeatureSet test;
};
FeatureFile read_features(std::istream& in); // throws ParseError

} // namespace qtag
