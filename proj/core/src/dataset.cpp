#include "qtag/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "qtag/errors.hpp"
#include "qtag/rng.hpp"

namespace qtag {

SplitIndices split_train_test(std::span<const std::uint8_t> labels, double fraction,
                              std::uint64_t seed) {
    if (labels.empty()) throw std::invalid_argument("split_train_test: empty dataset");
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw std::invalid_argument("split_train_test: fraction must be in [0, 1]");

    Rng rng(seed);
    SplitIndices out;
    for (int cls : {0, 1}) {
        std::vector<int> pool;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) pool.push_back(static_cast<int>(i));
        if (pool.empty()) continue;
        rng.shuffle(pool);
        const auto cut = static_cast<std::size_t>(
            std::llround(fraction * static_cast<double>(pool.size())));
        for (std::size_t i = 0; i < pool.size(); ++i)
            (i < cut ? out.train : out.test).push_back(pool[i]);
    }
    // a stable order keeps downstream artifacts reproducible
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

void write_features(std::ostream& out, const FeatureSet& train, const FeatureSet& test) {
    out << "split,label,f0,f1,f2,f3\n";
    const auto dump = [&out](const char* split, const FeatureSet& fs) {
        for (std::size_t i = 0; i < fs.size(); ++i) {
            out << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", split, fs.labels[i],
                               fs.x[i][0], fs.x[i][1], fs.x[i][2], fs.x[i][3]);
        }
    };
    dump("train", train);
    dump("test", test);
}

FeatureFile read_features(std::istream& in) {
    FeatureFile file;
    std::string line;
    long lineno = 0;
    if (!std::getline(in, line) || line != "split,label,f0,f1,f2,f3")
        throw ParseError(1, "expected header 'split,label,f0,f1,f2,f3'");
    ++lineno;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string split, tok;
        if (!std::getline(ls, split, ',')) throw ParseError(lineno, "missing split column");
        if (split != "train" && split != "test")
            throw ParseError(lineno, "split must be 'train' or 'test'");
        if (!std::getline(ls, tok, ',')) throw ParseError(lineno, "missing label");
        int label = 0;
        std::array<double, 4> f{};
        try {
            label = std::stoi(tok);
            for (auto& v : f) {
                if (!std::getline(ls, tok, ',')) throw ParseError(lineno, "missing feature");
                v = std::stod(tok);
            }
        } catch (const std::invalid_argument&) {
            throw ParseError(lineno, "malformed number");
        }
        if (label != 0 && label != 1) throw ParseError(lineno, "label must be 0 or 1");
        (split == "train" ? file.train : file.test).push(f, label);
    }
    return file;
}

} // namespace qtag
