#pragma once

#include <iosfwd>
#include <vector>

namespace qtag {

/// p^mu = (E, px, py, pz) in GeV.
struct FourMomentum {
    double e = 0.0;
    double px = 0.0;
    double py = 0.0;
    double pz = 0.0;

    double p_mag_sq() const { return px * px + py * py + pz * pz; }
    double mass_sq() const { return e * e - p_mag_sq(); }

    FourMomentum& operator+=(const FourMomentum& o) {
        e += o.e;
        px += o.px;
        py += o.py;
        pz += o.pz;
        return *this;
    }
};

struct Jet {
    std::vector<FourMomentum> constituents;
    int label = 0; // top = 1, qcd = 0

    FourMomentum total() const;
};

struct ParseStats {
    long lines = 0;
    long jets_kept = 0;
    long jets_skipped_few_constituents = 0;
    long padding_constituents_dropped = 0;
};

/**
 * Reads JSON-lines jets: {"label": 0|1, "constituents": [[E,px,py,pz], ...]}.
 * All-zero constituents are treated as padding and dropped; jets left
 * with fewer than 3 nonzero-momentum constituents are skipped (counted
 * in stats). Malformed lines throw ParseError with the line number.
 */
std::vector<Jet> parse_jets(std::istream& in, ParseStats* stats = nullptr);

} // namespace qtag
