#include "qtag/jet.hpp"

#include <istream>
#include <string>

#include <nlohmann/json.hpp>

#include "qtag/errors.hpp"

namespace qtag {

FourMomentum Jet::total() const {
    FourMomentum sum;
    for (const auto& c : constituents) sum += c;
    return sum;
}

std::vector<Jet> parse_jets(std::istream& in, ParseStats* stats) {
    std::vector<Jet> jets;
    ParseStats local;
    std::string line;
    while (std::getline(in, line)) {
        ++local.lines;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(local.lines, std::string("invalid JSON: ") + e.what());
        }

        if (!doc.is_object() || !doc.contains("label") || !doc.contains("constituents"))
            throw ParseError(local.lines, "expected object with 'label' and 'constituents'");
        const auto& lab = doc["label"];
        if (!lab.is_number_integer() || (lab.get<int>() != 0 && lab.get<int>() != 1))
            throw ParseError(local.lines, "'label' must be 0 or 1");
        const auto& cons = doc["constituents"];
        if (!cons.is_array())
            throw ParseError(local.lines, "'constituents' must be an array");

        Jet jet;
        jet.label = lab.get<int>();
        for (const auto& c : cons) {
            if (!c.is_array() || c.size() != 4 || !c[0].is_number() || !c[1].is_number() ||
                !c[2].is_number() || !c[3].is_number())
                throw ParseError(local.lines, "constituent must be [E, px, py, pz]");
            FourMomentum p{c[0].get<double>(), c[1].get<double>(), c[2].get<double>(),
                           c[3].get<double>()};
            if (p.e == 0.0 && p.px == 0.0 && p.py == 0.0 && p.pz == 0.0) {
                ++local.padding_constituents_dropped;
                continue;
            }
            jet.constituents.push_back(p);
        }

        int with_momentum = 0;
        for (const auto& p : jet.constituents)
            if (p.p_mag_sq() > 0.0) ++with_momentum;
        if (with_momentum < 3) {
            ++local.jets_skipped_few_constituents;
            continue;
        }
        ++local.jets_kept;
        jets.push_back(std::move(jet));
    }
    if (stats) *stats = local;
    return jets;
}

} // namespace qtag
