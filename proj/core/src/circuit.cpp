#include "qtag/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace qtag {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

void append(std::vector<GateOp>& out, std::vector<GateOp> more) {
    for (auto& g : more) out.push_back(std::move(g));
}

/// R(a,b,c) = Rz(c) Ry(b) Rz(a) as a gate sequence (Rz(a) first).
std::vector<GateOp> comp_r(int target, AngleSource a, AngleSource b, AngleSource c) {
    return {GateOp::rot(Axis::Z, target, a), GateOp::rot(Axis::Y, target, b),
            GateOp::rot(Axis::Z, target, c)};
}

/// R'(a,b,c) = Rz(c) Rx(b) Rz(a).
std::vector<GateOp> comp_r_prime(int target, AngleSource a, AngleSource b, AngleSource c) {
    return {GateOp::rot(Axis::Z, target, a), GateOp::rot(Axis::X, target, b),
            GateOp::rot(Axis::Z, target, c)};
}

const char* axis_token(Axis a) {
    switch (a) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    default: return "Z";
    }
}

Axis axis_from_token(const std::string& t) {
    if (t == "X") return Axis::X;
    if (t == "Y") return Axis::Y;
    if (t == "Z") return Axis::Z;
    throw std::invalid_argument("bad axis token '" + t + "'");
}

} // namespace

const char* to_string(EncodingKind kind) {
    switch (kind) {
    case EncodingKind::Tpe: return "tpe";
    case EncodingKind::Hee1: return "hee1";
    case EncodingKind::Hee2: return "hee2";
    default: return "che";
    }
}

const char* to_string(ConvKind kind) { return kind == ConvKind::So4 ? "so4" : "su4"; }

EncodingKind encoding_from_string(const std::string& name) {
    if (name == "tpe") return EncodingKind::Tpe;
    if (name == "hee1") return EncodingKind::Hee1;
    if (name == "hee2") return EncodingKind::Hee2;
    if (name == "che") return EncodingKind::Che;
    throw std::invalid_argument("unknown encoding '" + name +
                                "' (allowed: tpe, hee1, hee2, che)");
}

ConvKind conv_from_string(const std::string& name) {
    if (name == "so4") return ConvKind::So4;
    if (name == "su4") return ConvKind::Su4;
    throw std::invalid_argument("unknown circuit '" + name + "' (allowed: so4, su4)");
}

int CircuitSpec::trainable_count() const {
    int n = 0;
    for (int k = 0; k < param_count; ++k)
        if (!frozen[k]) ++n;
    return n;
}

std::vector<int> CircuitSpec::trainable_slots() const {
    std::vector<int> out;
    out.reserve(param_count);
    for (int k = 0; k < param_count; ++k)
        if (!frozen[k]) out.push_back(k);
    return out;
}

void CircuitSpec::validate() const {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("CircuitSpec: bad qubit count");
    if (static_cast<int>(frozen.size()) != param_count ||
        static_cast<int>(frozen_value.size()) != param_count)
        throw std::invalid_argument("CircuitSpec: frozen vectors must match param_count");
    if (measured_qubit < 0 || measured_qubit >= num_qubits)
        throw std::invalid_argument("CircuitSpec: measured qubit out of range");
    for (const auto& g : gates) {
        if (g.target < 0 || g.target >= num_qubits)
            throw std::invalid_argument("CircuitSpec: gate target out of range");
        if (g.kind == GateOp::Kind::Cnot) {
            if (g.control < 0 || g.control >= num_qubits || g.control == g.target)
                throw std::invalid_argument("CircuitSpec: bad CNOT qubits");
        }
        if (g.kind == GateOp::Kind::Rotation) {
            const auto& a = g.angle;
            switch (a.kind) {
            case AngleSource::Kind::Param:
                if (a.index < 0 || a.index >= param_count)
                    throw std::invalid_argument("CircuitSpec: parameter slot out of range");
                break;
            case AngleSource::Kind::Data:
                if (a.index < 0 || a.index >= 4)
                    throw std::invalid_argument("CircuitSpec: data slot out of range");
                break;
            case AngleSource::Kind::DataProd:
                if (a.index < 0 || a.index >= 4 || a.index2 < 0 || a.index2 >= 4)
                    throw std::invalid_argument("CircuitSpec: data slot out of range");
                break;
            case AngleSource::Kind::Fixed:
                if (!std::isfinite(a.value))
                    throw std::invalid_argument("CircuitSpec: non-finite fixed angle");
                break;
            }
        }
    }
}

std::vector<double> expand_params(const CircuitSpec& spec, std::span<const double> trainable) {
    if (static_cast<int>(trainable.size()) != spec.trainable_count())
        throw std::invalid_argument(
            fmt::format("expand_params: expected {} trainable values, got {}",
                        spec.trainable_count(), trainable.size()));
    std::vector<double> full(spec.param_count, 0.0);
    std::size_t j = 0;
    for (int k = 0; k < spec.param_count; ++k)
        full[k] = spec.frozen[k] ? spec.frozen_value[k] : trainable[j++];
    return full;
}

std::vector<GateOp> encoding_gates(EncodingKind kind, int num_qubits) {
    std::vector<GateOp> g;
    switch (kind) {
    case EncodingKind::Tpe:
        for (int q = 0; q < num_qubits; ++q)
            g.push_back(GateOp::rot(Axis::X, q, AngleSource::data(q)));
        break;
    case EncodingKind::Hee1:
    case EncodingKind::Hee2: {
        const int layers = (kind == EncodingKind::Hee1) ? 1 : 2;
        for (int l = 0; l < layers; ++l) {
            for (int q = 0; q < num_qubits; ++q)
                g.push_back(GateOp::rot(Axis::X, q, AngleSource::data(q)));
            for (int q = 0; q < num_qubits; ++q)
                g.push_back(GateOp::cnot(q, (q + 1) % num_qubits));
        }
        break;
    }
    case EncodingKind::Che:
        for (int q = 0; q < num_qubits; ++q) g.push_back(GateOp::h(q));
        for (int q = 0; q < num_qubits; ++q)
            g.push_back(GateOp::rot(Axis::Z, q, AngleSource::data(q)));
        for (int i = 0; i < num_qubits; ++i) {
            for (int j = i + 1; j < num_qubits; ++j) {
                g.push_back(GateOp::cnot(i, j));
                g.push_back(GateOp::rot(Axis::Z, j, AngleSource::data_prod(i, j)));
                g.push_back(GateOp::cnot(i, j));
            }
        }
        break;
    }
    return g;
}

std::vector<GateOp> conv_block(ConvKind kind, std::pair<int, int> qubits, int slot0) {
    const auto [a, b] = qubits;
    if (a == b) throw std::invalid_argument("conv_block: pair qubits must differ");
    std::vector<GateOp> g;
    const auto P = [&](int k) { return AngleSource::param(slot0 + k); };
    if (kind == ConvKind::So4) {
        // Magic-basis sandwich: V^dag (A (x) B) V with V = CNOT.(H(x)I).(S(x)S);
        // the resulting 4x4 matrix is real orthogonal up to a global phase.
        g.push_back(GateOp::rot(Axis::Z, a, AngleSource::fixed(kHalfPi)));
        g.push_back(GateOp::rot(Axis::Z, b, AngleSource::fixed(kHalfPi)));
        g.push_back(GateOp::h(a));
        g.push_back(GateOp::cnot(a, b));
        append(g, comp_r(a, P(0), P(1), P(2)));
        append(g, comp_r(b, P(3), P(4), P(5)));
        g.push_back(GateOp::cnot(a, b));
        g.push_back(GateOp::h(a));
        g.push_back(GateOp::rot(Axis::Z, a, AngleSource::fixed(-kHalfPi)));
        g.push_back(GateOp::rot(Axis::Z, b, AngleSource::fixed(-kHalfPi)));
    } else {
        // Universal two-qubit circuit: (A1 (x) A2) . N(a,b,c) . (A3 (x) A4)
        // with the canonical 3-CNOT core.
        append(g, comp_r(a, P(0), P(1), P(2)));
        append(g, comp_r(b, P(3), P(4), P(5)));
        g.push_back(GateOp::cnot(b, a));
        g.push_back(GateOp::rot(Axis::Z, a, P(6)));
        g.push_back(GateOp::rot(Axis::Y, b, P(7)));
        g.push_back(GateOp::cnot(a, b));
        g.push_back(GateOp::rot(Axis::Y, b, P(8)));
        g.push_back(GateOp::cnot(b, a));
        append(g, comp_r(a, P(9), P(10), P(11)));
        append(g, comp_r(b, P(12), P(13), P(14)));
    }
    return g;
}

std::vector<GateOp> pool_block(int source, int sink, int slot0) {
    if (source == sink) throw std::invalid_argument("pool_block: source must differ from sink");
    std::vector<GateOp> g;
    const auto P = [&](int k) { return AngleSource::param(slot0 + k); };
    append(g, comp_r_prime(source, P(0), P(1), P(2)));
    append(g, comp_r(sink, P(3), P(4), P(5)));
    g.push_back(GateOp::cnot(source, sink));
    append(g, comp_r(sink, P(6), P(7), P(8)));
    return g;
}

CircuitSpec build_qcnn(ConvKind conv, EncodingKind enc, bool wrap_pair) {
    CircuitSpec spec;
    spec.num_qubits = 4;

    const int cp = conv_param_count(conv);
    auto mark = [&spec](const char* name, int begin) {
        spec.sections.push_back({name, begin, static_cast<int>(spec.gates.size())});
    };

    int begin = 0;
    append(spec.gates, encoding_gates(enc, 4));
    mark("encoding", begin);

    begin = static_cast<int>(spec.gates.size());
    std::vector<std::pair<int, int>> pairs = {{0, 1}, {1, 2}, {2, 3}};
    if (wrap_pair) pairs.emplace_back(3, 0);
    for (auto pr : pairs) append(spec.gates, conv_block(conv, pr, 0));
    mark("conv1", begin);

    begin = static_cast<int>(spec.gates.size());
    for (auto [src, snk] : {std::pair{0, 1}, std::pair{2, 3}})
        append(spec.gates, pool_block(src, snk, cp));
    mark("pool1", begin);

    begin = static_cast<int>(spec.gates.size());
    append(spec.gates, conv_block(conv, {1, 3}, cp + kPoolParams));
    mark("conv2", begin);

    begin = static_cast<int>(spec.gates.size());
    append(spec.gates, pool_block(1, 3, 2 * cp + kPoolParams));
    mark("pool2", begin);

    spec.param_count = 2 * cp + 2 * kPoolParams;
    spec.frozen.assign(spec.param_count, 0);
    spec.frozen_value.assign(spec.param_count, 0.0);
    spec.measured_qubit = 3;
    spec.validate();
    return spec;
}

double resolve_angle(const CircuitSpec& spec, const GateOp& gate,
                     std::span<const double> theta, std::span<const double> x) {
    const auto& a = gate.angle;
    switch (a.kind) {
    case AngleSource::Kind::Param:
        return spec.frozen[a.index] ? spec.frozen_value[a.index] : theta[a.index];
    case AngleSource::Kind::Data:
        return x[a.index];
    case AngleSource::Kind::DataProd:
        return (kPi - x[a.index]) * (kPi - x[a.index2]);
    default:
        return a.value;
    }
}

State encode(std::span<const double> x, EncodingKind kind) {
    if (x.size() != 4)
        throw std::invalid_argument(
            fmt::format("encode: expected 4 features, got {}", x.size()));
    CircuitSpec spec;
    spec.num_qubits = 4;
    spec.gates = encoding_gates(kind, 4);
    spec.param_count = 0;
    spec.measured_qubit = 0;
    return run_state(spec, {}, x);
}

State run_state(const CircuitSpec& spec, std::span<const double> theta,
                std::span<const double> x) {
    State s = zero_state(spec.num_qubits);
    for (const auto& g : spec.gates) {
        switch (g.kind) {
        case GateOp::Kind::Rotation:
            s = apply_single(std::move(s), rotation(g.axis, resolve_angle(spec, g, theta, x)),
                             g.target);
            break;
        case GateOp::Kind::Hadamard:
            s = apply_single(std::move(s), hadamard(), g.target);
            break;
        case GateOp::Kind::Cnot:
            s = apply_cnot(std::move(s), g.control, g.target);
            break;
        }
    }
    return s;
}

double forward(const CircuitSpec& spec, std::span<const double> theta,
               std::span<const double> x) {
    if (static_cast<int>(theta.size()) != spec.param_count)
        throw std::invalid_argument(
            fmt::format("forward: theta has {} entries, circuit expects {}", theta.size(),
                        spec.param_count));
    if (x.size() != 4)
        throw std::invalid_argument(
            fmt::format("forward: expected 4 features, got {}", x.size()));
    return expect_z(run_state(spec, theta, x), spec.measured_qubit);
}

// ---------------------------------------------------------------------------
// Serialization
//
//   qubits=4 params=48 measured=3
//   R Z 0 param 0
//   R X 1 data 2
//   R Z 2 dataprod 0 1
//   R Z 0 fixed 1.5707963267948966
//   H 0
//   CNOT 0 1             (control target)
//   FREEZE 5 0.25        (slot value; one line per frozen slot)
// ---------------------------------------------------------------------------

std::string CircuitSpec::serialize() const {
    std::string out = fmt::format("qubits={} params={} measured={}\n", num_qubits,
                                  param_count, measured_qubit);
    for (const auto& g : gates) {
        switch (g.kind) {
        case GateOp::Kind::Hadamard:
            out += fmt::format("H {}\n", g.target);
            break;
        case GateOp::Kind::Cnot:
            out += fmt::format("CNOT {} {}\n", g.control, g.target);
            break;
        case GateOp::Kind::Rotation: {
            const auto& a = g.angle;
            switch (a.kind) {
            case AngleSource::Kind::Param:
                out += fmt::format("R {} {} param {}\n", axis_token(g.axis), g.target, a.index);
                break;
            case AngleSource::Kind::Data:
                out += fmt::format("R {} {} data {}\n", axis_token(g.axis), g.target, a.index);
                break;
            case AngleSource::Kind::DataProd:
                out += fmt::format("R {} {} dataprod {} {}\n", axis_token(g.axis), g.target,
                                   a.index, a.index2);
                break;
            case AngleSource::Kind::Fixed:
                out += fmt::format("R {} {} fixed {:.17g}\n", axis_token(g.axis), g.target,
                                   a.value);
                break;
            }
            break;
        }
        }
    }
    for (int k = 0; k < param_count; ++k)
        if (frozen[k]) out += fmt::format("FREEZE {} {:.17g}\n", k, frozen_value[k]);
    return out;
}

CircuitSpec CircuitSpec::deserialize(const std::string& text) {
    CircuitSpec spec;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;

    if (!std::getline(in, line))
        throw std::invalid_argument("circuit text: empty input");
    ++lineno;
    int q = 0, p = 0, m = 0;
    if (std::sscanf(line.c_str(), "qubits=%d params=%d measured=%d", &q, &p, &m) != 3)
        throw std::invalid_argument("circuit text: bad header '" + line + "'");
    spec.num_qubits = q;
    spec.param_count = p;
    spec.measured_qubit = m;
    spec.frozen.assign(p, 0);
    spec.frozen_value.assign(p, 0.0);

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        const auto fail = [&](const std::string& why) {
            throw std::invalid_argument(
                fmt::format("circuit text line {}: {}", lineno, why));
        };
        if (tok == "H") {
            int t;
            if (!(ls >> t)) fail("bad H line");
            spec.gates.push_back(GateOp::h(t));
        } else if (tok == "CNOT") {
            int c, t;
            if (!(ls >> c >> t)) fail("bad CNOT line");
            spec.gates.push_back(GateOp::cnot(c, t));
        } else if (tok == "R") {
            std::string ax, kind;
            int t;
            if (!(ls >> ax >> t >> kind)) fail("bad R line");
            AngleSource src;
            if (kind == "param") {
                int k;
                if (!(ls >> k)) fail("bad param slot");
                src = AngleSource::param(k);
            } else if (kind == "data") {
                int k;
                if (!(ls >> k)) fail("bad data slot");
                src = AngleSource::data(k);
            } else if (kind == "dataprod") {
                int i, j;
                if (!(ls >> i >> j)) fail("bad dataprod slots");
                src = AngleSource::data_prod(i, j);
            } else if (kind == "fixed") {
                double v;
                if (!(ls >> v)) fail("bad fixed value");
                src = AngleSource::fixed(v);
            } else {
                fail("unknown angle source '" + kind + "'");
            }
            spec.gates.push_back(GateOp::rot(axis_from_token(ax), t, src));
        } else if (tok == "FREEZE") {
            int k;
            double v;
            if (!(ls >> k >> v)) fail("bad FREEZE line");
            if (k < 0 || k >= spec.param_count) fail("FREEZE slot out of range");
            spec.frozen[k] = 1;
            spec.frozen_value[k] = v;
        } else {
            fail("unknown token '" + tok + "'");
        }
    }
    spec.validate();
    return spec;
}

} // namespace qtag
