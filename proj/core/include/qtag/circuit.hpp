#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qtag/statevec.hpp"

namespace qtag {

/**
 * Data encodings mapping 4 pixel values in [0, pi] onto 4 qubits.
 *
 *   Tpe  - one Rx(x_q) per qubit (product state).
 *   Hee1 - Rx(x_q) per qubit followed by a CNOT entangler ring; 1 layer.
 *   Hee2 - two Hee layers.
 *   Che  - Hadamards, Rz(x_q) phases, and pairwise ZZ phases with angle
 *          (pi - x_i)(pi - x_j) (CNOT-Rz-CNOT), one layer.
 */
enum class EncodingKind { Tpe, Hee1, Hee2, Che };

/// Two-qubit convolutional unitary family: SO(4) (6 trainable angles,
/// real up to a global phase) or SU(4) (15 trainable angles, universal).
enum class ConvKind { So4, Su4 };

const char* to_string(EncodingKind kind);
const char* to_string(ConvKind kind);
EncodingKind encoding_from_string(const std::string& name);
ConvKind conv_from_string(const std::string& name);

/// Where a rotation gate takes its angle from.
struct AngleSource {
    enum class Kind : std::uint8_t {
        Param,    ///< trainable slot `index` of the parameter vector
        Data,     ///< input feature x[index]
        DataProd, ///< (pi - x[index]) * (pi - x[index2])
        Fixed,    ///< constant `value` (radians)
    };
    Kind kind = Kind::Fixed;
    int index = -1;
    int index2 = -1;
    double value = 0.0;

    static AngleSource param(int slot) { return {Kind::Param, slot, -1, 0.0}; }
    static AngleSource data(int feature) { return {Kind::Data, feature, -1, 0.0}; }
    static AngleSource data_prod(int i, int j) { return {Kind::DataProd, i, j, 0.0}; }
    static AngleSource fixed(double v) { return {Kind::Fixed, -1, -1, v}; }
};

/// One gate template: a rotation (with an angle source), a Hadamard, or
/// a CNOT.
struct GateOp {
    enum class Kind : std::uint8_t { Rotation, Hadamard, Cnot };
    Kind kind = Kind::Rotation;
    Axis axis = Axis::Z;
    int target = 0;
    int control = -1; // CNOT only
    AngleSource angle;

    static GateOp rot(Axis ax, int target, AngleSource src) {
        GateOp g;
        g.kind = Kind::Rotation;
        g.axis = ax;
        g.target = target;
        g.angle = src;
        return g;
    }
    static GateOp h(int target) {
        GateOp g;
        g.kind = Kind::Hadamard;
        g.target = target;
        return g;
    }
    static GateOp cnot(int control, int target) {
        GateOp g;
        g.kind = Kind::Cnot;
        g.control = control;
        g.target = target;
        return g;
    }
};

/// Named contiguous range of gates [begin, end); builder metadata used
/// for structural checks, not serialized.
struct CircuitSection {
    std::string name;
    int begin = 0;
    int end = 0;
};

/**
 * A gate-template sequence with trainable / frozen parameter slots.
 *
 * Slots marked frozen keep their circuit position but read their angle
 * from frozen_value instead of the caller's parameter vector, so pruned
 * circuits stay self-describing.
 */
struct CircuitSpec {
    int num_qubits = 4;
    std::vector<GateOp> gates;
    int param_count = 0;
    std::vector<std::uint8_t> frozen;  // size param_count
    std::vector<double> frozen_value;  // size param_count
    int measured_qubit = 0;
    std::vector<CircuitSection> sections;

    int trainable_count() const;
    std::vector<int> trainable_slots() const;

    /// Internal consistency: slot indices in range, vectors sized, etc.
    void validate() const;

    /// Line-oriented text form; values printed with 17 significant
    /// digits so serialize/deserialize round-trips are bit-exact.
    std::string serialize() const;
    static CircuitSpec deserialize(const std::string& text);
};

/// Expands a trainable-slots-only vector into a full parameter vector,
/// with frozen slots taking their frozen values.
std::vector<double> expand_params(const CircuitSpec& spec, std::span<const double> trainable);

/// Gate list for one encoding on `num_qubits` qubits (data slots 0..3).
std::vector<GateOp> encoding_gates(EncodingKind kind, int num_qubits = 4);

/// Two-qubit convolutional block on (qubits.first, qubits.second) with
/// parameter slots [slot0, slot0 + 6) for SO(4) or [slot0, slot0 + 15)
/// for SU(4). SO(4): 2 CNOTs + 12 single-qubit gates, 6 trainable.
/// SU(4): 3 CNOTs + 15 trainable single-qubit gates.
std::vector<GateOp> conv_block(ConvKind kind, std::pair<int, int> qubits, int slot0);

/// Pooling block: 1 CNOT + 9 trainable single-qubit gates using slots
/// [slot0, slot0 + 9). After it the source qubit is never gated again
/// in the assembled QCNN.
std::vector<GateOp> pool_block(int source, int sink, int slot0);

constexpr int conv_param_count(ConvKind kind) { return kind == ConvKind::So4 ? 6 : 15; }
inline constexpr int kPoolParams = 9;

/**
 * Full 4-qubit QCNN:
 *   encoding -> conv layer 1 (one shared block over neighboring pairs
 *   (0,1), (1,2), (2,3)) -> pool layer 1 (0->1, 2->3, shared) ->
 *   conv layer 2 on (1,3) -> pool layer 2 (1->3) -> measure qubit 3.
 *
 * param_count is 30 for SO(4) and 48 for SU(4). `wrap_pair` adds the
 * (3,0) pair to conv layers (off by default; parameter totals are
 * unaffected because of weight sharing).
 */
CircuitSpec build_qcnn(ConvKind conv, EncodingKind enc, bool wrap_pair = false);

/// Angle of one gate under (theta, x); handles frozen substitution.
double resolve_angle(const CircuitSpec& spec, const GateOp& gate,
                     std::span<const double> theta, std::span<const double> x);

/// U_enc(x)|0...0>.
State encode(std::span<const double> x, EncodingKind kind);

/// Runs the whole circuit and returns the final statevector.
State run_state(const CircuitSpec& spec, std::span<const double> theta,
                std::span<const double> x);

/// yhat = <psi| Z_measured |psi> in [-1, 1]. theta must have length
/// param_count (frozen entries are ignored in favor of frozen values).
double forward(const CircuitSpec& spec, std::span<const double> theta,
               std::span<const double> x);

} // namespace qtag
