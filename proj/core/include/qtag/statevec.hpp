#pragma once

#include <array>
#include <complex>
#include <vector>

namespace qtag {

using complex_t = std::complex<double>;

enum class Axis { X, Y, Z };

inline constexpr int kMaxQubits = 12;

/**
 * Dense amplitude vector of a Q-qubit register.
 *
 * Convention: qubit 0 is the MOST significant bit of the basis-state
 * index, i.e. amps[b] is the amplitude of |q0 q1 ... q_{Q-1}> with
 * q0 = bit (Q-1) of b. All gate routines below assume this ordering.
 */
struct State {
    int num_qubits = 0;
    std::vector<complex_t> amps;

    double norm_sq() const;
};

/// |0...0> on `num_qubits` qubits. Throws std::invalid_argument unless
/// 1 <= num_qubits <= kMaxQubits.
State zero_state(int num_qubits);

/// Row-major 2x2 complex matrix.
struct SingleQubitGate {
    std::array<complex_t, 4> m{};

    complex_t operator()(int r, int c) const { return m[2 * r + c]; }

    /// max |(U^dag U - I)_{ij}|; 0 for an exactly unitary matrix.
    double unitarity_defect() const;
};

/// exp(-i angle P/2) for P in {X, Y, Z}. Non-finite angles are rejected.
SingleQubitGate rotation(Axis axis, double angle);

/// R(alpha, beta, gamma) = Rz(gamma) Ry(beta) Rz(alpha)
SingleQubitGate composite_r(double alpha, double beta, double gamma);

/// R'(alpha, beta, gamma) = Rz(gamma) Rx(beta) Rz(alpha)
SingleQubitGate composite_r_prime(double alpha, double beta, double gamma);

SingleQubitGate hadamard();
SingleQubitGate pauli(Axis axis);

/// Product a*b (i.e. b applied first).
SingleQubitGate matmul(const SingleQubitGate& a, const SingleQubitGate& b);

/// I (x) ... (x) g (x) ... (x) I with g at `target`. Takes the state by
/// value; pass an rvalue to update in place without copying.
State apply_single(State s, const SingleQubitGate& g, int target);

/// Flips the target bit on every basis state whose control bit is 1.
State apply_cnot(State s, int control, int target);

/// Applies a 2x2 matrix scaled arbitrarily (not necessarily unitary);
/// used for generator insertions when differentiating circuits.
State apply_single_raw(State s, const SingleQubitGate& g, int target);

/// <psi| Z_target |psi>, always in [-1, 1] for a normalized state.
double expect_z(const State& s, int target);

} // namespace qtag
