#include "qtag/statevec.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qtag {

namespace {

void check_target(const State& s, int target) {
    if (target < 0 || target >= s.num_qubits)
        throw std::out_of_range("qubit index " + std::to_string(target) +
                                " out of range for " + std::to_string(s.num_qubits) +
                                " qubits");
}

} // namespace

double State::norm_sq() const {
    double n = 0.0;
    for (const auto& a : amps) n += std::norm(a);
    return n;
}

State zero_state(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("num_qubits must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(num_qubits));
    State s;
    s.num_qubits = num_qubits;
    s.amps.assign(std::size_t{1} << num_qubits, complex_t{0.0, 0.0});
    s.amps[0] = complex_t{1.0, 0.0};
    return s;
}

double SingleQubitGate::unitarity_defect() const {
    // U^dag U
    complex_t d00 = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    complex_t d01 = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    complex_t d10 = std::conj(m[1]) * m[0] + std::conj(m[3]) * m[2];
    complex_t d11 = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
    double defect = 0.0;
    defect = std::max(defect, std::abs(d00 - complex_t{1.0, 0.0}));
    defect = std::max(defect, std::abs(d01));
    defect = std::max(defect, std::abs(d10));
    defect = std::max(defect, std::abs(d11 - complex_t{1.0, 0.0}));
    return defect;
}

SingleQubitGate rotation(Axis axis, double angle) {
    if (!std::isfinite(angle))
        throw std::domain_error("rotation angle must be finite");
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    SingleQubitGate g;
    switch (axis) {
    case Axis::X:
        g.m = {complex_t{c, 0}, complex_t{0, -s}, complex_t{0, -s}, complex_t{c, 0}};
        break;
    case Axis::Y:
        g.m = {complex_t{c, 0}, complex_t{-s, 0}, complex_t{s, 0}, complex_t{c, 0}};
        break;
    case Axis::Z:
        g.m = {complex_t{c, -s}, complex_t{0, 0}, complex_t{0, 0}, complex_t{c, s}};
        break;
    }
    return g;
}

SingleQubitGate matmul(const SingleQubitGate& a, const SingleQubitGate& b) {
    SingleQubitGate r;
    r.m = {a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
           a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]};
    return r;
}

SingleQubitGate composite_r(double alpha, double beta, double gamma) {
    return matmul(rotation(Axis::Z, gamma),
                  matmul(rotation(Axis::Y, beta), rotation(Axis::Z, alpha)));
}

SingleQubitGate composite_r_prime(double alpha, double beta, double gamma) {
    return matmul(rotation(Axis::Z, gamma),
                  matmul(rotation(Axis::X, beta), rotation(Axis::Z, alpha)));
}

SingleQubitGate hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    SingleQubitGate g;
    g.m = {complex_t{r, 0}, complex_t{r, 0}, complex_t{r, 0}, complex_t{-r, 0}};
    return g;
}

SingleQubitGate pauli(Axis axis) {
    SingleQubitGate g;
    switch (axis) {
    case Axis::X: g.m = {complex_t{0, 0}, complex_t{1, 0}, complex_t{1, 0}, complex_t{0, 0}}; break;
    case Axis::Y: g.m = {complex_t{0, 0}, complex_t{0, -1}, complex_t{0, 1}, complex_t{0, 0}}; break;
    case Axis::Z: g.m = {complex_t{1, 0}, complex_t{0, 0}, complex_t{0, 0}, complex_t{-1, 0}}; break;
    }
    return g;
}

State apply_single_raw(State s, const SingleQubitGate& g, int target) {
    check_target(s, target);
    const std::size_t stride = std::size_t{1} << (s.num_qubits - 1 - target);
    const std::size_t dim = s.amps.size();
    const complex_t m00 = g.m[0], m01 = g.m[1], m10 = g.m[2], m11 = g.m[3];
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + stride;
            const complex_t a0 = s.amps[i0];
            const complex_t a1 = s.amps[i1];
            s.amps[i0] = m00 * a0 + m01 * a1;
            s.amps[i1] = m10 * a0 + m11 * a1;
        }
    }
    return s;
}

State apply_single(State s, const SingleQubitGate& g, int target) {
    return apply_single_raw(std::move(s), g, target);
}

State apply_cnot(State s, int control, int target) {
    check_target(s, control);
    check_target(s, target);
    if (control == target)
        throw std::out_of_range("CNOT control and target must differ");
    const std::size_t cb = std::size_t{1} << (s.num_qubits - 1 - control);
    const std::size_t tb = std::size_t{1} << (s.num_qubits - 1 - target);
    const std::size_t dim = s.amps.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cb) && !(i & tb)) std::swap(s.amps[i], s.amps[i | tb]);
    }
    return s;
}

double expect_z(const State& s, int target) {
    check_target(s, target);
    const std::size_t tb = std::size_t{1} << (s.num_qubits - 1 - target);
    double val = 0.0;
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
        const double p = std::norm(s.amps[i]);
        val += (i & tb) ? -p : p;
    }
    return val;
}

} // namespace qtag
