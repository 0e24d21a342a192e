#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtag/circuit.hpp"

namespace qtag {

/// One evaluation point of the circuit state map C(theta): a full
/// parameter draw plus the encoded input it is composed with.
struct ScanPoint {
    std::vector<double> theta;
    std::array<double, 4> x{};
};

/// Result of the inductive rank scan over parameter slots.
struct RedundancyReport {
    std::vector<std::uint8_t> redundant; // size param_count
    std::vector<int> kept;               // slots that raised the rank, circuit order
    int achieved_rank = 0;
    int state_space_dim = 0;             // 2^(Q+1) - 1
    double tolerance = 0.0;
    std::vector<ScanPoint> points;
    /// True when every sample point, scanned alone, yields the same
    /// redundancy vector. Disagreement is reported, never resolved here.
    bool stable = true;
};

/// d C / d theta_slot as a complex 2^Q vector, summed over every gate
/// occurrence of the slot (weight sharing), computed exactly by
/// inserting -i P/2 after each occurrence. The slot must be trainable.
std::vector<complex_t> state_jacobian_column(const CircuitSpec& spec,
                                             std::span<const double> theta,
                                             std::span<const double> x, int slot);

/// Stacks (Re; Im) of the given complex columns into a real 2^(Q+1) x k
/// matrix.
Eigen::MatrixXd real_jacobian(const std::vector<std::vector<complex_t>>& columns,
                              int num_qubits);

/// S = J^T J, the real Gram matrix of Jacobian columns (symmetric PSD).
Eigen::MatrixXd s_matrix(const Eigen::MatrixXd& jacobian);

/// Draws `count` scan points: theta uniform in [0, 2pi) per slot and x
/// uniform in the encoding range [0, pi], from a seeded generator.
std::vector<ScanPoint> draw_scan_points(const CircuitSpec& spec, int count,
                                        std::uint64_t seed);

/**
 * Inductive S-matrix rank scan in circuit slot order. A slot is kept
 * only if appending its column raises the rank at EVERY sample point
 * (smallest eigenvalue of the candidate S above tol * largest); once
 * the rank reaches 2^(Q+1) - 1 all remaining slots are redundant.
 * Slots already frozen in the spec are skipped (neither kept nor
 * counted redundant).
 */
RedundancyReport redundancy_scan(const CircuitSpec& spec,
                                 const std::vector<ScanPoint>& points,
                                 double tolerance = 1e-10);

/// Returns a copy of the spec with the redundant slots frozen at the
/// corresponding entries of theta_freeze (full-length vector).
CircuitSpec prune(const CircuitSpec& spec, const RedundancyReport& report,
                  std::span<const double> theta_freeze);

/// JSON document for the CLI: {"kept": [...], "redundant": [...],
/// "achieved_rank": n, "state_space_dim": d, "tolerance": t,
/// "points": p, "stable": b}.
std::string report_to_json(const RedundancyReport& report);

} // namespace qtag
