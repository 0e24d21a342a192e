#include "qtag/dea.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "qtag/rng.hpp"

namespace qtag {

namespace {

State run_with_insertion(const CircuitSpec& spec, std::span<const double> theta,
                         std::span<const double> x, int insert_after) {
    State s = zero_state(spec.num_qubits);
    for (int i = 0; i < static_cast<int>(spec.gates.size()); ++i) {
        const auto& g = spec.gates[i];
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
        if (i == insert_after) {
            // d/dt exp(-i t P/2) = exp(-i t P/2) . (-i P/2)
            SingleQubitGate gen = pauli(g.axis);
            for (auto& e : gen.m) e *= complex_t{0.0, -0.5};
            s = apply_single_raw(std::move(s), gen, g.target);
        }
    }
    return s;
}

} // namespace

std::vector<complex_t> state_jacobian_column(const CircuitSpec& spec,
                                             std::span<const double> theta,
                                             std::span<const double> x, int slot) {
    if (slot < 0 || slot >= spec.param_count)
        throw std::out_of_range("state_jacobian_column: slot out of range");
    if (spec.frozen[slot])
        throw std::invalid_argument("state_jacobian_column: slot " + std::to_string(slot) +
                                    " is frozen");
    std::vector<complex_t> col(std::size_t{1} << spec.num_qubits, complex_t{0.0, 0.0});
    for (int i = 0; i < static_cast<int>(spec.gates.size()); ++i) {
        const auto& g = spec.gates[i];
        if (g.kind != GateOp::Kind::Rotation || g.angle.kind != AngleSource::Kind::Param ||
            g.angle.index != slot)
            continue;
        State term = run_with_insertion(spec, theta, x, i);
        for (std::size_t a = 0; a < col.size(); ++a) col[a] += term.amps[a];
    }
    return col;
}

Eigen::MatrixXd real_jacobian(const std::vector<std::vector<complex_t>>& columns,
                              int num_qubits) {
    const long dim = 1L << num_qubits;
    Eigen::MatrixXd j(2 * dim, static_cast<long>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (static_cast<long>(columns[c].size()) != dim)
            throw std::invalid_argument("real_jacobian: column length mismatch");
        for (long r = 0; r < dim; ++r) {
            j(r, static_cast<long>(c)) = columns[c][r].real();
            j(dim + r, static_cast<long>(c)) = columns[c][r].imag();
        }
    }
    return j;
}

Eigen::MatrixXd s_matrix(const Eigen::MatrixXd& jacobian) {
    return jacobian.transpose() * jacobian;
}

std::vector<ScanPoint> draw_scan_points(const CircuitSpec& spec, int count,
                                        std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("draw_scan_points: count must be >= 1");
    Rng rng(seed);
    std::vector<ScanPoint> pts(count);
    for (auto& p : pts) {
        p.theta.resize(spec.param_count);
        for (auto& t : p.theta) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        for (auto& v : p.x) v = rng.uniform(0.0, std::numbers::pi);
    }
    return pts;
}

namespace {

/// Rank scan restricted to one choice of sample points; shared by the
/// joint scan and the per-point stability probes.
std::vector<std::uint8_t> scan_redundant(const CircuitSpec& spec,
                                         const std::vector<ScanPoint>& points,
                                         double tolerance, std::vector<int>* kept_out) {
    const int dim_cap = (1 << (spec.num_qubits + 1)) - 1;
    std::vector<std::vector<Eigen::VectorXd>> kept_cols(points.size());
    std::vector<std::uint8_t> redundant(spec.param_count, 0);
    std::vector<int> kept;

    const long dim = 1L << spec.num_qubits;
    for (int slot = 0; slot < spec.param_count; ++slot) {
        if (spec.frozen[slot]) continue;
        if (static_cast<int>(kept.size()) >= dim_cap) {
            redundant[slot] = 1;
            continue;
        }
        bool independent_everywhere = true;
        std::vector<Eigen::VectorXd> candidates(points.size());
        for (std::size_t p = 0; p < points.size(); ++p) {
            const auto& pt = points[p];
            auto col = state_jacobian_column(spec, pt.theta, pt.x, slot);
            Eigen::VectorXd rc(2 * dim);
            for (long r = 0; r < dim; ++r) {
                rc(r) = col[r].real();
                rc(dim + r) = col[r].imag();
            }
            candidates[p] = std::move(rc);

            const long k = static_cast<long>(kept_cols[p].size()) + 1;
            Eigen::MatrixXd j(2 * dim, k);
            for (long c = 0; c + 1 < k; ++c) j.col(c) = kept_cols[p][c];
            j.col(k - 1) = candidates[p];
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s_matrix(j),
                                                              Eigen::EigenvaluesOnly);
            const double lo = es.eigenvalues()(0);
            const double hi = es.eigenvalues()(k - 1);
            if (!(hi > 0.0) || lo < tolerance * hi) {
                independent_everywhere = false;
                break;
            }
        }
        if (independent_everywhere) {
            kept.push_back(slot);
            for (std::size_t p = 0; p < points.size(); ++p)
                kept_cols[p].push_back(std::move(candidates[p]));
        } else {
            redundant[slot] = 1;
        }
    }
    if (kept_out) *kept_out = std::move(kept);
    return redundant;
}

} // namespace

RedundancyReport redundancy_scan(const CircuitSpec& spec,
                                 const std::vector<ScanPoint>& points,
                                 double tolerance) {
    if (points.empty())
        throw std::invalid_argument("redundancy_scan: need at least one sample point");
    if (!(tolerance > 0.0))
        throw std::invalid_argument("redundancy_scan: tolerance must be > 0");
    for (const auto& p : points)
        if (static_cast<int>(p.theta.size()) != spec.param_count)
            throw std::invalid_argument("redundancy_scan: sample theta length mismatch");

    RedundancyReport rep;
    rep.tolerance = tolerance;
    rep.state_space_dim = (1 << (spec.num_qubits + 1)) - 1;
    rep.points = points;
    rep.redundant = scan_redundant(spec, points, tolerance, &rep.kept);
    rep.achieved_rank = static_cast<int>(rep.kept.size());

    if (points.size() > 1) {
        for (const auto& pt : points) {
            auto single = scan_redundant(spec, {pt}, tolerance, nullptr);
            if (single != rep.redundant) {
                rep.stable = false;
                break;
            }
        }
    }
    return rep;
}

CircuitSpec prune(const CircuitSpec& spec, const RedundancyReport& report,
                  std::span<const double> theta_freeze) {
    if (static_cast<int>(report.redundant.size()) != spec.param_count)
        throw std::invalid_argument("prune: report does not match this circuit");
    if (static_cast<int>(theta_freeze.size()) != spec.param_count)
        throw std::invalid_argument("prune: theta_freeze must be full length");
    CircuitSpec out = spec;
    for (int k = 0; k < spec.param_count; ++k) {
        if (report.redundant[k] && !out.frozen[k]) {
            out.frozen[k] = 1;
            out.frozen_value[k] = theta_freeze[k];
        }
    }
    out.validate();
    return out;
}

std::string report_to_json(const RedundancyReport& report) {
    nlohmann::json j;
    j["kept"] = report.kept;
    std::vector<int> red;
    for (int k = 0; k < static_cast<int>(report.redundant.size()); ++k)
        if (report.redundant[k]) red.push_back(k);
    j["redundant"] = red;
    j["achieved_rank"] = report.achieved_rank;
    j["state_space_dim"] = report.state_space_dim;
    j["tolerance"] = report.tolerance;
    j["points"] = report.points.size();
    j["stable"] = report.stable;
    return j.dump(2) + "\n";
}

} // namespace qtag
