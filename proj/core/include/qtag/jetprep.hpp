#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qtag/jet.hpp"

namespace qtag {

/// Orthonormal right-handed-ish frame from the jet's leading constituents.
struct GSBasis {
    std::array<double, 3> e1{}; // jet axis
    std::array<double, 3> e2{};
    std::array<double, 3> e3{};
};

/// H x W grid of energy fractions over (X, Y) in [-1, 1]^2. pixels is
/// row-major with X along columns and Y along rows; row 0 is Y = -1.
struct JetImage {
    int height = 0;
    int width = 0;
    std::vector<double> pixels;
    int label = 0;

    double sum() const;
};

/**
 * Rescales every constituent so the jet's invariant mass becomes
 * mass_target, then boosts along the jet momentum so the jet energy
 * becomes energy_target. Throws KinematicsError when the jet total is
 * massless or spacelike, std::invalid_argument when
 * energy_target < mass_target.
 */
Jet rescale_and_boost(const Jet& jet, double mass_target, double energy_target);

/**
 * Gram-Schmidt frame from the three highest-|p| constituents (ties
 * broken by input order): e1 along their summed momentum, e2 from the
 * leading constituent, e3 from the subleading one. Throws
 * DegeneracyError when the seed vectors are linearly dependent
 * (normalized 3x3 determinant below 1e-12).
 */
GSBasis gram_schmidt_basis(const Jet& jet);

/// Image-plane coordinates of one constituent: X = p.e2/p0, Y = p.e3/p0.
/// The energy weight applied at render time is p0 / energy_target.
struct Projection {
    double x = 0.0;
    double y = 0.0;
    double weight_numerator = 0.0; // p0
};
Projection project_constituent(const FourMomentum& p, const GSBasis& basis);

struct RenderStats {
    long constituents_dropped_nonpositive_energy = 0;
    long coordinates_clamped = 0;
};

/// 2D histogram over [-1,1]^2 with weight p0/energy_target per
/// constituent. Upper-edge coordinates land in the last bin.
JetImage render_image(const Jet& jet, const GSBasis& basis, int height, int width,
                      double energy_target, RenderStats* stats = nullptr);

struct PrepOptions {
    double boost_gamma = 10.0; // E_B / m_B
    double mass_scale = 1.0;   // m_B; cancels in X, Y and in the weights
    int height = 28;
    int width = 28;
};

struct PrepStats {
    long jets_in = 0;
    long jets_kept = 0;
    long skipped_degenerate = 0;
    long skipped_kinematics = 0;
    RenderStats render;
};

/// Full per-jet pipeline: rescale+boost, basis, render. Returns nullopt
/// (and counts the reason) for jets the construction rejects.
std::optional<JetImage> preprocess_jet(const Jet& jet, const PrepOptions& opt,
                                       PrepStats& stats);

/// Order-preserving batch version of preprocess_jet; `jobs` caps the
/// worker threads (0 = hardware default).
std::vector<JetImage> preprocess_jets(const std::vector<Jet>& jets, const PrepOptions& opt,
                                      PrepStats& stats, int jobs = 0);

} // namespace qtag
