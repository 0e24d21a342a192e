#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qtag {

/**
 * Principal components of a sample matrix (rows = samples). Centering
 * only, no per-pixel variance scaling; that choice is recorded in the
 * model file. feature_min / feature_max are the training-split bounds
 * of the projected coordinates, used to map features into [0, pi].
 */
struct PcaModel {
    Eigen::VectorXd mean;               // D
    Eigen::MatrixXd components;         // n_components x D, orthonormal rows
    Eigen::VectorXd explained_variance; // n_components, non-increasing
    Eigen::VectorXd feature_min;        // n_components (empty until set)
    Eigen::VectorXd feature_max;

    int n_components() const { return static_cast<int>(components.rows()); }
    int dim() const { return static_cast<int>(components.cols()); }
};

/**
 * Fits via SVD of the centered data. Sample covariance uses the N-1
 * normalization. Component signs are fixed deterministically (largest
 * |entry| positive). Requires n_samples > n_components and
 * n_components <= D.
 */
PcaModel pca_fit(const Eigen::MatrixXd& samples, int n_components);

Eigen::VectorXd pca_transform(const PcaModel& model, const Eigen::VectorXd& sample);
Eigen::VectorXd pca_inverse_transform(const PcaModel& model, const Eigen::VectorXd& coords);

/// Stores per-feature min/max of the training coordinates in the model.
void fit_feature_range(PcaModel& model, const Eigen::MatrixXd& train_coords);

/// Affine map of coordinates into [0, pi] using the stored training
/// bounds; out-of-range values (possible on the test split) are clamped
/// and counted.
std::vector<double> normalize_features(const PcaModel& model, const Eigen::VectorXd& coords,
                                       long* clamped = nullptr);

std::string pca_to_json(const PcaModel& model);
PcaModel pca_from_json(const std::string& text);

} // namespace qtag
