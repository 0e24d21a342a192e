#pragma once

#include <string>

#include "qtag/learn.hpp"

namespace qtag {

/**
 * Classical baseline matched in parameter count to the QCNNs:
 * one 2x2 valid convolution (F filters) over the 2x2 PCA image, ReLU,
 * a 1x1 max-pool (an identity kept for structural parity), flatten,
 * a dense ReLU layer of width D, and a scalar output. The output
 * activation is tanh for Hinge/MSE and sigmoid for CrossEntropy.
 *
 * Trainable scalars: 4F + F + F*D + D + D + 1, i.e. 33 for (F=4, D=2)
 * and 51 for (F=4, D=5).
 */
class CnnModel final : public Model {
public:
    CnnModel(int filters, int dense, LossKind loss);

    int num_trainable() const override;
    void init_params(Rng& rng) override; // weights U[-0.5, 0.5], biases 0
    std::vector<double> params() const override { return weights_; }
    void set_params(std::span<const double> values) override;
    double predict(std::span<const double> x, LossKind kind) const override;
    std::vector<double> prediction_gradient(std::span<const double> x,
                                            LossKind kind) const override;
    std::string describe() const override;

    int filters() const { return filters_; }
    int dense_width() const { return dense_; }

    std::string to_json() const;
    static CnnModel from_json(const std::string& text);

private:
    // flat layout: conv_w (F*4) | conv_b (F) | dense_w (D*F) | dense_b (D)
    //            | out_w (D) | out_b (1)
    int filters_;
    int dense_;
    LossKind loss_;
    std::vector<double> weights_;

    struct Cache;
    double forward_cached(std::span<const double> x, Cache* cache) const;
};

int cnn_parameter_count(int filters, int dense);

} // namespace qtag
