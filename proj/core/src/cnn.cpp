#include "qtag/cnn.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace qtag {

namespace {

double relu(double z) { return z > 0.0 ? z : 0.0; }
double relu_grad(double z) { return z > 0.0 ? 1.0 : 0.0; } // subgradient at 0 is 0

} // namespace

int cnn_parameter_count(int filters, int dense) {
    if (filters < 1 || dense < 1)
        throw std::invalid_argument("cnn_parameter_count: filters and dense must be >= 1");
    return 4 * filters + filters + filters * dense + dense + dense + 1;
}

CnnModel::CnnModel(int filters, int dense, LossKind loss)
    : filters_(filters), dense_(dense), loss_(loss) {
    weights_.assign(static_cast<std::size_t>(cnn_parameter_count(filters, dense)), 0.0);
}

int CnnModel::num_trainable() const { return static_cast<int>(weights_.size()); }

void CnnModel::init_params(Rng& rng) {
    const int conv_w = 4 * filters_;
    const int conv_end = conv_w + filters_;
    const int dense_w_end = conv_end + filters_ * dense_;
    const int dense_end = dense_w_end + dense_;
    const int out_w_end = dense_end + dense_;
    for (int i = 0; i < static_cast<int>(weights_.size()); ++i) {
        const bool is_bias = (i >= conv_w && i < conv_end) ||
                             (i >= dense_w_end && i < dense_end) ||
                             (i >= out_w_end);
        weights_[static_cast<std::size_t>(i)] = is_bias ? 0.0 : rng.uniform(-0.5, 0.5);
    }
}

void CnnModel::set_params(std::span<const double> values) {
    if (values.size() != weights_.size())
        throw std::invalid_argument("CnnModel::set_params: size mismatch");
    weights_.assign(values.begin(), values.end());
}

struct CnnModel::Cache {
    std::vector<double> conv_z;  // F pre-activations
    std::vector<double> conv_a;  // F
    std::vector<double> dense_z; // D
    std::vector<double> dense_a; // D
    double out_z = 0.0;
    double pred = 0.0;
};

double CnnModel::forward_cached(std::span<const double> x, Cache* cache) const {
    if (x.size() != 4)
        throw std::invalid_argument("CnnModel: input must be the 2x2 PCA image (4 values)");
    const double* w = weights_.data();
    const double* conv_w = w;
    const double* conv_b = conv_w + 4 * filters_;
    const double* dense_w = conv_b + filters_;
    const double* dense_b = dense_w + filters_ * dense_;
    const double* out_w = dense_b + dense_;
    const double out_b = out_w[dense_];

    Cache local;
    Cache& c = cache ? *cache : local;
    c.conv_z.resize(static_cast<std::size_t>(filters_));
    c.conv_a.resize(static_cast<std::size_t>(filters_));
    for (int f = 0; f < filters_; ++f) {
        double z = conv_b[f];
        for (int i = 0; i < 4; ++i) z += conv_w[4 * f + i] * x[i];
        c.conv_z[f] = z;
        c.conv_a[f] = relu(z); // 1x1 max-pool over a single cell: identity
    }
    c.dense_z.resize(static_cast<std::size_t>(dense_));
    c.dense_a.resize(static_cast<std::size_t>(dense_));
    for (int d = 0; d < dense_; ++d) {
        double z = dense_b[d];
        for (int f = 0; f < filters_; ++f) z += dense_w[d * filters_ + f] * c.conv_a[f];
        c.dense_z[d] = z;
        c.dense_a[d] = relu(z);
    }
    double z = out_b;
    for (int d = 0; d < dense_; ++d) z += out_w[d] * c.dense_a[d];
    c.out_z = z;
    c.pred = loss_ == LossKind::CrossEntropy ? 1.0 / (1.0 + std::exp(-z)) : std::tanh(z);
    return c.pred;
}

double CnnModel::predict(std::span<const double> x, LossKind kind) const {
    if (kind != loss_)
        throw std::invalid_argument("CnnModel: model was built for a different loss");
    return forward_cached(x, nullptr);
}

std::vector<double> CnnModel::prediction_gradient(std::span<const double> x,
                                                  LossKind kind) const {
    if (kind != loss_)
        throw std::invalid_argument("CnnModel: model was built for a different loss");
    Cache c;
    forward_cached(x, &c);

    std::vector<double> grad(weights_.size(), 0.0);
    double* g_conv_w = grad.data();
    double* g_conv_b = g_conv_w + 4 * filters_;
    double* g_dense_w = g_conv_b + filters_;
    double* g_dense_b = g_dense_w + filters_ * dense_;
    double* g_out_w = g_dense_b + dense_;
    double* g_out_b = g_out_w + dense_;

    const double* dense_w = weights_.data() + 4 * filters_ + filters_;
    const double* out_w = dense_w + filters_ * dense_ + dense_;

    // d pred / d out_z
    const double dact = loss_ == LossKind::CrossEntropy ? c.pred * (1.0 - c.pred)
                                                        : 1.0 - c.pred * c.pred;

    *g_out_b = dact;
    std::vector<double> d_dense_a(static_cast<std::size_t>(dense_));
    for (int d = 0; d < dense_; ++d) {
        g_out_w[d] = dact * c.dense_a[d];
        d_dense_a[d] = dact * out_w[d];
    }

    std::vector<double> d_conv_a(static_cast<std::size_t>(filters_), 0.0);
    for (int d = 0; d < dense_; ++d) {
        const double dz = d_dense_a[d] * relu_grad(c.dense_z[d]);
        g_dense_b[d] = dz;
        for (int f = 0; f < filters_; ++f) {
            g_dense_w[d * filters_ + f] = dz * c.conv_a[f];
            d_conv_a[f] += dz * dense_w[d * filters_ + f];
        }
    }

    for (int f = 0; f < filters_; ++f) {
        const double dz = d_conv_a[f] * relu_grad(c.conv_z[f]);
        g_conv_b[f] = dz;
        for (int i = 0; i < 4; ++i) g_conv_w[4 * f + i] = dz * x[i];
    }
    return grad;
}

std::string CnnModel::describe() const {
    return fmt::format("cnn[filters={},dense={},params={}]", filters_, dense_,
                       weights_.size());
}

std::string CnnModel::to_json() const {
    nlohmann::json j;
    j["filters"] = filters_;
    j["dense"] = dense_;
    j["loss"] = to_string(loss_);
    j["weights"] = weights_;
    return j.dump(2) + "\n";
}

CnnModel CnnModel::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    CnnModel model(j.at("filters").get<int>(), j.at("dense").get<int>(),
                   loss_from_string(j.at("loss").get<std::string>()));
    const auto w = j.at("weights").get<std::vector<double>>();
    if (w.size() != model.weights_.size())
        throw std::invalid_argument("CnnModel::from_json: weight count mismatch");
    model.weights_ = w;
    return model;
}

} // namespace qtag
