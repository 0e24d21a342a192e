#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qtag/circuit.hpp"
#include "qtag/dataset.hpp"
#include "qtag/rng.hpp"

namespace qtag {

enum class LossKind { Hinge, Mse, CrossEntropy };

const char* to_string(LossKind kind);
LossKind loss_from_string(const std::string& name);

/// Hinge / MSE consume labels in {-1, +1}; CrossEntropy consumes labels
/// in {0, 1} and predictions in (0, 1) (log arguments clamped at 1e-7).
double loss_value(LossKind kind, std::span<const double> y, std::span<const double> yhat);

/// dL/dyhat for one sample (before the 1/N batch mean).
double loss_grad_pred(LossKind kind, double y, double yhat);

/// Loss-domain label for a {0,1} class index.
double label_for(LossKind kind, int label01);

/// Fraction of correct classifications. +-1-label losses classify by
/// sign with yhat == 0 counted wrong; CrossEntropy classifies by
/// yhat > 0.5.
double accuracy(LossKind kind, std::span<const double> y, std::span<const double> yhat);

/// Standard Adam with bias correction (beta1 = 0.9, beta2 = 0.999,
/// eps = 1e-8).
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

void adam_step(AdamState& state, std::span<double> theta, std::span<const double> grad,
               double lr);

/// Trainable classifier consumed by train(): QCNN or CNN.
class Model {
public:
    virtual ~Model() = default;
    virtual int num_trainable() const = 0;
    virtual void init_params(Rng& rng) = 0;
    virtual std::vector<double> params() const = 0;
    virtual void set_params(std::span<const double> values) = 0;
    /// Prediction in the domain of the given loss.
    virtual double predict(std::span<const double> x, LossKind kind) const = 0;
    /// d prediction / d trainable params.
    virtual std::vector<double> prediction_gradient(std::span<const double> x,
                                                    LossKind kind) const = 0;
    virtual std::string describe() const = 0;
};

/// QCNN model: a circuit plus its full parameter vector. Gradients use
/// the parameter-shift rule, summed over every gate occurrence of a
/// shared slot. CrossEntropy predictions map the Z expectation through
/// p = (1 + yhat) / 2.
class QcnnModel final : public Model {
public:
    explicit QcnnModel(CircuitSpec spec);

    int num_trainable() const override { return spec_.trainable_count(); }
    void init_params(Rng& rng) override; // uniform [0, 2pi) per trainable slot
    std::vector<double> params() const override;
    void set_params(std::span<const double> values) override;
    double predict(std::span<const double> x, LossKind kind) const override;
    std::vector<double> prediction_gradient(std::span<const double> x,
                                            LossKind kind) const override;
    std::string describe() const override;

    const CircuitSpec& spec() const { return spec_; }
    std::span<const double> full_theta() const { return theta_; }

private:
    CircuitSpec spec_;
    std::vector<double> theta_; // full length, frozen entries unused
    std::vector<int> slots_;    // trainable slot indices
};

/// Mean loss gradient over a batch, averaged over samples. Per-sample
/// work may run in parallel; the reduction order is fixed so results
/// are bit-reproducible. labels01 are {0,1} class indices.
std::vector<double> batch_loss_gradient(const Model& model,
                                        std::span<const std::array<double, 4>> x,
                                        std::span<const int> labels01, LossKind kind,
                                        int jobs = 0);

struct Metrics {
    double loss = 0.0;
    double acc = 0.0;
};
Metrics evaluate(const Model& model, const FeatureSet& data, LossKind kind, int jobs = 0);

struct TrainConfig {
    int epochs = 30;
    int batch_size = 32; // one of {16, 32, 64, 128}
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    LossKind loss = LossKind::Mse;
    int runs = 10;
    int jobs = 0;

    void validate(std::size_t train_size) const;
};

struct EpochRecord {
    int epoch = 0; // 0 is the pre-training evaluation
    double train_loss = 0.0;
    double train_acc = 0.0;
    double test_loss = 0.0;
    double test_acc = 0.0;
    double wall_seconds = 0.0;
};

struct RunLog {
    std::vector<EpochRecord> epochs;
    TrainConfig config;
    std::string model_description;
    std::vector<double> final_params;

    double final_test_acc() const { return epochs.back().test_acc; }
};

/**
 * Seeded mini-batch Adam training. Epoch record 0 holds the initial
 * evaluation; records 1..epochs follow one full pass each. The last
 * incomplete batch of an epoch is used, weighted by its actual size.
 * Everything except wall_seconds is a pure function of
 * (model, data, config).
 */
RunLog train(Model& model, const FeatureSet& train_data, const FeatureSet& test_data,
             const TrainConfig& cfg);

/// One experiment-grid cell: a model factory (fresh model per run),
/// the data splits it trains on, and its training configuration. The
/// string labels feed the aggregate CSV.
struct GridCell {
    std::string circuit;  // "so4", "su4", "cnn33", ...
    std::string loss;     // "hinge", "mse", "ce"
    std::string encoding; // "tpe", ..., or "-" for CNN
    int batch = 32;
    TrainConfig config;
    std::function<std::unique_ptr<Model>()> make_model;
    const FeatureSet* train_data = nullptr;
    const FeatureSet* test_data = nullptr;
};

struct CellResult {
    GridCell cell;
    std::vector<RunLog> runs;
    double mean_acc = 0.0;
    double stderr_acc = 0.0; // sample stddev / sqrt(runs); 0 for runs = 1
};

/// Trains every cell `runs` times with per-run seeds cfg.seed + r and
/// aggregates final-epoch test accuracy. Independent runs may execute
/// in parallel.
std::vector<CellResult> run_grid(const std::vector<GridCell>& cells);

/// header: epoch,train_loss,train_acc,test_loss,test_acc,wall_seconds
void write_run_log_csv(std::ostream& out, const RunLog& log);
RunLog read_run_log_csv(std::istream& in); // for the compare command

/// header: circuit,loss,encoding,batch,runs,mean_acc,stderr
void write_grid_csv(std::ostream& out, const std::vector<CellResult>& results);

} // namespace qtag
