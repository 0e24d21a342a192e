#include "qtag/learn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qtag/errors.hpp"

namespace qtag {

namespace {

constexpr double kLogClamp = 1e-7;

int thread_count(int jobs) {
#ifdef _OPENMP
    return jobs > 0 ? jobs : omp_get_max_threads();
#else
    (void)jobs;
    return 1;
#endif
}

double clamped_log(double p) { return std::log(std::clamp(p, kLogClamp, 1.0 - kLogClamp)); }

} // namespace

const char* to_string(LossKind kind) {
    switch (kind) {
    case LossKind::Hinge: return "hinge";
    case LossKind::Mse: return "mse";
    default: return "ce";
    }
}

LossKind loss_from_string(const std::string& name) {
    if (name == "hinge") return LossKind::Hinge;
    if (name == "mse") return LossKind::Mse;
    if (name == "ce" || name == "crossentropy" || name == "cross-entropy")
        return LossKind::CrossEntropy;
    throw std::invalid_argument("unknown loss '" + name + "' (allowed: hinge, mse, ce)");
}

double label_for(LossKind kind, int label01) {
    if (label01 != 0 && label01 != 1)
        throw std::invalid_argument("label must be 0 or 1");
    if (kind == LossKind::CrossEntropy) return static_cast<double>(label01);
    return label01 == 1 ? 1.0 : -1.0;
}

double loss_value(LossKind kind, std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size() || y.empty())
        throw std::invalid_argument("loss_value: label/prediction size mismatch or empty");
    double sum = 0.0;
    switch (kind) {
    case LossKind::Hinge:
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] != 1.0 && y[i] != -1.0)
                throw std::invalid_argument("hinge labels must be +-1");
            sum += std::max(0.0, 1.0 - y[i] * yhat[i]);
        }
        break;
    case LossKind::Mse:
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] != 1.0 && y[i] != -1.0)
                throw std::invalid_argument("MSE labels must be +-1");
            sum += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        }
        break;
    case LossKind::CrossEntropy:
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] != 0.0 && y[i] != 1.0)
                throw std::invalid_argument("cross-entropy labels must be 0/1");
            if (yhat[i] < 0.0 || yhat[i] > 1.0)
                throw std::invalid_argument("cross-entropy predictions must be in [0, 1]");
            sum -= y[i] * clamped_log(yhat[i]) + (1.0 - y[i]) * clamped_log(1.0 - yhat[i]);
        }
        break;
    }
    return sum / static_cast<double>(y.size());
}

double loss_grad_pred(LossKind kind, double y, double yhat) {
    switch (kind) {
    case LossKind::Hinge:
        return (1.0 - y * yhat > 0.0) ? -y : 0.0;
    case LossKind::Mse:
        return 2.0 * (yhat - y);
    default: {
        const double p = std::clamp(yhat, kLogClamp, 1.0 - kLogClamp);
        return -y / p + (1.0 - y) / (1.0 - p);
    }
    }
}

double accuracy(LossKind kind, std::span<const double> y, std::span<const double> yhat) {
    if (y.empty() || y.size() != yhat.size())
        throw std::invalid_argument("accuracy: empty input or size mismatch");
    long correct = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (kind == LossKind::CrossEntropy) {
            const int pred = yhat[i] > 0.5 ? 1 : 0;
            if (pred == static_cast<int>(y[i])) ++correct;
        } else {
            // yhat == 0 carries no sign and counts as wrong
            if (y[i] * yhat[i] > 0.0) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(y.size());
}

void adam_step(AdamState& state, std::span<double> theta, std::span<const double> grad,
               double lr) {
    if (theta.size() != grad.size() || theta.size() != state.m.size())
        throw std::invalid_argument("adam_step: shape mismatch");
    ++state.t;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        theta[i] -= lr * mhat / (std::sqrt(vhat) + state.eps);
    }
}

// ---------------------------------------------------------------------------
// QcnnModel
// ---------------------------------------------------------------------------

QcnnModel::QcnnModel(CircuitSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    theta_.assign(spec_.param_count, 0.0);
    for (int k = 0; k < spec_.param_count; ++k)
        if (spec_.frozen[k]) theta_[k] = spec_.frozen_value[k];
    slots_ = spec_.trainable_slots();
}

void QcnnModel::init_params(Rng& rng) {
    for (int k : slots_) theta_[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
}

std::vector<double> QcnnModel::params() const {
    std::vector<double> out;
    out.reserve(slots_.size());
    for (int k : slots_) out.push_back(theta_[k]);
    return out;
}

void QcnnModel::set_params(std::span<const double> values) {
    if (values.size() != slots_.size())
        throw std::invalid_argument("QcnnModel::set_params: size mismatch");
    for (std::size_t i = 0; i < slots_.size(); ++i) theta_[slots_[i]] = values[i];
}

double QcnnModel::predict(std::span<const double> x, LossKind kind) const {
    const double y = forward(spec_, theta_, x);
    return kind == LossKind::CrossEntropy ? (1.0 + y) / 2.0 : y;
}

std::vector<double> QcnnModel::prediction_gradient(std::span<const double> x,
                                                   LossKind kind) const {
    const auto& gates = spec_.gates;
    const int n_gates = static_cast<int>(gates.size());

    // prefix[i] = state after gates [0, i)
    std::vector<State> prefix;
    prefix.reserve(n_gates + 1);
    prefix.push_back(zero_state(spec_.num_qubits));
    for (int i = 0; i < n_gates; ++i) {
        State s = prefix.back();
        const auto& g = gates[i];
        switch (g.kind) {
        case GateOp::Kind::Rotation:
            s = apply_single(std::move(s), rotation(g.axis, resolve_angle(spec_, g, theta_, x)),
                             g.target);
            break;
        case GateOp::Kind::Hadamard:
            s = apply_single(std::move(s), hadamard(), g.target);
            break;
        case GateOp::Kind::Cnot:
            s = apply_cnot(std::move(s), g.control, g.target);
            break;
        }
        prefix.push_back(std::move(s));
    }

    const auto shifted_expectation = [&](int occurrence, double shift) {
        const auto& g = gates[occurrence];
        State s = prefix[occurrence];
        s = apply_single(std::move(s),
                         rotation(g.axis, resolve_angle(spec_, g, theta_, x) + shift),
                         g.target);
        for (int j = occurrence + 1; j < n_gates; ++j) {
            const auto& gj = gates[j];
            switch (gj.kind) {
            case GateOp::Kind::Rotation:
                s = apply_single(std::move(s),
                                 rotation(gj.axis, resolve_angle(spec_, gj, theta_, x)),
                                 gj.target);
                break;
            case GateOp::Kind::Hadamard:
                s = apply_single(std::move(s), hadamard(), gj.target);
                break;
            case GateOp::Kind::Cnot:
                s = apply_cnot(std::move(s), gj.control, gj.target);
                break;
            }
        }
        return expect_z(s, spec_.measured_qubit);
    };

    // parameter-shift rule, one +-pi/2 pair per occurrence of a slot
    std::vector<double> dfull(spec_.param_count, 0.0);
    for (int i = 0; i < n_gates; ++i) {
        const auto& g = gates[i];
        if (g.kind != GateOp::Kind::Rotation || g.angle.kind != AngleSource::Kind::Param)
            continue;
        const int k = g.angle.index;
        if (spec_.frozen[k]) continue;
        const double plus = shifted_expectation(i, std::numbers::pi / 2.0);
        const double minus = shifted_expectation(i, -std::numbers::pi / 2.0);
        dfull[k] += (plus - minus) / 2.0;
    }

    const double chain = kind == LossKind::CrossEntropy ? 0.5 : 1.0;
    std::vector<double> out;
    out.reserve(slots_.size());
    for (int k : slots_) out.push_back(chain * dfull[k]);
    return out;
}

std::string QcnnModel::describe() const {
    return fmt::format("qcnn[qubits={},params={},trainable={}]", spec_.num_qubits,
                       spec_.param_count, spec_.trainable_count());
}

// ---------------------------------------------------------------------------
// Batched evaluation and training
// ---------------------------------------------------------------------------

std::vector<double> batch_loss_gradient(const Model& model,
                                        std::span<const std::array<double, 4>> x,
                                        std::span<const int> labels01, LossKind kind,
                                        int jobs) {
    if (x.size() != labels01.size() || x.empty())
        throw std::invalid_argument("batch_loss_gradient: batch shape mismatch or empty");
    const std::size_t n = x.size();
    std::vector<std::vector<double>> per_sample(n);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_count(jobs)) if (n > 1)
#endif
    for (std::size_t i = 0; i < n; ++i) {
        const double y = label_for(kind, labels01[i]);
        const double pred = model.predict(x[i], kind);
        auto g = model.prediction_gradient(x[i], kind);
        const double dl = loss_grad_pred(kind, y, pred);
        for (auto& v : g) v *= dl;
        per_sample[i] = std::move(g);
    }

    std::vector<double> grad(static_cast<std::size_t>(model.num_trainable()), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += per_sample[i][k];
    }
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& v : grad) v *= inv;
    return grad;
}

Metrics evaluate(const Model& model, const FeatureSet& data, LossKind kind, int jobs) {
    if (data.size() == 0)
        return {std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN()};
    std::vector<double> y(data.size()), yhat(data.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_count(jobs)) if (data.size() > 1)
#endif
    for (std::size_t i = 0; i < data.size(); ++i) {
        y[i] = label_for(kind, data.labels[i]);
        yhat[i] = model.predict(data.x[i], kind);
    }
    return {loss_value(kind, y, yhat), accuracy(kind, y, yhat)};
}

void TrainConfig::validate(std::size_t train_size) const {
    if (epochs < 0) throw std::invalid_argument("TrainConfig: epochs must be >= 0");
    if (batch_size != 16 && batch_size != 32 && batch_size != 64 && batch_size != 128)
        throw std::invalid_argument("TrainConfig: batch_size must be one of 16, 32, 64, 128");
    if (static_cast<std::size_t>(batch_size) > train_size)
        throw std::invalid_argument("TrainConfig: batch_size exceeds the training set");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("TrainConfig: learning_rate <= 0");
    if (runs < 1) throw std::invalid_argument("TrainConfig: runs must be >= 1");
}

RunLog train(Model& model, const FeatureSet& train_data, const FeatureSet& test_data,
             const TrainConfig& cfg) {
    cfg.validate(train_data.size());
    if (train_data.size() == 0) throw std::invalid_argument("train: empty training data");

    Rng rng(cfg.seed);
    model.init_params(rng);
    auto theta = model.params();
    AdamState adam(theta.size());

    RunLog log;
    log.config = cfg;
    log.model_description = model.describe();

    const auto t0 = std::chrono::steady_clock::now();
    const auto record = [&](int epoch) {
        const Metrics tr = evaluate(model, train_data, cfg.loss, cfg.jobs);
        const Metrics te = evaluate(model, test_data, cfg.loss, cfg.jobs);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log.epochs.push_back({epoch, tr.loss, tr.acc, te.loss, te.acc, wall});
    };
    record(0);

    std::vector<int> order(train_data.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<std::array<double, 4>> bx;
    std::vector<int> by;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            bx.clear();
            by.clear();
            for (std::size_t i = start; i < stop; ++i) {
                bx.push_back(train_data.x[order[i]]);
                by.push_back(train_data.labels[order[i]]);
            }
            const auto grad = batch_loss_gradient(model, bx, by, cfg.loss, cfg.jobs);
            adam_step(adam, theta, grad, cfg.learning_rate);
            model.set_params(theta);
        }
        record(epoch);
    }

    log.final_params = model.params();
    return log;
}

std::vector<CellResult> run_grid(const std::vector<GridCell>& cells) {
    std::vector<CellResult> results;
    results.reserve(cells.size());
    for (const auto& cell : cells) {
        if (!cell.train_data || !cell.test_data || !cell.make_model)
            throw std::invalid_argument("run_grid: incomplete grid cell");
        CellResult res;
        res.cell = cell;
        res.runs.resize(static_cast<std::size_t>(cell.config.runs));

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(cell.config.jobs)) \
    if (cell.config.runs > 1)
#endif
        for (int r = 0; r < cell.config.runs; ++r) {
            auto model = cell.make_model();
            TrainConfig cfg = cell.config;
            cfg.seed = cell.config.seed + static_cast<std::uint64_t>(r);
            res.runs[static_cast<std::size_t>(r)] =
                train(*model, *cell.train_data, *cell.test_data, cfg);
        }

        double mean = 0.0;
        for (const auto& run : res.runs) mean += run.final_test_acc();
        mean /= static_cast<double>(res.runs.size());
        double var = 0.0;
        for (const auto& run : res.runs) {
            const double d = run.final_test_acc() - mean;
            var += d * d;
        }
        res.mean_acc = mean;
        res.stderr_acc =
            res.runs.size() > 1
                ? std::sqrt(var / static_cast<double>(res.runs.size() - 1)) /
                      std::sqrt(static_cast<double>(res.runs.size()))
                : 0.0;
        results.push_back(std::move(res));
    }
    return results;
}

void write_run_log_csv(std::ostream& out, const RunLog& log) {
    out << "epoch,train_loss,train_acc,test_loss,test_acc,wall_seconds\n";
    for (const auto& e : log.epochs) {
        out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.3f}\n", e.epoch,
                           e.train_loss, e.train_acc, e.test_loss, e.test_acc,
                           e.wall_seconds);
    }
}

RunLog read_run_log_csv(std::istream& in) {
    RunLog log;
    std::string line;
    long lineno = 0;
    if (!std::getline(in, line) ||
        line != "epoch,train_loss,train_acc,test_loss,test_acc,wall_seconds")
        throw ParseError(1, "expected run-log CSV header");
    ++lineno;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        EpochRecord rec;
        std::istringstream ls(line);
        std::string tok;
        try {
            std::getline(ls, tok, ',');
            rec.epoch = std::stoi(tok);
            std::getline(ls, tok, ',');
            rec.train_loss = std::stod(tok);
            std::getline(ls, tok, ',');
            rec.train_acc = std::stod(tok);
            std::getline(ls, tok, ',');
            rec.test_loss = std::stod(tok);
            std::getline(ls, tok, ',');
            rec.test_acc = std::stod(tok);
            std::getline(ls, tok, ',');
            rec.wall_seconds = std::stod(tok);
        } catch (const std::exception&) {
            throw ParseError(lineno, "malformed run-log row");
        }
        log.epochs.push_back(rec);
    }
    if (log.epochs.empty()) throw ParseError(lineno, "run log has no rows");
    return log;
}

void write_grid_csv(std::ostream& out, const std::vector<CellResult>& results) {
    out << "circuit,loss,encoding,batch,runs,mean_acc,stderr\n";
    for (const auto& r : results) {
        out << fmt::format("{},{},{},{},{},{:.17g},{:.17g}\n", r.cell.circuit, r.cell.loss,
                           r.cell.encoding, r.cell.batch, r.cell.config.runs, r.mean_acc,
                           r.stderr_acc);
    }
}

} // namespace qtag
