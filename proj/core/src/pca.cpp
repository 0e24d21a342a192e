#include "qtag/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qtag {

PcaModel pca_fit(const Eigen::MatrixXd& samples, int n_components) {
    const long n = samples.rows();
    const long d = samples.cols();
    if (n_components < 1) throw std::invalid_argument("pca_fit: n_components must be >= 1");
    if (n_components > d)
        throw std::invalid_argument("pca_fit: n_components exceeds the sample dimension");
    if (n <= n_components)
        throw std::invalid_argument("pca_fit: need more samples than components");

    PcaModel model;
    model.mean = samples.colwise().mean();
    Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();

    model.components.resize(n_components, d);
    model.explained_variance.resize(n_components);
    for (int k = 0; k < n_components; ++k) {
        Eigen::VectorXd comp = svd.matrixV().col(k);
        // deterministic sign: entry of largest magnitude made positive
        long arg = 0;
        comp.cwiseAbs().maxCoeff(&arg);
        if (comp(arg) < 0.0) comp = -comp;
        model.components.row(k) = comp.transpose();
        model.explained_variance(k) = sv(k) * sv(k) / static_cast<double>(n - 1);
    }
    return model;
}

Eigen::VectorXd pca_transform(const PcaModel& model, const Eigen::VectorXd& sample) {
    if (sample.size() != model.mean.size())
        throw std::invalid_argument("pca_transform: sample dimension mismatch");
    return model.components * (sample - model.mean);
}

Eigen::VectorXd pca_inverse_transform(const PcaModel& model, const Eigen::VectorXd& coords) {
    if (coords.size() != model.components.rows())
        throw std::invalid_argument("pca_inverse_transform: coordinate count mismatch");
    return model.mean + model.components.transpose() * coords;
}

void fit_feature_range(PcaModel& model, const Eigen::MatrixXd& train_coords) {
    if (train_coords.cols() != model.components.rows())
        throw std::invalid_argument("fit_feature_range: coordinate count mismatch");
    model.feature_min = train_coords.colwise().minCoeff();
    model.feature_max = train_coords.colwise().maxCoeff();
}

std::vector<double> normalize_features(const PcaModel& model, const Eigen::VectorXd& coords,
                                       long* clamped) {
    if (model.feature_min.size() != model.components.rows())
        throw std::invalid_argument("normalize_features: feature range not fitted");
    std::vector<double> out(static_cast<std::size_t>(coords.size()));
    for (long k = 0; k < coords.size(); ++k) {
        const double lo = model.feature_min(k);
        const double hi = model.feature_max(k);
        double v = (hi > lo) ? (coords(k) - lo) / (hi - lo) * std::numbers::pi : 0.0;
        if (v < 0.0 || v > std::numbers::pi) {
            if (clamped) ++*clamped;
            v = std::clamp(v, 0.0, std::numbers::pi);
        }
        out[static_cast<std::size_t>(k)] = v;
    }
    return out;
}

std::string pca_to_json(const PcaModel& model) {
    nlohmann::json j;
    j["standardized"] = false; // centering only
    j["mean"] = std::vector<double>(model.mean.data(), model.mean.data() + model.mean.size());
    std::vector<std::vector<double>> comps;
    for (long r = 0; r < model.components.rows(); ++r) {
        comps.emplace_back(model.components.row(r).data(),
                           model.components.row(r).data() + model.components.cols());
    }
    j["components"] = comps;
    j["explained_variance"] =
        std::vector<double>(model.explained_variance.data(),
                            model.explained_variance.data() + model.explained_variance.size());
    j["feature_min"] = std::vector<double>(model.feature_min.data(),
                                           model.feature_min.data() + model.feature_min.size());
    j["feature_max"] = std::vector<double>(model.feature_max.data(),
                                           model.feature_max.data() + model.feature_max.size());
    return j.dump(2) + "\n";
}

PcaModel pca_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    PcaModel m;
    const auto mean = j.at("mean").get<std::vector<double>>();
    m.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<long>(mean.size()));
    const auto comps = j.at("components").get<std::vector<std::vector<double>>>();
    if (comps.empty()) throw std::invalid_argument("pca_from_json: no components");
    m.components.resize(static_cast<long>(comps.size()), static_cast<long>(comps[0].size()));
    for (std::size_t r = 0; r < comps.size(); ++r) {
        if (comps[r].size() != comps[0].size())
            throw std::invalid_argument("pca_from_json: ragged components");
        m.components.row(static_cast<long>(r)) = Eigen::Map<const Eigen::VectorXd>(
            comps[r].data(), static_cast<long>(comps[r].size()));
    }
    const auto ev = j.at("explained_variance").get<std::vector<double>>();
    m.explained_variance =
        Eigen::Map<const Eigen::VectorXd>(ev.data(), static_cast<long>(ev.size()));
    const auto lo = j.at("feature_min").get<std::vector<double>>();
    m.feature_min = Eigen::Map<const Eigen::VectorXd>(lo.data(), static_cast<long>(lo.size()));
    const auto hi = j.at("feature_max").get<std::vector<double>>();
    m.feature_max = Eigen::Map<const Eigen::VectorXd>(hi.data(), static_cast<long>(hi.size()));
    return m;
}

} // namespace qtag
