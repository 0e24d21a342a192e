#include "qtag/jetprep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qtag/errors.hpp"

namespace qtag {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 vec3(const FourMomentum& p) { return {p.px, p.py, p.pz}; }

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

Vec3 normalized(const Vec3& a) {
    const double n = norm(a);
    if (n <= 0.0) throw DegeneracyError("zero-magnitude vector in Gram-Schmidt");
    return scale(a, 1.0 / n);
}

double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

} // namespace

double JetImage::sum() const {
    double s = 0.0;
    for (double p : pixels) s += p;
    return s;
}

Jet rescale_and_boost(const Jet& jet, double mass_target, double energy_target) {
    if (!(mass_target > 0.0))
        throw std::invalid_argument("rescale_and_boost: mass_target must be > 0");
    if (energy_target < mass_target)
        throw std::invalid_argument("rescale_and_boost: energy_target must be >= mass_target");

    const FourMomentum total = jet.total();
    const double m_sq = total.mass_sq();
    if (!(m_sq > 0.0) || !(total.e > 0.0))
        throw KinematicsError("jet total four-momentum is massless or spacelike");
    const double mass = std::sqrt(m_sq);

    // Uniform rescale takes the invariant mass to mass_target.
    const double scale_factor = mass_target / mass;

    // Boost rapidity along the jet direction: from the rescaled rapidity
    // to the one matching energy_target.
    const double p_mag = std::sqrt(total.p_mag_sq()) * scale_factor;
    const double eta0 = std::asinh(p_mag / mass_target);
    const double p_target = std::sqrt(energy_target * energy_target - mass_target * mass_target);
    const double eta1 = std::asinh(p_target / mass_target);
    const double delta = eta1 - eta0;
    const double ch = std::cosh(delta);
    const double sh = std::sinh(delta);

    Vec3 axis{0.0, 0.0, 1.0};
    if (total.p_mag_sq() > 0.0) axis = normalized(vec3(total));

    Jet out;
    out.label = jet.label;
    out.constituents.reserve(jet.constituents.size());
    for (const auto& c : jet.constituents) {
        FourMomentum p{c.e * scale_factor, c.px * scale_factor, c.py * scale_factor,
                       c.pz * scale_factor};
        const Vec3 pv = vec3(p);
        const double p_par = dot(pv, axis);
        const double e_new = ch * p.e + sh * p_par;
        const double p_par_new = sh * p.e + ch * p_par;
        const Vec3 pv_new{pv[0] + (p_par_new - p_par) * axis[0],
                          pv[1] + (p_par_new - p_par) * axis[1],
                          pv[2] + (p_par_new - p_par) * axis[2]};
        out.constituents.push_back({e_new, pv_new[0], pv_new[1], pv_new[2]});
    }
    return out;
}

GSBasis gram_schmidt_basis(const Jet& jet) {
    std::vector<int> order(jet.constituents.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return jet.constituents[a].p_mag_sq() > jet.constituents[b].p_mag_sq();
    });
    if (order.size() < 3)
        throw DegeneracyError("need at least 3 constituents for a Gram-Schmidt basis");

    const Vec3 p1 = vec3(jet.constituents[order[0]]);
    const Vec3 p2 = vec3(jet.constituents[order[1]]);
    const Vec3 p3 = vec3(jet.constituents[order[2]]);
    const Vec3 pj{p1[0] + p2[0] + p3[0], p1[1] + p2[1] + p3[1], p1[2] + p2[2] + p3[2]};

    if (norm(pj) <= 0.0 || norm(p1) <= 0.0 || norm(p2) <= 0.0)
        throw DegeneracyError("zero-magnitude seed vector");
    if (std::abs(det3(normalized(pj), normalized(p1), normalized(p2))) < 1e-12)
        throw DegeneracyError("Gram-Schmidt seed vectors are linearly dependent");

    GSBasis b;
    b.e1 = normalized(pj);
    const Vec3 r2 = sub(p1, scale(b.e1, dot(p1, b.e1)));
    b.e2 = normalized(r2);
    const Vec3 r3 = sub(sub(p2, scale(b.e1, dot(p2, b.e1))), scale(b.e2, dot(p2, b.e2)));
    b.e3 = normalized(r3);
    return b;
}

Projection project_constituent(const FourMomentum& p, const GSBasis& basis) {
    if (!(p.e > 0.0))
        throw std::domain_error("project_constituent: constituent energy must be > 0");
    const Vec3 pv = vec3(p);
    return {dot(pv, basis.e2) / p.e, dot(pv, basis.e3) / p.e, p.e};
}

JetImage render_image(const Jet& jet, const GSBasis& basis, int height, int width,
                      double energy_target, RenderStats* stats) {
    if (height < 1 || width < 1)
        throw std::invalid_argument("render_image: grid must be at least 1x1");
    JetImage img;
    img.height = height;
    img.width = width;
    img.label = jet.label;
    img.pixels.assign(static_cast<std::size_t>(height) * width, 0.0);

    RenderStats local;
    const auto bin = [&local](double coord, int n) {
        double c = coord;
        if (c < -1.0 || c > 1.0) {
            ++local.coordinates_clamped;
            c = std::clamp(c, -1.0, 1.0);
        }
        int i = static_cast<int>((c + 1.0) / 2.0 * n);
        if (i == n) i = n - 1; // upper edge -> last bin
        return i;
    };

    for (const auto& c : jet.constituents) {
        if (!(c.e > 0.0)) {
            ++local.constituents_dropped_nonpositive_energy;
            continue;
        }
        const Projection pr = project_constituent(c, basis);
        const int ix = bin(pr.x, width);
        const int iy = bin(pr.y, height);
        img.pixels[static_cast<std::size_t>(iy) * width + ix] +=
            pr.weight_numerator / energy_target;
    }
    if (stats) {
        stats->constituents_dropped_nonpositive_energy +=
            local.constituents_dropped_nonpositive_energy;
        stats->coordinates_clamped += local.coordinates_clamped;
    }
    return img;
}

std::optional<JetImage> preprocess_jet(const Jet& jet, const PrepOptions& opt,
                                       PrepStats& stats) {
    const double m_b = opt.mass_scale;
    const double e_b = opt.boost_gamma * opt.mass_scale;
    try {
        const Jet boosted = rescale_and_boost(jet, m_b, e_b);
        const GSBasis basis = gram_schmidt_basis(boosted);
        return render_image(boosted, basis, opt.height, opt.width, e_b, &stats.render);
    } catch (const DegeneracyError&) {
        ++stats.skipped_degenerate;
        return std::nullopt;
    } catch (const KinematicsError&) {
        ++stats.skipped_kinematics;
        return std::nullopt;
    }
}

std::vector<JetImage> preprocess_jets(const std::vector<Jet>& jets, const PrepOptions& opt,
                                      PrepStats& stats, int jobs) {
    stats.jets_in += static_cast<long>(jets.size());
    std::vector<std::optional<JetImage>> slots(jets.size());
    std::vector<PrepStats> worker_stats;

#ifdef _OPENMP
    const int n_threads = jobs > 0 ? jobs : omp_get_max_threads();
    worker_stats.assign(static_cast<std::size_t>(n_threads), PrepStats{});
#pragma omp parallel for schedule(static) num_threads(n_threads)
    for (std::size_t i = 0; i < jets.size(); ++i) {
        auto& st = worker_stats[static_cast<std::size_t>(omp_get_thread_num())];
        slots[i] = preprocess_jet(jets[i], opt, st);
    }
#else
    (void)jobs;
    worker_stats.assign(1, PrepStats{});
    for (std::size_t i = 0; i < jets.size(); ++i)
        slots[i] = preprocess_jet(jets[i], opt, worker_stats[0]);
#endif

    for (const auto& ws : worker_stats) {
        stats.skipped_degenerate += ws.skipped_degenerate;
        stats.skipped_kinematics += ws.skipped_kinematics;
        stats.render.constituents_dropped_nonpositive_energy +=
            ws.render.constituents_dropped_nonpositive_energy;
        stats.render.coordinates_clamped += ws.render.coordinates_clamped;
    }

    std::vector<JetImage> out;
    out.reserve(jets.size());
    for (auto& s : slots)
        if (s) {
            ++stats.jets_kept;
            out.push_back(std::move(*s));
        }
    return out;
}

} // namespace qtag
