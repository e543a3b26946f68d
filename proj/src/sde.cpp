#include "slegf/sde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "slegf/greens.hpp"
#include "slegf/rng.hpp"

namespace slegf {

void ForceConfig::validate() const {
    for (const auto& p : points) {
        const int s = side_sign(p.side);
        if (side_touch(p.side)) continue;
        if (s * (p.v - w) <= 0.0)
            throw std::invalid_argument("ForceConfig: side tag inconsistent with ordering");
    }
    // starting mass on each degenerate side must stay above the threshold
    for (int s : {-1, 1}) {
        double sum = 0.0;
        for (const auto& p : points)
            if (side_touch(p.side) && side_sign(p.side) == s) sum += p.rho;
        if (sum <= -2.0 && sum != 0.0)
            throw std::invalid_argument("ForceConfig: touching force values sum to <= -2");
    }
}

void SdeStepper::drift_coefficients(std::vector<double>& c) const {
    c.assign(pts.size(), 0.0);
    switch (model) {
    case DriftModel::sle_kr:
        for (std::size_t j = 0; j < pts.size(); ++j) c[j] = pts[j].rho;
        return;
    case DriftModel::hsle_to_inf: {
        const double g1 = w - pts[0].v, g2 = w - pts[1].v;
        double r = g2 != 0.0 ? g1 / g2 : 0.0;
        r = std::min(1.0 - 1e-12, std::max(0.0, r));
        const double G = (*gfac)(r);
        c[0] = G;
        c[1] = -G;
        return;
    }
    case DriftModel::hsle_chordal: {
        c[0] = kappa.value - 6.0;
        const double gi = w - pts[0].v; // w0 - w_inf
        const double g1 = w - pts[1].v;
        double r;
        if (pts[2].at_infinity) {
            r = (pts[1].v - w) / (pts[1].v - pts[0].v);
        } else {
            const double g2 = w - pts[2].v;
            r = (g1 * (pts[2].v - pts[0].v)) / (g2 * (pts[1].v - pts[0].v));
        }
        (void)gi;
        r = std::min(1.0 - 1e-12, std::max(0.0, r));
        const double G = (*gfac)(r);
        c[1] = G;
        if (!pts[2].at_infinity) c[2] = -G;
        return;
    }
    }
}

SdeStepper::Outcome SdeStepper::step(double dt, double xi, double* w_frozen_out) {
    Outcome oc;
    const double w_old = w;
    if (w_frozen_out) *w_frozen_out = w_old;
    const double eps = eps_stick();

    thread_local std::vector<double> c;
    drift_coefficients(c);

    // nearest finite interaction
    int jstar = -1;
    double gmin = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (pts[j].at_infinity) continue;
        const double g = std::abs(w_old - pts[j].v);
        if (jstar < 0 || g < gmin) {
            jstar = static_cast<int>(j);
            gmin = g;
        }
    }

    double drift_other = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (pts[j].at_infinity || static_cast<int>(j) == jstar) continue;
        drift_other += c[j] / (w_old - pts[j].v);
    }

    const double k = kappa.value;
    const double delta_sing = 10.0 * std::sqrt(k * dt);
    const bool bessel = jstar >= 0 && gmin < delta_sing;
    double drift_near = 0.0;
    if (jstar >= 0 && !bessel) drift_near = c[jstar] / (w_old - pts[jstar].v);

    // exact slit update of every finite point, frozen driving w_old
    for (auto& p : pts) {
        if (p.at_infinity) continue;
        const double g = p.v - w_old;
        p.v = w_old + p.side * std::sqrt(g * g + 4.0 * dt);
    }
    cap_time += dt;

    if (bessel) {
        TrackedPoint& ps = pts[static_cast<std::size_t>(jstar)];
        // gap = w - v_j* is a kappa-scaled Bessel process of dimension
        // d = 1 + 2(c+2)/kappa; advance Z = gap^2/kappa by its exact
        // one-step mean and variance with the step's normal draw.
        const double d = 1.0 + 2.0 * (c[static_cast<std::size_t>(jstar)] + 2.0) / k;
        const double Z = gmin * gmin / k;
        double Zn = Z + d * dt + std::sqrt(4.0 * Z * dt + 2.0 * d * dt * dt) * xi;
        bool hit = false;
        if (Zn <= 0.0) {
            if (d >= 2.0) {
                Zn = -Zn; // never reaches 0; reflect the Gaussian surrogate
            } else {
                hit = true;
                Zn = eps * eps / k;
            }
        }
        if (hit) {
            ps.collided = true;
            if (ps.fatal) {
                oc.stopped = true;
                oc.reason = StopReason::swallowed;
                oc.swallowed_index = jstar;
            }
        }
        // w sits on the opposite side of the point's own side tag
        const int wside = -ps.side;
        w = ps.v + wside * std::sqrt(k * std::max(Zn, eps * eps / k)) + drift_other * dt;
    } else {
        w = w_old + std::sqrt(k * dt) * xi + (drift_near + drift_other) * dt;
    }

    // collision clamp: keep every point weakly on its side of the driving
    for (std::size_t j = 0; j < pts.size(); ++j) {
        auto& p = pts[j];
        if (p.at_infinity) continue;
        if (p.side * (p.v - w) <= 0.0) {
            p.v = w + p.side * eps;
            if (!p.collided) p.collided = true;
            if (p.fatal && !oc.stopped) {
                oc.stopped = true;
                oc.reason = StopReason::swallowed;
                oc.swallowed_index = static_cast<int>(j);
            }
        }
    }

    if (!oc.stopped && check_threshold) {
        for (int s : {-1, 1}) {
            double sum = 0.0;
            bool any = false;
            for (const auto& p : pts)
                if (p.collided && p.side == s) {
                    sum += p.rho;
                    any = true;
                }
            if (any && sum <= -2.0) {
                oc.stopped = true;
                oc.reason = StopReason::continuation_threshold;
            }
        }
    }
    return oc;
}

namespace {

double config_scale(double lo, double hi) { return std::max(hi - lo, 1e-12); }

SamplerOutput run_fixed_dt(SdeStepper& st, double horizon, double dt, std::uint64_t seed,
                           std::uint64_t stream) {
    if (!(dt > 0.0) || !(horizon >= dt))
        throw std::invalid_argument("sampler: require 0 < dt <= horizon");
    SamplerOutput out;
    const std::size_t n = static_cast<std::size_t>(std::llround(horizon / dt));
    out.driving.times.reserve(n + 1);
    out.driving.values.reserve(n + 1);
    out.force_paths.assign(st.pts.size(), {});
    auto record = [&](double t) {
        out.driving.times.push_back(t);
        out.driving.values.push_back(st.w);
        for (std::size_t j = 0; j < st.pts.size(); ++j)
            out.force_paths[j].push_back(st.pts[j].at_infinity
                                             ? std::numeric_limits<double>::infinity()
                                             : st.pts[j].v);
    };
    record(0.0);
    CounterRng rng(seed, stream);
    for (std::size_t k = 0; k < n; ++k) {
        const auto oc = st.step(dt, rng.normal());
        record((k + 1) * dt);
        if (oc.stopped) {
            out.stop_reason = oc.reason;
            out.swallowed_index = oc.swallowed_index;
            return out;
        }
    }
    out.stop_reason = StopReason::horizon;
    return out;
}

} // namespace

SamplerOutput sample_sle_kr(const ForceConfig& cfg, double horizon, double dt,
                            std::uint64_t rng_seed) {
    cfg.validate();
    SdeStepper st{cfg.kappa, DriftModel::sle_kr, cfg.w, {}, 1.0, 0.0, nullptr, true};
    double lo = cfg.w, hi = cfg.w;
    for (const auto& p : cfg.points) {
        lo = std::min(lo, side_touch(p.side) ? cfg.w : p.v);
        hi = std::max(hi, side_touch(p.side) ? cfg.w : p.v);
    }
    st.scale = config_scale(lo, hi);
    for (const auto& p : cfg.points) {
        TrackedPoint tp;
        tp.side = side_sign(p.side);
        tp.rho = p.rho;
        tp.v = side_touch(p.side) ? cfg.w + tp.side * st.eps_stick() : p.v;
        tp.collided = side_touch(p.side);
        st.pts.push_back(tp);
    }
    return run_fixed_dt(st, horizon, dt, rng_seed, 0);
}

SamplerOutput sample_hsle(Kappa kappa, double v1, Side v1_side, double v2, double horizon,
                          double dt, std::uint64_t rng_seed) {
    const int s1 = side_sign(v1_side);
    const bool touch = side_touch(v1_side);
    if (!touch) {
        if (s1 * v1 <= 0.0) throw std::invalid_argument("sample_hsle: v1 side tag wrong");
        if (!(std::abs(v1) <= std::abs(v2)))
            throw std::invalid_argument("sample_hsle: need |v1| <= |v2|");
    }
    if (s1 * v2 <= 0.0)
        throw std::invalid_argument("sample_hsle: v1, v2 must lie on the same side of 0");

    thread_local std::unique_ptr<DriftFactorCache> cache;
    if (!cache || cache->kappa() != kappa.value)
        cache = std::make_unique<DriftFactorCache>(kappa);

    SdeStepper st{kappa, DriftModel::hsle_to_inf, 0.0, {}, 1.0, 0.0, cache.get(), false};
    st.scale = config_scale(std::min(0.0, std::min(v1, v2)), std::max(0.0, std::max(v1, v2)));
    TrackedPoint p1;
    p1.side = s1;
    p1.v = touch ? s1 * st.eps_stick() : v1;
    p1.collided = touch;
    TrackedPoint p2;
    p2.side = s1;
    p2.v = v2;
    p2.fatal = true; // the drift factor degenerates once v2 is swallowed
    st.pts = {p1, p2};
    return run_fixed_dt(st, horizon, dt, rng_seed, 0);
}

void HsleChordalConfig::validate() const {
    if (w0 == w_inf) throw std::invalid_argument("HsleChordalConfig: w0 == w_inf");
    const double r = cross_ratio();
    if (!(r >= 0.0 && r < 1.0))
        throw std::invalid_argument("HsleChordalConfig: cross ratio must lie in [0, 1)");
}

double HsleChordalConfig::cross_ratio() const {
    const double v1eff = v1_touch ? w0 : v1;
    if (v2_at_infinity) {
        if (v1_touch) return 0.0;
        return (v1eff - w0) / (v1eff - w_inf);
    }
    if (v1_touch) return 0.0;
    return (w0 - v1eff) * (w_inf - v2) / ((w0 - v2) * (w_inf - v1eff));
}

SdeStepper make_chordal_stepper(const HsleChordalConfig& cfg, const DriftFactorCache& gfac) {
    cfg.validate();
    SdeStepper st{cfg.kappa, DriftModel::hsle_chordal, cfg.w0, {}, 1.0, 0.0, &gfac, false};
    double lo = std::min(cfg.w0, cfg.w_inf), hi = std::max(cfg.w0, cfg.w_inf);
    if (!cfg.v1_touch) {
        lo = std::min(lo, cfg.v1);
        hi = std::max(hi, cfg.v1);
    }
    if (!cfg.v2_at_infinity) {
        lo = std::min(lo, cfg.v2);
        hi = std::max(hi, cfg.v2);
    }
    st.scale = config_scale(lo, hi);

    TrackedPoint winf;
    winf.v = cfg.w_inf;
    winf.side = cfg.w_inf > cfg.w0 ? 1 : -1;
    winf.fatal = true;
    TrackedPoint p1;
    if (cfg.v1_touch) {
        // v1 degenerate at w0, on the side away from w_inf
        p1.side = -winf.side;
        p1.v = cfg.w0 + p1.side * st.eps_stick();
        p1.collided = true;
    } else {
        p1.side = cfg.v1 > cfg.w0 ? 1 : -1;
        p1.v = cfg.v1;
    }
    TrackedPoint p2;
    if (cfg.v2_at_infinity) {
        p2.at_infinity = true;
        p2.side = p1.side;
    } else {
        p2.side = cfg.v2 > cfg.w0 ? 1 : -1;
        p2.v = cfg.v2;
        p2.fatal = true;
    }
    st.pts = {winf, p1, p2};
    return st;
}

SamplerOutput sample_hsle_chordal(const HsleChordalConfig& cfg, double dt,
                                  std::uint64_t rng_seed) {
    thread_local std::unique_ptr<DriftFactorCache> cache;
    if (!cache || cache->kappa() != cfg.kappa.value)
        cache = std::make_unique<DriftFactorCache>(cfg.kappa);
    SdeStepper st = make_chordal_stepper(cfg, *cache);
    double cap = cfg.max_capacity;
    if (cap <= 0.0) cap = 10.0 * st.scale * st.scale;
    return run_fixed_dt(st, cap, dt, rng_seed, 0);
}

std::vector<double> martingale_m1_path(const SamplerOutput& out, Kappa kappa) {
    if (out.force_paths.size() != 3)
        throw std::invalid_argument("martingale_m1_path: expected a chordal-coordinate output");
    std::vector<double> m;
    m.reserve(out.driving.values.size());
    for (std::size_t k = 0; k < out.driving.values.size(); ++k) {
        const double w0 = out.driving.values[k];
        const double wi = out.force_paths[0][k];
        const double v1 = out.force_paths[1][k];
        const double v2 = out.force_paths[2][k];
        // curve pairs (w0 -> wi) and (v1 -> v2); sort into v- < w- < w+ < v+
        double wp, wm, vp, vm;
        if (wi > w0) {
            wp = w0;
            vp = wi;
            wm = v1;
            vm = v2;
        } else {
            wm = w0;
            vm = wi;
            wp = v1;
            vp = v2;
        }
        m.push_back(g1(BoundaryData(CaseId::j1, wp, wm, vp, vm), kappa));
    }
    return m;
}

} // namespace slegf
