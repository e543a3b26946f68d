#include "slegf/diffusion.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace slegf {

namespace {

double reflect01(double x, bool* reflected) {
    while (x < 0.0 || x > 1.0) {
        *reflected = true;
        if (x < 0.0) x = -x;
        if (x > 1.0) x = 2.0 - x;
    }
    return x;
}

struct StepCounters {
    std::uint64_t redraws = 0;
    std::uint64_t reflections = 0;
};

DiffusionState step_R_counted(const DiffusionState& s, double kappa, const RhoTriple& rhos,
                              double dt, double np, double nm, StepCounters* ctr) {
    const double sum = s.r_plus + s.r_minus;
    if (!(sum > 0.0)) throw std::invalid_argument("step_R: state (0,0) is excluded");
    const double S = rhos.rho_plus + rhos.rho_minus + rhos.rho0 + 6.0;
    const double sq = std::sqrt(dt);
    auto advance = [&](double r, double sigma, double rho_s, double rho_o, double xi) {
        const double diff = std::sqrt(std::max(0.0, kappa * r * (1.0 - r * r) / sum));
        const double drift = ((2.0 + rhos.rho0) - (rho_s - rho_o) * r - S * r * r) / sum;
        return r + sigma * diff * sq * xi + drift * dt;
    };
    double rp = advance(s.r_plus, +1.0, rhos.rho_plus, rhos.rho_minus, np);
    double rm = advance(s.r_minus, -1.0, rhos.rho_minus, rhos.rho_plus, nm);
    bool refl = false;
    rp = reflect01(rp, &refl);
    rm = reflect01(rm, &refl);
    if (refl && ctr) ++ctr->reflections;
    return DiffusionState(rp, rm);
}

} // namespace

DiffusionState step_R(const DiffusionState& s, Kappa kappa, const RhoTriple& rhos, double dt,
                      double noise_plus, double noise_minus) {
    return step_R_counted(s, kappa.value, rhos, dt, noise_plus, noise_minus, nullptr);
}

XY step_XY(const XY& s, Kappa kappa, const RhoTriple& rhos, double dt, double noise1,
           double noise2) {
    const double k = kappa.value;
    const double X = s.x, Y = s.y;
    if (!(std::abs(X) <= Y + 1e-12 && Y <= 1.0 + 1e-12))
        throw std::invalid_argument("step_XY: state outside {|X| <= Y <= 1}");
    const double cxx = k * (Y - X * X);
    const double cxy = k * (X - X * Y);
    const double cyy = k * (Y - Y * Y);
    if (cxx < -1e-10 || cyy < -1e-10 || (Y - X * X) * (Y - Y * Y) - X * X * (1 - Y) * (1 - Y) <
                                            -1e-10 / (k * k))
        throw std::runtime_error("step_XY: covariance not positive semidefinite");
    // Cholesky of [[cxx, cxy], [cxy, cyy]]
    const double l11 = std::sqrt(std::max(0.0, cxx));
    const double l21 = l11 > 0.0 ? cxy / l11 : 0.0;
    const double l22 = std::sqrt(std::max(0.0, cyy - l21 * l21));
    const double S = rhos.rho_plus + rhos.rho_minus + rhos.rho0 + 6.0;
    const double sq = std::sqrt(dt);
    double xn = X + sq * l11 * noise1 - (S * X + (rhos.rho_plus - rhos.rho_minus)) * dt;
    double yn = Y + sq * (l21 * noise1 + l22 * noise2) -
                (S * Y - (rhos.rho_plus + rhos.rho_minus + 4.0)) * dt;
    // clamp back into |X| <= Y <= 1
    yn = std::min(1.0, std::max(0.0, yn));
    xn = std::min(yn, std::max(-yn, xn));
    return {xn, yn};
}

EnsembleResult simulate_paths(const DiffusionState& start, Kappa kappa, const RhoTriple& rhos,
                              double t_end, double dt, int n_paths, std::uint64_t rng_seed,
                              int n_threads) {
    validate_rho_constraints(kappa, rhos);
    if (!(dt > 0.0) || t_end < 0.0 || n_paths < 1)
        throw std::invalid_argument("simulate_paths: bad parameters");
    EnsembleResult out;
    out.states.assign(static_cast<std::size_t>(n_paths), start);
    if (t_end == 0.0) return out;
    const long n_steps = static_cast<long>(std::ceil(t_end / dt - 1e-12));
    std::vector<StepCounters> counters(static_cast<std::size_t>(n_paths));

    auto run_path = [&](int p) {
        CounterRng rng(rng_seed, static_cast<std::uint64_t>(p));
        DiffusionState st = start;
        StepCounters& ctr = counters[static_cast<std::size_t>(p)];
        for (long k = 0; k < n_steps; ++k) {
            const double h = std::min(dt, t_end - k * dt);
            for (;;) {
                DiffusionState next =
                    step_R_counted(st, kappa.value, rhos, h, rng.normal(), rng.normal(), &ctr);
                // The continuous process avoids (0,0); a step landing there is
                // a discretization artifact, so re-draw the noise.
                if (next.r_plus + next.r_minus > 1e-9) {
                    st = next;
                    break;
                }
                ++ctr.redraws;
            }
        }
        out.states[static_cast<std::size_t>(p)] = st;
    };

    int hw = n_threads > 0 ? n_threads : static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    hw = std::min(hw, n_paths);
    if (hw == 1) {
        for (int p = 0; p < n_paths; ++p) run_path(p);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(hw));
        for (int t = 0; t < hw; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    const int p = next.fetch_add(1);
                    if (p >= n_paths) return;
                    run_path(p);
                }
            });
        for (auto& th : pool) th.join();
    }
    for (const auto& c : counters) {
        out.origin_redraws += c.redraws;
        out.reflections += c.reflections;
    }
    return out;
}

} // namespace slegf
