// sde.hpp
// Samplers for the driving-function SDEs: chordal SLE_kappa(rho) with
// multiple boundary force points, hSLE toward infinity, and hSLE in the
// chordal coordinate (finite target).  Force points advance by the exact
// per-step slit update and stick after collisions; nearly-singular drift
// interactions are advanced by a squared-Bessel moment-matched substep.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "slegf/loewner.hpp"
#include "slegf/special.hpp"

namespace slegf {

enum class Side { left, right, touch_left, touch_right };

inline int side_sign(Side s) { return (s == Side::right || s == Side::touch_right) ? 1 : -1; }
inline bool side_touch(Side s) { return s == Side::touch_left || s == Side::touch_right; }

struct ForcePoint {
    double v;
    Side side;
    double rho;
};

struct ForceConfig {
    Kappa kappa;
    double w = 0.0;
    std::vector<ForcePoint> points;
    void validate() const;
};

enum class StopReason { horizon, swallowed, continuation_threshold };

struct SamplerOutput {
    DrivingPath driving;
    std::vector<std::vector<double>> force_paths; // one path per tracked point
    StopReason stop_reason = StopReason::horizon;
    int swallowed_index = -1;
};

// --- low-level stepper shared by the samplers and the Monte Carlo loops ---

enum class DriftModel { sle_kr, hsle_to_inf, hsle_chordal };

struct TrackedPoint {
    double v = 0.0;
    int side = 1;              // +1 right of the driving point, -1 left
    double rho = 0.0;          // drift coefficient (sle_kr variant)
    bool at_infinity = false;
    bool fatal = false;        // collision terminates the sampler
    bool collided = false;
};

struct SdeStepper {
    Kappa kappa;
    DriftModel model;
    double w;
    std::vector<TrackedPoint> pts; // hsle_to_inf: [v1, v2];
                                   // hsle_chordal: [w_inf, v1, v2]
    double scale = 1.0;            // sets eps_stick = 1e-9 * scale
    double cap_time = 0.0;
    const DriftFactorCache* gfac = nullptr; // required by the hsle variants
    bool check_threshold = false;           // continuation thresholds (sle_kr)

    struct Outcome {
        bool stopped = false;
        StopReason reason = StopReason::horizon;
        int swallowed_index = -1;
    };

    // Advances one Euler step of capacity duration dt using the normal draw
    // xi; w_frozen_out receives the driving value the slit step was frozen
    // at (the step's left endpoint).
    Outcome step(double dt, double xi, double* w_frozen_out = nullptr);

    double eps_stick() const { return 1e-9 * scale; }
    // current drift coefficients c_j of the 1/(w - v_j) terms
    void drift_coefficients(std::vector<double>& c) const;
};

SamplerOutput sample_sle_kr(const ForceConfig& cfg, double horizon, double dt,
                            std::uint64_t rng_seed);

// hSLE from 0 toward infinity; v1 may start degenerate at 0^+ / 0^-.
SamplerOutput sample_hsle(Kappa kappa, double v1, Side v1_side, double v2, double horizon,
                          double dt, std::uint64_t rng_seed);

struct HsleChordalConfig {
    Kappa kappa;
    double w0 = 0.0;
    double w_inf = 0.0;
    double v1 = 0.0;
    bool v1_touch = false; // v1 degenerate at w0 (on the w0->v1 side)
    double v2 = 0.0;
    bool v2_at_infinity = false;
    double max_capacity = 0.0; // 0: default 10 * (config span)^2 safety cap

    void validate() const;
    double cross_ratio() const; // in [0, 1)
};

// Runs until w_inf or v2 is swallowed (stop_reason swallowed), or until the
// capacity safety cap (stop_reason horizon).
SamplerOutput sample_hsle_chordal(const HsleChordalConfig& cfg, double dt,
                                  std::uint64_t rng_seed);

// G1 evaluated along a sample_hsle_chordal output (diagnostic martingale).
std::vector<double> martingale_m1_path(const SamplerOutput& out, Kappa kappa);

SdeStepper make_chordal_stepper(const HsleChordalConfig& cfg, const DriftFactorCache& gfac);

} // namespace slegf
