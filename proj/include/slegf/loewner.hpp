// loewner.hpp
// Discretized chordal Loewner chains built from vertical-slit elementary
// maps: forward/inverse evaluation, capacity tracking, curve tracing, and
// force-point advancement with the sticking rule.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace slegf {

using cplx = std::complex<double>;

// Thrown by map_forward when a point enters a step's slit-disc of influence.
struct SwallowedError : std::runtime_error {
    std::size_t step;
    explicit SwallowedError(std::size_t k)
        : std::runtime_error("map_forward: point swallowed at step " + std::to_string(k)),
          step(k) {}
};

struct DrivingPath {
    std::vector<double> times;  // strictly increasing, starts at 0
    std::vector<double> values; // driving samples
    std::vector<double> speed;  // per-interval capacity multiplier (size times-1), default 1

    void validate() const;
    double total_capacity_time() const; // sum speed_k * dt_k
};

struct SlitStep {
    double dt; // capacity duration (> 0)
    double w;  // frozen driving value
};

class LoewnerChain {
  public:
    LoewnerChain() = default;
    explicit LoewnerChain(std::vector<SlitStep> steps, double scale = 1.0);

    const std::vector<SlitStep>& steps() const { return steps_; }
    std::size_t size() const { return steps_.size(); }
    double hcap_total() const { return 2.0 * cap_time_; }
    double capacity_time() const { return cap_time_; }
    double scale() const { return scale_; }
    void set_scale(double s) { scale_ = s; }

    void push_step(double dt, double w);
    LoewnerChain concat(const LoewnerChain& other) const;

    // g(z) through the first n_steps slit maps (all by default).
    cplx map_forward(cplx z) const;
    cplx map_forward(cplx z, std::size_t n_steps) const;

    // f(w) = inverse map; defined on the closed half-plane.
    cplx map_inverse(cplx w) const;
    cplx map_inverse(cplx w, std::size_t n_steps) const;

  private:
    std::vector<SlitStep> steps_;
    double cap_time_ = 0.0;
    double scale_ = 1.0; // sets the swallowing threshold 1e-6 * scale
};

// Chain whose per-substep map solves the Loewner equation exactly with the
// driving frozen at the substep's left endpoint (linear interpolation of the
// samples between grid times).  Also records the step index at each grid
// time so traces line up with the path.
struct ChainFromPath {
    LoewnerChain chain;
    std::vector<std::size_t> steps_at_grid; // per grid time
};

ChainFromPath chain_from_driving(const DrivingPath& path, double substep);

// eta(t_k) = f_{t_k}(w(t_k)) at every grid time; eta(0) = w(0).
std::vector<cplx> trace_curve(const ChainFromPath& cp, const DrivingPath& path);

// Reference map of the closed half-disk hull: z + r^2/(z - x0); hcap = r^2.
cplx halfdisk_map(double x0, double r, cplx z);

// Exact elementary updates (shared with the SDE samplers).
// Forward slit map of a real point on side sign(x - w); exact ODE solution.
double slit_forward_real(double x, double w, double dt);
cplx slit_forward(cplx z, double w, double dt);
cplx slit_inverse(cplx z, double w, double dt);

// Integrates v' = 2 q / (v - w) across the steps of a driving-path segment
// with the sticking rule: when the driving crosses the point, it is clamped
// to w +/- eps_stick on its original side and keeps tracking.
double advance_force_point(double vhat, const DrivingPath& path, double eps_stick);

// Chain (de)serialization: single CSV file, first line a JSON header
// comment `# {...}`, then `dt,w` rows.
struct ChainHeader {
    double kappa = 0.0;
    std::uint64_t seed = 0;
    double substep = 0.0;
};
void save_chain_csv(const std::string& file, const LoewnerChain& chain, const ChainHeader& h);
LoewnerChain load_chain_csv(const std::string& file, ChainHeader* h = nullptr);

} // namespace slegf
