// diffusion.hpp
// Direct Euler-Maruyama simulator for the autonomous two-dimensional
// diffusion (R+, R-) and its (X, Y) coordinates, used to cross-validate the
// spectral transition densities.
#pragma once

#include <cstdint>
#include <vector>

#include "slegf/greens.hpp"
#include "slegf/rng.hpp"
#include "slegf/spectral.hpp"

namespace slegf {

struct DiffusionState {
    double r_plus, r_minus;
    DiffusionState(double rp, double rm) : r_plus(rp), r_minus(rm) {
        if (!(rp >= 0.0 && rp <= 1.0 && rm >= 0.0 && rm <= 1.0))
            throw std::invalid_argument("DiffusionState: state must lie in [0,1]^2");
    }
};

// One Euler step of the R-system; noise is a pair of standard normals.
// Reflects back into [0,1] componentwise.
DiffusionState step_R(const DiffusionState& s, Kappa kappa, const RhoTriple& rhos, double dt,
                      double noise_plus, double noise_minus);

// One Euler step of the (X, Y) system with correlated noises built from the
// covariance Cholesky factor; clamps back into {|X| <= Y <= 1}.  Throws if
// the covariance loses positive semidefiniteness beyond tolerance.
XY step_XY(const XY& s, Kappa kappa, const RhoTriple& rhos, double dt, double noise1,
           double noise2);

struct EnsembleResult {
    std::vector<DiffusionState> states; // terminal states, one per path
    std::uint64_t origin_redraws = 0;   // (0,0)-guard re-draw count
    std::uint64_t reflections = 0;      // boundary reflections applied
};

EnsembleResult simulate_paths(const DiffusionState& start, Kappa kappa, const RhoTriple& rhos,
                              double t_end, double dt, int n_paths, std::uint64_t rng_seed,
                              int n_threads = 0);

} // namespace slegf
