// spectral.hpp
// Spectral machinery for the autonomous (R+, R-) diffusion: the orthogonal
// eigenbasis v_{n,m} against the weight Psi on the triangle
// Delta = {0 < |x| < y < 1}, transition and invariant densities in (x, y)
// and (R+, R-) coordinates, the generator, and the tilted (killed) kernels
// with their quasi-invariant densities and survival probabilities.
#pragma once

#include <vector>

#include "slegf/greens.hpp"
#include "slegf/special.hpp"

namespace slegf {

struct TriangleDomain {
    static bool contains(double x, double y) {
        const double ax = x < 0 ? -x : x;
        return ax > 0.0 && ax < y && y < 1.0;
    }
    // closure membership
    static bool contains_closed(double x, double y) {
        const double ax = x < 0 ? -x : x;
        return ax <= y && y <= 1.0;
    }
};

void validate_rho_constraints(Kappa kappa, const RhoTriple& rhos);

// Dense bivariate polynomial with coefficient c[i][j] of x^i y^j.
struct Poly2 {
    int deg = 0;
    std::vector<double> c; // (deg+1)^2 entries, row i = x-power
    Poly2() : c(1, 0.0) {}
    explicit Poly2(int d) : deg(d), c(static_cast<size_t>(d + 1) * (d + 1), 0.0) {}
    double& at(int i, int j) { return c[static_cast<size_t>(i) * (deg + 1) + j]; }
    double at(int i, int j) const { return c[static_cast<size_t>(i) * (deg + 1) + j]; }
    double eval(double x, double y) const;
    double eval_dx(double x, double y) const;
    double eval_dy(double x, double y) const;
    double eval_dxx(double x, double y) const;
    double eval_dxy(double x, double y) const;
    double eval_dyy(double x, double y) const;
};

class SpectralModel {
  public:
    // Chooses the truncation order N so that the spectral tail at t_min is
    // below tolerance (sup-norm bound over the closed triangle).  Throws if
    // the cap N = 60 cannot reach the tolerance, reporting the smallest
    // usable t_min.
    SpectralModel(Kappa kappa, RhoTriple rhos, double tolerance = 1e-8, double t_min = 0.05);

    double kappa() const { return kappa_; }
    const RhoTriple& rhos() const { return rhos_; }
    double alpha0() const { return alpha0_; }
    double alpha_plus() const { return alpha_plus_; }
    double alpha_minus() const { return alpha_minus_; }
    double beta() const { return beta_; }
    int truncation() const { return N_; }
    double t_min() const { return t_min_; }
    double tolerance() const { return tol_; }

    double lambda(int k) const { return -static_cast<double>(k) * (k + alpha0_ + beta_ + 1.0); }
    double lambda_r(int k) const { return -static_cast<double>(k) * (k + beta_); }

    double weight_psi(double x, double y) const;
    double eval_vnm(int n, int m, double x, double y) const;
    double vnm_norm_sq(int n, int m) const;

    // All basis values with n+m <= N at one point, triangular layout
    // (n outer, m inner); index via tri_index(n, m).
    std::vector<double> basis_at(double x, double y) const;
    std::size_t tri_index(int n, int m) const;

    // sum_{n+m<=N} v(x,y) v(x*,y*) / ||v||^2 * exp((kappa/2) lambda_{n+m} t)
    double series_sum(double t, const std::vector<double>& basis_xy, double xs, double ys) const;

    double transition_density_xy(double t, double x, double y, double xs, double ys) const;
    double invariant_density_xy(double xs, double ys) const;
    double transition_density_R(double t, double rp, double rm, double rps, double rms) const;
    double invariant_density_R(double rps, double rms) const;

    // Exact application of the generator to a polynomial at a point.
    double apply_generator(const Poly2& p, double x, double y) const;

    // v_{n,m} as an explicit coefficient polynomial (test/diagnostic sizes).
    Poly2 vnm_poly(int n, int m) const;

    // Quadrature of f(x,y) against Psi over Delta, exact for polynomial f of
    // degree <= 2N+4 (tensor Gauss-Jacobi in the (r, h) coordinates).
    double integrate_psi(const std::function<double(double, double)>& f) const;

  private:
    void check_point_R(double rp, double rm) const;
    double kappa_;
    RhoTriple rhos_;
    double alpha0_, alpha_plus_, alpha_minus_, beta_;
    double tol_, t_min_;
    int N_ = 0;
    std::vector<double> norm_table_;
};

SpectralModel build_model(Kappa kappa, RhoTriple rhos, double tolerance = 1e-8,
                          double t_min = 0.05);

// Coordinate maps between (R+, R-) and (X, Y) = (R+ - R-, 1 - R+ R-).
struct XY {
    double x, y;
};
XY xy_from_r(double rp, double rm);
// Inverse; throws if the root pair leaves [0,1]^2 by more than 1e-10.
void r_from_xy(double x, double y, double* rp, double* rm);

// Killed/tilted kernels of the three hSLE cases.
class TiltedModel {
  public:
    TiltedModel(CaseId c, Kappa kappa, double tolerance = 1e-8, double t_min = 0.05);

    CaseId case_id() const { return case_; }
    double alpha() const { return alpha_; }
    double partition() const { return Z_; } // Z_j, finite and positive

    const SpectralModel& model() const { return model_; }

    double quasi_invariant_density(double rp, double rm) const;
    double tilted_transition(double t, double rp, double rm, double rps, double rms) const;
    double survival_probability(double t, double rp, double rm) const;
    // Leading-order comparison value Z_j G_j^*(r) exp(-2 alpha_j t).
    double survival_asymptotic(double t, double rp, double rm) const;

    // Psi(r) (r+ + r-) / G_j^*(r) with all algebraic edge factors combined
    // before exponentiation (the naive quotient overflows near the corner).
    double tilt_base(double rp, double rm) const;

  private:
    CaseId case_;
    Kappa kappa_;
    double alpha_;
    SpectralModel model_;
    double Z_ = 0.0;
};

} // namespace slegf
