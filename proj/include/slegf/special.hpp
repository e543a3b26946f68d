// special.hpp
// Scalar special functions: Gamma, the Gauss hypergeometric F used by the
// SLE drift factor, and Jacobi polynomials with norms and sup bounds.
#pragma once

#include <stdexcept>
#include <vector>

namespace slegf {

// Diffusion strength of the driving Brownian motion.  Everything in this
// project is restricted to the non-space-filling range.
struct Kappa {
    double value;
    explicit Kappa(double k) : value(k) {
        if (!(k > 0.0 && k < 8.0))
            throw std::invalid_argument("Kappa: value must lie in (0, 8)");
    }
};

struct JacobiParams {
    double alpha;
    double beta;
    int n;
    JacobiParams(double a, double b, int n_) : alpha(a), beta(b), n(n_) {
        if (!(a > -1.0) || !(b > -1.0))
            throw std::invalid_argument("JacobiParams: alpha, beta must be > -1");
        if (n_ < 0)
            throw std::invalid_argument("JacobiParams: n must be >= 0");
    }
};

// Gamma function via a fixed-coefficient Lanczos approximation, reflection
// for x < 0.5.  Relative error <= 1e-12 on [1e-3, 170].
double gamma_fn(double x);
double log_gamma(double x); // x > 0

// F(x) = 2F1(4/kappa, 1 - 4/kappa; 8/kappa; x) on [0, 1].  At x = 1 the
// closed form Gamma(8/k)Gamma(8/k-1) / (Gamma(4/k)Gamma(12/k-1)) is used.
// Strictly positive on [0, 1].
double hyp2f1_F(Kappa kappa, double x);

// Term-by-term derivative of the Gauss series for F, valid on [0, 1).
double hyp2f1_F_prime(Kappa kappa, double x);

// Drift factor  G(x) = kappa * x * F'(x)/F(x) + 2  on [0, 1).
double drift_factor_G(Kappa kappa, double x);

// Fast evaluator for drift_factor_G at a fixed kappa: piecewise-Chebyshev
// cache with panels graded toward x = 1 where F' may blow up.  Used in the
// SDE sampling hot loop; agrees with drift_factor_G to ~1e-10.
class DriftFactorCache {
  public:
    explicit DriftFactorCache(Kappa kappa);
    double operator()(double x) const;
    double kappa() const { return kappa_; }

  private:
    static constexpr int kDegree = 24;
    double kappa_;
    // panel p covers [lo_[p], lo_[p+1]); coef_ holds kDegree+1 Chebyshev
    // coefficients per panel.
    std::vector<double> lo_;
    std::vector<double> coef_;
};

// P_n^{(alpha,beta)}(x) by the three-term recurrence.  Endpoint values match
// the classical normalization P_n(1) = Gamma(alpha+n+1)/(n! Gamma(alpha+1)).
double jacobi_eval(const JacobiParams& p, double x);

// Squared weighted norm of P_n^{(alpha,beta)} against (1-x)^alpha (1+x)^beta.
double jacobi_norm_sq(const JacobiParams& p);

// Sup norm of |P_n| on [-1,1]: exact when max(alpha,beta) > -1/2, otherwise
// the derivative-based upper bound.
double jacobi_sup_bound(const JacobiParams& p);

// d/dx P_n^{(alpha,beta)}(x) via the shifted-parameter identity; 0 for n = 0.
double jacobi_derivative(const JacobiParams& p, double x);

} // namespace slegf
