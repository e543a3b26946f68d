#include "slegf/special.hpp"

#include <cmath>
#include <limits>

namespace slegf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Lanczos g = 7, 9 coefficients.
constexpr double kLanczos[9] = {
    0.99999999999980993,   676.5203681218851,    -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,  12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_sum(double x) {
    // x >= 0.5; series argument is x-1
    double s = kLanczos[0];
    for (int i = 1; i < 9; ++i) s += kLanczos[i] / (x - 1.0 + i);
    return s;
}

bool near_integer(double x, double tol, long long* out) {
    double r = std::round(x);
    if (std::abs(x - r) < tol) {
        if (out) *out = static_cast<long long>(r);
        return true;
    }
    return false;
}

struct HypParams {
    double a, b, c;
};

HypParams hyp_params(double kappa) { return {4.0 / kappa, 1.0 - 4.0 / kappa, 8.0 / kappa}; }

// Gauss series for 2F1(a,b;c;x); requires convergence (|x|<1, or x=1 with
// c-a-b>0, or terminating b).  max_terms caps the slow regime near x = 1.
double gauss_series(double a, double b, double c, double x, long max_terms) {
    double term = 1.0, sum = 1.0;
    for (long n = 0; n < max_terms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * x;
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Connection-formula evaluation near x = 1 (u = 1-x small), valid when
// d = c-a-b is not close to an integer:
//   F = A * 2F1(a,b; a+b+1-c; u) + B * u^d * 2F1(c-a,c-b; d+1; u)
// Also returns dF/dx through the same expansion.
void hyp_near_one(double a, double b, double c, double u, double* F, double* Fp) {
    const double d = c - a - b;
    const double A = std::exp(log_gamma(c) + log_gamma(d) - log_gamma(c - a) - log_gamma(c - b));
    // Gamma(-d) via reflection: Gamma(-d) = -pi / (d sin(pi d) Gamma(d))
    const double gamma_minus_d = -kPi / (d * std::sin(kPi * d) * std::exp(log_gamma(d)));
    const double B = std::exp(log_gamma(c) - log_gamma(a) - log_gamma(b)) * gamma_minus_d;

    double s1 = 1.0, s1p = 0.0, t1 = 1.0;
    double s2 = 1.0, s2p = 0.0, t2 = 1.0;
    for (int n = 0; n < 200; ++n) {
        double r1 = (a + n) * (b + n) / ((a + b + 1.0 - c + n) * (n + 1.0));
        t1 *= r1 * u;
        s1 += t1;
        s1p += t1 * (n + 1.0) / u;
        double r2 = (c - a + n) * (c - b + n) / ((d + 1.0 + n) * (n + 1.0));
        t2 *= r2 * u;
        s2 += t2;
        s2p += t2 * (n + 1.0) / u;
        if (std::abs(t1) < 1e-18 * std::abs(s1) && std::abs(t2) < 1e-18 * std::abs(s2)) break;
    }
    const double ud = std::pow(u, d);
    *F = A * s1 + B * ud * s2;
    // d/dx = -d/du
    *Fp = -(A * s1p + B * (d * ud / u * s2 + ud * s2p));
}

// Core evaluator shared by hyp2f1_F and hyp2f1_F_prime. deriv_order 0 or 1.
double hyp_F_impl(double kappa, double x, int deriv_order) {
    const HypParams p = hyp_params(kappa);
    const double a = p.a, b = p.b, c = p.c;
    const double d = c - a - b; // = 8/kappa - 1 > 0

    long long bint = 0;
    if (near_integer(b, 1e-12, &bint) && bint <= 0) {
        // Terminating series: polynomial of degree -bint, valid on all of [0,1].
        long m = static_cast<long>(-bint);
        if (deriv_order == 0) return gauss_series(a, b, c, x, m + 2);
        return a * b / c * gauss_series(a + 1.0, b + 1.0, c + 1.0, x, m + 1);
    }

    if (deriv_order == 0 && x >= 1.0 - 1e-13) {
        return std::exp(log_gamma(c) + log_gamma(d) - log_gamma(c - a) - log_gamma(c - b));
    }

    if (x > 0.99) {
        long long dummy;
        if (!near_integer(d, 1e-3, &dummy)) {
            double F, Fp;
            hyp_near_one(a, b, c, 1.0 - x, &F, &Fp);
            return deriv_order == 0 ? F : Fp;
        }
        // Integer d (kappa = 8/(m+1) with non-terminating b): fall through to
        // the direct series; the tail decays like n^{-d-1} x^n with d >= 1.
    }

    long cap = x > 0.95 ? 2000000 : 20000;
    if (deriv_order == 0) return gauss_series(a, b, c, x, cap);
    return a * b / c * gauss_series(a + 1.0, b + 1.0, c + 1.0, x, cap);
}

} // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: requires x > 0");
    if (x < 0.5) return kPi / (std::sin(kPi * x) * gamma_fn(1.0 - x));
    const double t = x + 6.5; // g + 0.5 with series written in x
    return std::sqrt(2.0 * kPi) * std::pow(t, x - 0.5) * std::exp(-t) * lanczos_sum(x);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
    if (x < 0.5)
        return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
    const double t = x + 6.5;
    return 0.5 * std::log(2.0 * kPi) + (x - 0.5) * std::log(t) - t + std::log(lanczos_sum(x));
}

double hyp2f1_F(Kappa kappa, double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("hyp2f1_F: requires x in [0,1]");
    return hyp_F_impl(kappa.value, x, 0);
}

double hyp2f1_F_prime(Kappa kappa, double x) {
    if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("hyp2f1_F_prime: requires x in [0,1)");
    return hyp_F_impl(kappa.value, x, 1);
}

double drift_factor_G(Kappa kappa, double x) {
    if (!(x >= 0.0 && x < 1.0)) throw std::domain_error("drift_factor_G: requires x in [0,1)");
    if (x == 0.0) return 2.0;
    return kappa.value * x * hyp2f1_F_prime(kappa, x) / hyp2f1_F(kappa, x) + 2.0;
}

DriftFactorCache::DriftFactorCache(Kappa kappa) : kappa_(kappa.value) {
    // Uniform panels on [0, 0.9], then geometrically shrinking panels toward
    // 1 down to width ~1e-8; the factor is analytic in each closed panel.
    lo_.push_back(0.0);
    for (int i = 1; i <= 9; ++i) lo_.push_back(0.1 * i);
    double w = 0.05;
    while (w > 1e-8) {
        lo_.push_back(1.0 - w);
        w *= 0.5;
    }
    const int npan = static_cast<int>(lo_.size());
    coef_.assign(static_cast<size_t>(npan) * (kDegree + 1), 0.0);
    std::vector<double> fv(kDegree + 1);
    for (int p = 0; p < npan; ++p) {
        const double a = lo_[p];
        const double b = (p + 1 < npan) ? lo_[p + 1] : 1.0 - 0.5e-8;
        for (int k = 0; k <= kDegree; ++k) {
            double xc = std::cos(kPi * (k + 0.5) / (kDegree + 1));
            double x = 0.5 * (a + b) + 0.5 * (b - a) * xc;
            fv[k] = drift_factor_G(Kappa(kappa_), x);
        }
        for (int j = 0; j <= kDegree; ++j) {
            double s = 0.0;
            for (int k = 0; k <= kDegree; ++k)
                s += fv[k] * std::cos(kPi * j * (k + 0.5) / (kDegree + 1));
            coef_[static_cast<size_t>(p) * (kDegree + 1) + j] = 2.0 / (kDegree + 1) * s;
        }
    }
}

double DriftFactorCache::operator()(double x) const {
    if (x <= 0.0) return 2.0;
    const int npan = static_cast<int>(lo_.size());
    if (x >= 1.0 - 1e-8) x = 1.0 - 1e-8;
    int p = 0;
    if (x < 0.9) {
        p = static_cast<int>(x * 10.0);
    } else {
        p = 9;
        while (p + 1 < npan && x >= lo_[p + 1]) ++p;
    }
    const double a = lo_[p];
    const double b = (p + 1 < npan) ? lo_[p + 1] : 1.0 - 0.5e-8;
    const double u = (2.0 * x - a - b) / (b - a);
    // Clenshaw
    const double* cf = &coef_[static_cast<size_t>(p) * (kDegree + 1)];
    double b1 = 0.0, b2 = 0.0;
    for (int j = kDegree; j >= 1; --j) {
        double t = 2.0 * u * b1 - b2 + cf[j];
        b2 = b1;
        b1 = t;
    }
    return u * b1 - b2 + 0.5 * cf[0];
}

double jacobi_eval(const JacobiParams& p, double x) {
    const double a = p.alpha, b = p.beta;
    if (p.n == 0) return 1.0;
    double pm1 = 1.0;
    double pc = 0.5 * ((a + b + 2.0) * x + (a - b));
    for (int n = 2; n <= p.n; ++n) {
        const double n2ab = 2.0 * n + a + b;
        const double c1 = 2.0 * n * (n + a + b) * (n2ab - 2.0);
        const double c2 = (n2ab - 1.0) * ((n2ab) * (n2ab - 2.0) * x + a * a - b * b);
        const double c3 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * n2ab;
        const double pn = (c2 * pc - c3 * pm1) / c1;
        pm1 = pc;
        pc = pn;
    }
    return pc;
}

double jacobi_norm_sq(const JacobiParams& p) {
    const double a = p.alpha, b = p.beta;
    const int n = p.n;
    if (n == 0) {
        // 2^{a+b+1} B(a+1, b+1); avoids the Gamma(a+b+1) pole at a+b = -1.
        return std::exp((a + b + 1.0) * std::log(2.0) + log_gamma(a + 1.0) + log_gamma(b + 1.0) -
                        log_gamma(a + b + 2.0));
    }
    double lg = (a + b + 1.0) * std::log(2.0) - std::log(2.0 * n + a + b + 1.0) +
                log_gamma(n + a + 1.0) + log_gamma(n + b + 1.0) - log_gamma(n + 1.0) -
                log_gamma(n + a + b + 1.0);
    return std::exp(lg);
}

double jacobi_sup_bound(const JacobiParams& p) {
    const double a = p.alpha, b = p.beta;
    const int n = p.n;
    if (n == 0) return 1.0;
    const double m = std::max(a, b);
    if (m > -0.5) {
        return std::exp(log_gamma(m + n + 1.0) - log_gamma(n + 1.0) - log_gamma(m + 1.0));
    }
    const double t1 = std::exp(log_gamma(a + n + 1.0) - log_gamma(n + 1.0) - log_gamma(a + 1.0));
    const double t2 = (a + b + n + 1.0) *
                      std::exp(log_gamma(m + n + 1.0) - log_gamma(static_cast<double>(n)) -
                               log_gamma(m + 2.0));
    return t1 + t2;
}

double jacobi_derivative(const JacobiParams& p, double x) {
    if (p.n == 0) return 0.0;
    return 0.5 * (p.alpha + p.beta + p.n + 1.0) *
           jacobi_eval(JacobiParams(p.alpha + 1.0, p.beta + 1.0, p.n - 1), x);
}

} // namespace slegf
