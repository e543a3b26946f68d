#include "slegf/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "slegf/special.hpp"

namespace slegf {

Quad1D gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi: n >= 1 required");
    if (!(alpha > -1.0 && beta > -1.0))
        throw std::invalid_argument("gauss_jacobi: alpha, beta must be > -1");
    const double ab = alpha + beta;
    Eigen::VectorXd diag(n), sub(n - 1 > 0 ? n - 1 : 1);
    diag(0) = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double den = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        diag(k) = (beta * beta - alpha * alpha) / den;
        double bk;
        if (k == 1 && std::abs(ab + 1.0) < 1e-13) {
            // 0/0 limit of the standard formula at alpha + beta = -1
            bk = 2.0 * (1.0 + alpha) * (1.0 + beta);
        } else {
            const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
            const double d2 = (2.0 * k + ab) * (2.0 * k + ab);
            bk = num / (d2 * (2.0 * k + ab + 1.0) * (2.0 * k + ab - 1.0));
        }
        sub(k - 1) = std::sqrt(bk);
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + log_gamma(alpha + 1.0) +
                                log_gamma(beta + 1.0) - log_gamma(ab + 2.0));
    Quad1D q;
    q.x.resize(n);
    q.w.resize(n);
    if (n == 1) {
        q.x[0] = diag(0);
        q.w[0] = mu0;
        return q;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
    for (int i = 0; i < n; ++i) {
        q.x[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        q.w[i] = mu0 * v0 * v0;
    }
    return q;
}

Quad1D gauss_jacobi01(int n, double a1, double a0) {
    // u = (1+x)/2: (1-u)^{a1} u^{a0} du = 2^{-(a1+a0+1)} (1-x)^{a1} (1+x)^{a0} dx
    Quad1D q = gauss_jacobi(n, a1, a0);
    const double scale = std::pow(2.0, -(a1 + a0 + 1.0));
    for (int i = 0; i < n; ++i) {
        q.x[i] = 0.5 * (1.0 + q.x[i]);
        q.w[i] *= scale;
    }
    return q;
}

Quad1D gauss_legendre(int n, double a, double b) {
    Quad1D q = gauss_jacobi(n, 0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        q.x[i] = 0.5 * (a + b) + 0.5 * (b - a) * q.x[i];
        q.w[i] *= 0.5 * (b - a);
    }
    return q;
}

Quad1D tanh_sinh01(int level) {
    // nodes t_k = 1/2 + 1/2 tanh((pi/2) sinh(k h)); weights from the map.
    const double h = 1.0 / (1 << level);
    const int kmax = static_cast<int>(6.0 / h);
    Quad1D q;
    for (int k = -kmax; k <= kmax; ++k) {
        const double t = k * h;
        const double sh = std::sinh(t);
        const double u = std::tanh(1.5707963267948966 * sh);
        const double x = 0.5 + 0.5 * u;
        const double dudt = 1.5707963267948966 * std::cosh(t) /
                            std::pow(std::cosh(1.5707963267948966 * sh), 2);
        const double w = 0.5 * h * dudt;
        if (w < 1e-320 || x <= 0.0 || x >= 1.0) continue;
        q.x.push_back(x);
        q.w.push_back(w);
    }
    return q;
}

namespace {

double gauss15(const std::function<double(double)>& f, double a, double b) {
    static const Quad1D q = gauss_jacobi(15, 0.0, 0.0);
    double s = 0.0;
    for (size_t i = 0; i < q.x.size(); ++i)
        s += q.w[i] * f(0.5 * (a + b) + 0.5 * (b - a) * q.x[i]);
    return 0.5 * (b - a) * s;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double rel_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = gauss15(f, a, m);
    const double right = gauss15(f, m, b);
    const double err = std::abs(left + right - whole);
    if (depth <= 0 || err <= rel_tol * std::abs(left + right) || err < 1e-300)
        return left + right;
    return adapt(f, a, m, left, rel_tol, depth - 1) + adapt(f, m, b, right, rel_tol, depth - 1);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
    return adapt(f, a, b, gauss15(f, a, b), rel_tol, max_depth);
}

} // namespace slegf
