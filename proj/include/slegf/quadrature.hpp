// quadrature.hpp
// Gauss-Jacobi rules (Golub-Welsch) and tanh-sinh quadrature for integrands
// with algebraic endpoint singularities.
#pragma once

#include <functional>
#include <vector>

namespace slegf {

struct Quad1D {
    std::vector<double> x;
    std::vector<double> w;
};

// n-point rule for  int_{-1}^{1} f(x) (1-x)^alpha (1+x)^beta dx.
Quad1D gauss_jacobi(int n, double alpha, double beta);

// n-point rule for  int_0^1 f(u) (1-u)^{a1} u^{a0} du  (weights absorb the
// affine map constants).
Quad1D gauss_jacobi01(int n, double a1, double a0);

// n-point Gauss-Legendre on [a, b].
Quad1D gauss_legendre(int n, double a, double b);

// tanh-sinh rule on (0, 1); handles integrable endpoint singularities.
// level sets the node density (nodes ~ 2^level * 6).
Quad1D tanh_sinh01(int level);

// Adaptive 1-D integration of f on [a,b] to the requested relative
// tolerance (Gauss-Kronrod style bisection on embedded Gauss rules).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth = 24);

} // namespace slegf
