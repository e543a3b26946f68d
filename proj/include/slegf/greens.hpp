// greens.hpp
// Closed-form boundary Green's functions G1, G2, G3 for the two-curve
// configurations, their normalized pullbacks G_j^*, the exponents, and the
// Moebius prefactor for a finite reference point on the half-plane boundary.
#pragma once

#include <optional>
#include <stdexcept>

#include "slegf/special.hpp"

namespace slegf {

// j = 1: link (w+ <-> v+; w- <-> v-), neither curve separates the point.
// j = 2: link (w+ <-> w-; v+ <-> v-), one curve separates the point.
// j = 3: the j = 2 pattern with the far force point at infinity.
enum class CaseId { j1 = 1, j2 = 2, j3 = 3 };

struct RhoTriple {
    double rho0, rho_plus, rho_minus;
};

// Force values under which each tilted case reduces to the autonomous
// diffusion: (rho0, rho+, rho-).
RhoTriple case_rhos(CaseId c);

struct Exponents {
    double alpha1, alpha2, alpha3; // decay exponents of the hitting probability
    double beta1p, beta2p, beta3p; // error exponents of the leading-order term
};

Exponents exponents(Kappa kappa);
double case_alpha(CaseId c, Kappa kappa);
double case_beta_decay(CaseId c); // spectral-gap decay rate: 10, 10, 8

// Ordered boundary data.  Cases 1, 2 use all four endpoints with
// v- < w- < w+ < v+; case 3 uses (w+, w-, v+) with w- < w+ < v+.
struct BoundaryData {
    CaseId cse;
    double w_plus, w_minus, v_plus;
    double v_minus; // ignored for case 3
    BoundaryData(CaseId c, double wp, double wm, double vp, double vm = 0.0);
};

double g1(const BoundaryData& d, Kappa kappa);
double g2(const BoundaryData& d, Kappa kappa);
double g3(const BoundaryData& d, Kappa kappa);
double g_eval(const BoundaryData& d, Kappa kappa); // dispatch on d.cse

// Pullback at the normalized configuration: G_j(r+, -r-; 1, -1) for j = 1, 2
// and G_3(r+, -r-; 1).  Continuous extension (0) at vanishing factors.
double g_star(CaseId c, double r_plus, double r_minus, Kappa kappa);

// Green's function at z0 on the real line (or infinity), up to the global
// constant: |(J o f)'(z0)|^alpha_j * G_j(f-images) with f(z) = -1/(z - z0)
// (identity when z0 = infinity).
struct BoundaryPoint {
    bool at_infinity;
    double x;
    static BoundaryPoint infinity() { return {true, 0.0}; }
    static BoundaryPoint at(double x) { return {false, x}; }
};

double boundary_green_halfplane(CaseId c, const BoundaryPoint& z0, double w_plus, double w_minus,
                                double v_plus, double v_minus, Kappa kappa);

} // namespace slegf
